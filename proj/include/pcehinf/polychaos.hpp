#pragma once

#include <functional>
#include <map>
#include <span>
#include <vector>

#include "pcehinf/common.hpp"
#include "pcehinf/polynomial.hpp"

namespace pcehinf {

enum class DistKind { Uniform, Gaussian };

/// One scalar parameter. Uniform uses [lo, hi]; Gaussian uses mean lo and
/// standard deviation hi.
struct ParamDist {
  DistKind kind = DistKind::Uniform;
  double lo = -1.0;
  double hi = 1.0;

  static ParamDist uniform(double a, double b);
  static ParamDist gaussian(double mean = 0.0, double stddev = 1.0);
};

/// Product distribution of independent parameters.
struct Distribution {
  std::vector<ParamDist> params;
  bool independent = true;

  int dim() const { return static_cast<int>(params.size()); }
  static Distribution uniform(int n, double a = -1.0, double b = 1.0);
  void validate() const;
};

/// Tensor Gauss rule: nodes are stored column-wise (n_ξ × Q).
struct Quadrature {
  Matrix nodes;
  Vector weights;
  int exact_degree = 0;

  int size() const { return static_cast<int>(weights.size()); }
};

/// Gauss rule for one standardized family with `n` nodes, mapped onto `param`.
Quadrature gauss_rule_1d(const ParamDist& param, int n);

/// Number of basis terms of total degree ≤ p in n variables.
int basis_size(int n_xi, int p);

/// Orthonormal polynomial basis over a product distribution, ordered by graded
/// multi-index, with the quadrature rule and monomial table used everywhere
/// downstream. Immutable after construction.
class OrthonormalBasis {
 public:
  /// `working_degree` bounds the monomials stored in the table and the triple
  /// products the rule integrates exactly; it defaults to `p`.
  /// `quad_nodes` is per dimension; 0 selects the default.
  static OrthonormalBasis build(const Distribution& dist, int p, int working_degree = -1,
                                int quad_nodes = 0);

  static int default_quad_nodes(int working_degree);

  const Distribution& distribution() const { return dist_; }
  int dim() const { return dist_.dim(); }
  int degree() const { return p_; }
  int working_degree() const { return working_; }
  /// N_p+1 for the construction degree.
  int size() const { return basis_size(dim(), p_); }
  /// Number of stored functions (all degrees up to the working degree).
  int table_size() const { return static_cast<int>(indices_.size()); }
  int size_for_degree(int d) const;

  const MultiIndex& multi_index(int i) const { return indices_.at(i); }
  int index_of(const MultiIndex& s) const;

  /// Monomial-form representation of φ_i.
  const Polynomial& basis_polynomial(int i) const { return polys_.at(i); }

  /// φ_0..φ_{n-1} at ξ; n defaults to size().
  Vector evaluate(std::span<const double> xi, int n = -1) const;

  const Quadrature& quadrature() const { return quad_; }
  /// Values of φ_i at every node, column i contiguous (Q × table_size).
  const Matrix& node_values() const { return values_; }

  /// Exact expansion coefficients of ξ^S, zero-padded or truncated to `length`
  /// (default size()). Throws DegreeOverflow past the working degree.
  Vector monomial_pce(const MultiIndex& s, int length = -1) const;
  /// Row i: coefficients of the i-th graded monomial (all stored monomials).
  const Matrix& monomial_table() const { return beta_; }

  /// ψ_i = Σ_q w_q f(ξ_q) φ_i(ξ_q), i < length.
  Vector project(const std::function<double(std::span<const double>)>& f, int length = -1) const;
  double expectation(const std::function<double(std::span<const double>)>& f) const;

  /// E{φ_i φ_j φ_k} by quadrature.
  double triple_product(int i, int j, int k) const;
  /// E{φ_i φ_j}; the self-check compares this against δ_ij.
  double inner(int i, int j) const;
  double orthonormality_error() const;

 private:
  Distribution dist_;
  int p_ = 0;
  int working_ = 0;
  std::vector<MultiIndex> indices_;
  std::vector<Polynomial> polys_;
  Quadrature quad_;
  Matrix values_;
  Matrix beta_;
};

struct MeanVar {
  double mean = 0.0;
  double variance = 0.0;
};

MeanVar mean_var(std::span<const double> coeffs);

/// Matrix PCE coefficients with M(ξ) = Σ_i M̂_i φ_i(ξ), one per basis index
/// of degree ≤ q.
std::vector<Matrix> polymat_pce(const OrthonormalBasis& basis, const PolynomialMatrix& m, int q);

/// Σ_i coeffs[i] φ_i(ξ).
Matrix reconstruct(const OrthonormalBasis& basis, std::span<const Matrix> coeffs,
                   std::span<const double> xi);

}  // namespace pcehinf
