#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "pcehinf/common.hpp"

namespace pcehinf {

/// Exponent vector of a monomial ξ_1^{s_1} ⋯ ξ_n^{s_n}.
struct MultiIndex {
  std::vector<int> exponents;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> e) : exponents(std::move(e)) {}
  static MultiIndex zero(int n) { return MultiIndex(std::vector<int>(n, 0)); }

  int dim() const { return static_cast<int>(exponents.size()); }
  int degree() const;
  bool operator==(const MultiIndex&) const = default;

  /// Value of the monomial at a point.
  double eval(std::span<const double> xi) const;
};

/// Graded ordering: total degree first, then reverse-lexicographic on the
/// exponents so that ξ_1 precedes ξ_2 within a degree.
struct GradedLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

/// All multi-indices of dimension n with total degree ≤ p, in graded order.
std::vector<MultiIndex> graded_multi_indices(int n, int p);

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b);

/// Scalar multivariate polynomial in monomial form.
class Polynomial {
 public:
  using Terms = std::map<MultiIndex, double, GradedLess>;

  Polynomial() = default;
  explicit Polynomial(int n_vars) : n_vars_(n_vars) {}
  static Polynomial constant(int n_vars, double c);
  static Polynomial variable(int n_vars, int index);

  int n_vars() const { return n_vars_; }
  const Terms& terms() const { return terms_; }
  int degree() const;
  bool is_zero() const { return terms_.empty(); }

  /// Adds c·ξ^S; exact zeros are dropped.
  void add_term(const MultiIndex& s, double c);
  double coefficient(const MultiIndex& s) const;
  double eval(std::span<const double> xi) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator*=(double c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(double c, Polynomial a) { return a *= c; }
  Polynomial pow(int e) const;

  bool operator==(const Polynomial& o) const { return n_vars_ == o.n_vars_ && terms_ == o.terms_; }

 private:
  int n_vars_ = 0;
  Terms terms_;
};

/// Matrix whose entries are polynomials in ξ, stored as matrix-valued monomial
/// coefficients M(ξ) = Σ_S α_S ξ^S.
class PolynomialMatrix {
 public:
  using Terms = std::map<MultiIndex, Matrix, GradedLess>;

  PolynomialMatrix() = default;
  PolynomialMatrix(int rows, int cols, int n_xi) : rows_(rows), cols_(cols), n_xi_(n_xi) {}
  static PolynomialMatrix constant(const Matrix& m, int n_xi);
  /// Entrywise assembly; all entries must share n_vars.
  static PolynomialMatrix from_entries(const std::vector<std::vector<Polynomial>>& entries,
                                       int n_xi);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int n_xi() const { return n_xi_; }
  const Terms& terms() const { return terms_; }
  int degree() const;
  bool is_constant() const { return degree() == 0; }

  void add_term(const MultiIndex& s, const Matrix& coeff);
  Matrix eval(std::span<const double> xi) const;
  Polynomial entry(int r, int c) const;

  PolynomialMatrix& operator+=(const PolynomialMatrix& o);
  friend PolynomialMatrix operator+(PolynomialMatrix a, const PolynomialMatrix& b) {
    return a += b;
  }
  friend PolynomialMatrix operator*(const PolynomialMatrix& a, const PolynomialMatrix& b);
  friend PolynomialMatrix operator*(const Matrix& a, const PolynomialMatrix& b);
  friend PolynomialMatrix operator*(const PolynomialMatrix& a, const Matrix& b);

 private:
  int rows_ = 0;
  int cols_ = 0;
  int n_xi_ = 0;
  Terms terms_;
};

}  // namespace pcehinf
