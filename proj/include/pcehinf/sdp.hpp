#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "pcehinf/affine.hpp"
#include "pcehinf/common.hpp"

namespace pcehinf {

/// One symmetric constraint block F_0 + Σ x_v F_v ≽ margin·I.
struct LmiBlock {
  std::string name;
  Matrix F0;
  std::vector<std::pair<int, Matrix>> terms;
  int dim() const { return static_cast<int>(F0.rows()); }
};

/// minimize cᵀx subject to a list of symmetric blocks. Strict inequalities
/// are imposed with an absolute margin; simple variable bounds are kept
/// separately and never shifted.
class LmiProblem {
 public:
  double margin = 1e-6;

  int n_vars() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& var_names() const { return names_; }
  const std::vector<LmiBlock>& blocks() const { return blocks_; }
  const Vector& objective() const { return c_; }
  double objective_offset() const { return c0_; }

  int add_variable(const std::string& name);
  AffineExpr scalar(const std::string& name);
  AffineExpr symmetric(int n, const std::string& name);
  AffineExpr general(int rows, int cols, const std::string& name);

  /// e ≻ 0 (imposed as e ≽ margin·I). e is symmetrized.
  void positive(const AffineExpr& e, const std::string& name);
  /// e ≺ 0.
  void negative(const AffineExpr& e, const std::string& name);
  /// lo ≤ x_v ≤ hi; either side may be infinite.
  void bound(int var, double lo, double hi);
  /// Objective from a 1×1 affine expression.
  void minimize(const AffineExpr& e);

  struct Bound {
    int var;
    double lo, hi;
  };
  const std::vector<Bound>& bounds() const { return bounds_; }

  /// F_0 + Σ x F per block (without the margin shift).
  std::vector<Matrix> evaluate(std::span<const double> x) const;

 private:
  std::vector<std::string> names_;
  std::vector<LmiBlock> blocks_;
  std::vector<Bound> bounds_;
  Vector c_;
  double c0_ = 0.0;
};

enum class SdpStatus { Optimal, Infeasible, MaxIter, NumericalFailure };
const char* to_string(SdpStatus s);

struct SdpOptions {
  int max_iter = 200;
  double tol = 1e-8;
  /// Box applied to every variable; 0 disables.
  double var_bound = 1e6;
  double step_fraction = 0.95;
  /// Run the phase-1 problem when the main solve fails to classify it.
  bool certify_infeasible = true;
};

struct SdpSolution {
  SdpStatus status = SdpStatus::NumericalFailure;
  Vector x;
  double objective = 0.0;
  double gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  /// λ_min(F_0 + Σ x F) per block, unshifted.
  std::vector<double> min_eig;
};

SdpSolution solve(const LmiProblem& problem, const SdpOptions& opts = {});

struct FeasibilityResult {
  bool feasible = false;
  /// Optimal phase-1 value: smallest t with F(x) + tI ≽ 0 for every block.
  double t = 0.0;
  Vector x;
  SdpStatus status = SdpStatus::NumericalFailure;
};

/// Phase-1 test; feasible iff the optimal t is below −margin/2 (t is clamped
/// at −1).
FeasibilityResult feasibility(const LmiProblem& problem, const SdpOptions& opts = {});

/// Plain-text SDPA sparse format (constant matrix negated and margin-shifted),
/// for cross-checks with external solvers. Bounds form a diagonal block.
void dump_sdpa(const LmiProblem& problem, std::ostream& os);

}  // namespace pcehinf
