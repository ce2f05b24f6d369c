#pragma once

#include <vector>

#include "pcehinf/affine.hpp"
#include "pcehinf/common.hpp"
#include "pcehinf/galerkin.hpp"
#include "pcehinf/plant.hpp"
#include "pcehinf/sdp.hpp"

namespace pcehinf {

/// ẋ = Ax + Bw, z = Cx + Dw.
struct LtiSystem {
  Matrix A, B, C, D;

  LtiSystem() = default;
  LtiSystem(Matrix a, Matrix b, Matrix c, Matrix d);
  explicit LtiSystem(const ClosedLoopSample& s) : LtiSystem(s.A, s.B, s.C, s.D) {}
  explicit LtiSystem(const ExpandedClosedLoop& s) : LtiSystem(s.A, s.B, s.C, s.D) {}

  int nx() const { return static_cast<int>(A.rows()); }
  int nw() const { return static_cast<int>(B.cols()); }
  int nz() const { return static_cast<int>(C.rows()); }
};

double spectral_abscissa(const Matrix& A);
bool is_hurwitz(const Matrix& A, double margin = 0.0);

/// σ_max(C(jωI − A)⁻¹B + D).
double sigma_max(const LtiSystem& sys, double omega);

/// L2-induced gain. Throws UnstableSystem if A is not Hurwitz. The result is
/// within tol·(1+γ) of the true norm.
double hinf_norm(const LtiSystem& sys, double tol = 1e-6);

/// The same system with matrices affine in decision variables.
struct AffineSystem {
  AffineExpr A, B, C, D;
  static AffineSystem constant(const LtiSystem& s);
};

/// Proposed expanded closed loop with gain K (K may be a decision variable).
AffineSystem expanded_affine(const ExpandedBlocks& blocks, const AffineExpr& K);
/// Closed loop of the plant at a fixed parameter value.
AffineSystem sample_affine(const UncertainPlant& plant, const AffineExpr& K,
                           std::span<const double> xi);

/// Product of affine expressions where at least one factor is constant.
AffineExpr product(const AffineExpr& a, const AffineExpr& b);
/// s·I_n for a 1×1 expression s.
AffineExpr scaled_identity(const AffineExpr& s, int n);
/// I_n ⊗ E.
AffineExpr kron_identity(int n, const AffineExpr& e);

/// Bounded-real matrix [He(PA), PB, Cᵀ; BᵀP, −γI, Dᵀ; C, D, −γI] (≺ 0 certifies
/// ‖·‖∞ < γ with storage xᵀPx).
AffineExpr brl_matrix(const AffineExpr& P, const AffineSystem& s, const AffineExpr& gamma);

/// Robust LDI matrix with a Δ-channel of width n_x:
/// [He(PA)+τρ²I, PB, PA, Cᵀ; BᵀP, −γI, 0, Dᵀ; AᵀP, 0, −τI, Cᵀ; C, D, C, −γI].
AffineExpr robust_matrix(const AffineExpr& P, const AffineSystem& s, const AffineExpr& gamma,
                         const AffineExpr& tau, double rho2);

/// Internal-stability specialization [He(PA)+τρ²I, PA; AᵀP, −τI].
AffineExpr quad_stab_matrix(const AffineExpr& P, const AffineExpr& A, const AffineExpr& tau,
                            double rho2);

/// BRL feasibility problem in P for a fixed γ.
LmiProblem brl_lmi(const LtiSystem& sys, double gamma);

enum class TauMode { Variable, Fixed };

/// Robust LMI in (P, τ) for fixed K and γ; with TauMode::Fixed τ = tau_value.
LmiProblem robust_lmi(const ExpandedClosedLoop& sys, double gamma, double rho2,
                      TauMode mode = TauMode::Variable, double tau_value = 1.0);

/// One BRL block per vertex with a shared P.
LmiProblem polytopic_lmi(const UncertainPlant& plant, const Gain& K, double gamma,
                         const std::vector<std::vector<double>>& vertices);

/// Quadratic stability of the LDI in (P, τ).
LmiProblem quad_stab_lmi(const Matrix& A, double rho2);

/// Smallest γ with a feasible BRL, by SDP (cross-check for hinf_norm).
double brl_min_gamma(const LtiSystem& sys, const SdpOptions& opts = {});

}  // namespace pcehinf
