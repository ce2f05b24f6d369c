#include "pcehinf/hinf.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <complex>

namespace pcehinf {

using CMatrix = Eigen::MatrixXcd;

LtiSystem::LtiSystem(Matrix a, Matrix b, Matrix c, Matrix d)
    : A(std::move(a)), B(std::move(b)), C(std::move(c)), D(std::move(d)) {
  require(A.rows() == A.cols() && B.rows() == A.rows() && C.cols() == A.rows() &&
              D.rows() == C.rows() && D.cols() == B.cols(),
          ErrorKind::DimensionMismatch, "inconsistent state-space dimensions");
}

double spectral_abscissa(const Matrix& A) {
  if (A.size() == 0) return -std::numeric_limits<double>::infinity();
  Eigen::EigenSolver<Matrix> es(A, false);
  return es.eigenvalues().real().maxCoeff();
}

bool is_hurwitz(const Matrix& A, double margin) { return spectral_abscissa(A) < -margin; }

double sigma_max(const LtiSystem& sys, double omega) {
  CMatrix M = -sys.A.cast<std::complex<double>>();
  M.diagonal().array() += std::complex<double>(0.0, omega);
  const CMatrix G = sys.C.cast<std::complex<double>>() *
                        Eigen::PartialPivLU<CMatrix>(M).solve(sys.B.cast<std::complex<double>>()) +
                    sys.D.cast<std::complex<double>>();
  Eigen::JacobiSVD<CMatrix> svd(G);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

namespace {

// Frequencies ω ≥ 0 where γ is a singular value of G(jω): the imaginary-axis
// eigenvalues of the Hamiltonian at level γ.
std::vector<double> crossing_frequencies(const LtiSystem& s, double gamma) {
  const int n = s.nx(), nw = s.nw(), nz = s.nz();
  const double g2 = gamma * gamma;
  const Matrix R = s.D.transpose() * s.D - g2 * Matrix::Identity(nw, nw);
  const Matrix S = s.D * s.D.transpose() - g2 * Matrix::Identity(nz, nz);
  const Matrix Rinv = R.inverse();
  const Matrix Sinv = S.inverse();
  Matrix H(2 * n, 2 * n);
  H.topLeftCorner(n, n) = s.A - s.B * Rinv * s.D.transpose() * s.C;
  H.topRightCorner(n, n) = -gamma * s.B * Rinv * s.B.transpose();
  H.bottomLeftCorner(n, n) = gamma * s.C.transpose() * Sinv * s.C;
  H.bottomRightCorner(n, n) = -s.A.transpose() + s.C.transpose() * s.D * Rinv * s.B.transpose();
  Eigen::EigenSolver<Matrix> es(H, false);
  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  std::vector<double> out;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const auto lam = es.eigenvalues()(i);
    if (lam.imag() >= 0.0 && std::abs(lam.real()) < 1e-7 * std::max(scale, std::abs(lam)))
      out.push_back(lam.imag());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

double hinf_norm(const LtiSystem& sys, double tol) {
  require(tol > 0.0, ErrorKind::InvalidArgument, "tolerance must be positive");
  require(is_hurwitz(sys.A), ErrorKind::UnstableSystem, "H-infinity norm of unstable system");
  if (sys.nx() == 0 || sys.nw() == 0 || sys.nz() == 0) {
    Eigen::JacobiSVD<Matrix> svd(sys.D);
    return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  }
  Eigen::JacobiSVD<Matrix> dsvd(sys.D);
  double lb = dsvd.singularValues().size() ? dsvd.singularValues()(0) : 0.0;
  lb = std::max(lb, sigma_max(sys, 0.0));
  Eigen::EigenSolver<Matrix> es(sys.A, false);
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const auto lam = es.eigenvalues()(i);
    lb = std::max(lb, sigma_max(sys, std::abs(lam.imag())));
    lb = std::max(lb, sigma_max(sys, std::abs(lam)));
  }
  // Level-set iteration: every evaluated σ is a valid lower bound; the level
  // γ = (1+2tol)·lb with no crossing is a certified upper bound.
  for (int it = 0; it < 200; ++it) {
    const double gamma = lb > 0.0 ? lb * (1.0 + 2.0 * tol) : tol;
    const std::vector<double> w = crossing_frequencies(sys, gamma);
    double next = lb;
    for (size_t i = 0; i < w.size(); ++i) {
      next = std::max(next, sigma_max(sys, w[i]));
      if (i + 1 < w.size()) next = std::max(next, sigma_max(sys, 0.5 * (w[i] + w[i + 1])));
    }
    if (next <= lb * (1.0 + tol)) return lb > 0.0 ? lb * (1.0 + tol) : 0.0;
    lb = next;
  }
  fail(ErrorKind::SolverFailure, "H-infinity level-set iteration did not converge");
}

// ---- affine assembly --------------------------------------------------------

AffineSystem AffineSystem::constant(const LtiSystem& s) {
  return {AffineExpr(s.A), AffineExpr(s.B), AffineExpr(s.C), AffineExpr(s.D)};
}

AffineExpr product(const AffineExpr& a, const AffineExpr& b) {
  if (a.is_constant()) return a.constant() * b;
  require(b.is_constant(), ErrorKind::InvalidArgument,
          "product of two non-constant affine expressions is not affine");
  return a * b.constant();
}

AffineExpr scaled_identity(const AffineExpr& s, int n) {
  require(s.rows() == 1 && s.cols() == 1, ErrorKind::DimensionMismatch,
          "scaled_identity needs a scalar expression");
  AffineExpr e(s.constant()(0, 0) * Matrix::Identity(n, n));
  for (const auto& [v, m] : s.terms()) e += AffineExpr::term(v, m(0, 0) * Matrix::Identity(n, n));
  return e;
}

AffineExpr kron_identity(int n, const AffineExpr& e) {
  AffineExpr out(pcehinf::kron_identity(n, e.constant()));
  for (const auto& [v, m] : e.terms()) out += AffineExpr::term(v, pcehinf::kron_identity(n, m));
  return out;
}

AffineSystem expanded_affine(const ExpandedBlocks& eb, const AffineExpr& K) {
  require(K.rows() == eb.nu && K.cols() == eb.ny, ErrorKind::DimensionMismatch,
          "gain must be n_u x n_y");
  const AffineExpr Kbar = kron_identity(eb.nq, K);
  const AffineExpr BK = eb.Bbar * Kbar;
  const AffineExpr DK = eb.DZbar * Kbar;
  return {AffineExpr(eb.A) + BK * eb.Cbar, AffineExpr(eb.Bw) + BK * eb.Dwbar,
          AffineExpr(eb.CZbar) + DK * eb.Cbar, AffineExpr(eb.DZwbar) + DK * eb.Dwbar};
}

AffineSystem sample_affine(const UncertainPlant& plant, const AffineExpr& K,
                           std::span<const double> xi) {
  require(K.rows() == plant.nu() && K.cols() == plant.ny(), ErrorKind::DimensionMismatch,
          "gain must be n_u x n_y");
  const Matrix B = plant.B.eval(xi), C = plant.C.eval(xi), Dw = plant.Dw.eval(xi);
  const AffineExpr BK = B * K;
  const AffineExpr DK = plant.Dz * K;
  return {AffineExpr(plant.A.eval(xi)) + BK * C, AffineExpr(plant.Bw.eval(xi)) + BK * Dw,
          AffineExpr(plant.Cz) + DK * C, AffineExpr(plant.Dzw) + DK * Dw};
}

AffineExpr brl_matrix(const AffineExpr& P, const AffineSystem& s, const AffineExpr& gamma) {
  const int nw = s.B.cols(), nz = s.C.rows();
  const AffineExpr PA = product(P, s.A);
  const AffineExpr PB = product(P, s.B);
  return AffineExpr::blocks({
      {herm(PA), PB, s.C.transpose()},
      {PB.transpose(), -scaled_identity(gamma, nw), s.D.transpose()},
      {s.C, s.D, -scaled_identity(gamma, nz)},
  });
}

AffineExpr robust_matrix(const AffineExpr& P, const AffineSystem& s, const AffineExpr& gamma,
                         const AffineExpr& tau, double rho2) {
  const int n = s.A.rows(), nw = s.B.cols(), nz = s.C.rows();
  const AffineExpr PA = product(P, s.A);
  const AffineExpr PB = product(P, s.B);
  return AffineExpr::blocks({
      {herm(PA) + rho2 * scaled_identity(tau, n), PB, PA, s.C.transpose()},
      {PB.transpose(), -scaled_identity(gamma, nw), AffineExpr(nw, n), s.D.transpose()},
      {PA.transpose(), AffineExpr(n, nw), -scaled_identity(tau, n), s.C.transpose()},
      {s.C, s.D, s.C, -scaled_identity(gamma, nz)},
  });
}

AffineExpr quad_stab_matrix(const AffineExpr& P, const AffineExpr& A, const AffineExpr& tau,
                            double rho2) {
  const int n = A.rows();
  const AffineExpr PA = product(P, A);
  return AffineExpr::blocks({
      {herm(PA) + rho2 * scaled_identity(tau, n), PA},
      {PA.transpose(), -scaled_identity(tau, n)},
  });
}

LmiProblem brl_lmi(const LtiSystem& sys, double gamma) {
  require(gamma > 0.0, ErrorKind::InvalidArgument, "gamma must be positive");
  LmiProblem lp;
  const AffineExpr P = lp.symmetric(sys.nx(), "P");
  lp.negative(brl_matrix(P, AffineSystem::constant(sys), AffineExpr::scalar(gamma)), "brl");
  lp.positive(P, "P");
  return lp;
}

LmiProblem robust_lmi(const ExpandedClosedLoop& sys, double gamma, double rho2, TauMode mode,
                      double tau_value) {
  require(gamma > 0.0 && rho2 >= 0.0, ErrorKind::InvalidArgument,
          "robust LMI needs gamma > 0 and rho2 >= 0");
  LmiProblem lp;
  const AffineExpr P = lp.symmetric(static_cast<int>(sys.A.rows()), "P");
  const AffineExpr tau =
      mode == TauMode::Variable ? lp.scalar("tau") : AffineExpr::scalar(tau_value);
  lp.negative(robust_matrix(P, AffineSystem::constant(LtiSystem(sys)),
                            AffineExpr::scalar(gamma), tau, rho2),
              "robust");
  lp.positive(P, "P");
  if (mode == TauMode::Variable) lp.positive(tau, "tau");
  return lp;
}

LmiProblem polytopic_lmi(const UncertainPlant& plant, const Gain& K, double gamma,
                         const std::vector<std::vector<double>>& vertices) {
  require(gamma > 0.0 && !vertices.empty(), ErrorKind::InvalidArgument,
          "polytopic LMI needs gamma > 0 and at least one vertex");
  LmiProblem lp;
  const AffineExpr P = lp.symmetric(plant.nx(), "P");
  for (size_t i = 0; i < vertices.size(); ++i)
    lp.negative(brl_matrix(P, sample_affine(plant, AffineExpr(K), vertices[i]),
                           AffineExpr::scalar(gamma)),
                "vertex" + std::to_string(i));
  lp.positive(P, "P");
  return lp;
}

LmiProblem quad_stab_lmi(const Matrix& A, double rho2) {
  require(rho2 >= 0.0, ErrorKind::InvalidArgument, "rho2 must be >= 0");
  LmiProblem lp;
  const AffineExpr P = lp.symmetric(static_cast<int>(A.rows()), "P");
  const AffineExpr tau = lp.scalar("tau");
  lp.negative(quad_stab_matrix(P, AffineExpr(A), tau, rho2), "quad_stab");
  lp.positive(P, "P");
  lp.positive(tau, "tau");
  return lp;
}

double brl_min_gamma(const LtiSystem& sys, const SdpOptions& opts) {
  LmiProblem lp;
  const AffineExpr P = lp.symmetric(sys.nx(), "P");
  const AffineExpr gamma = lp.scalar("gamma");
  lp.negative(brl_matrix(P, AffineSystem::constant(sys), gamma), "brl");
  lp.positive(P, "P");
  lp.minimize(gamma);
  const SdpSolution sol = solve(lp, opts);
  require(sol.status == SdpStatus::Optimal, ErrorKind::SolverFailure,
          std::string("BRL minimization failed: ") + to_string(sol.status));
  return sol.objective;
}

}  // namespace pcehinf
