#include "pcehinf/sdp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

namespace pcehinf {

// ---- problem builder --------------------------------------------------------

int LmiProblem::add_variable(const std::string& name) {
  names_.push_back(name);
  c_.conservativeResize(n_vars());
  c_(n_vars() - 1) = 0.0;
  return n_vars() - 1;
}

AffineExpr LmiProblem::scalar(const std::string& name) {
  return AffineExpr::term(add_variable(name), Matrix::Ones(1, 1));
}

AffineExpr LmiProblem::symmetric(int n, const std::string& name) {
  AffineExpr e(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Matrix unit = Matrix::Zero(n, n);
      unit(i, j) = unit(j, i) = 1.0;
      e += AffineExpr::term(
          add_variable(name + "[" + std::to_string(i) + "," + std::to_string(j) + "]"), unit);
    }
  return e;
}

AffineExpr LmiProblem::general(int rows, int cols, const std::string& name) {
  AffineExpr e(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      Matrix unit = Matrix::Zero(rows, cols);
      unit(i, j) = 1.0;
      e += AffineExpr::term(
          add_variable(name + "[" + std::to_string(i) + "," + std::to_string(j) + "]"), unit);
    }
  return e;
}

void LmiProblem::positive(const AffineExpr& e, const std::string& name) {
  require(e.rows() == e.cols() && e.rows() > 0, ErrorKind::DimensionMismatch,
          "LMI block must be square and non-empty");
  LmiBlock b;
  b.name = name;
  b.F0 = 0.5 * (e.constant() + e.constant().transpose());
  for (const auto& [v, m] : e.terms()) {
    require(v < n_vars(), ErrorKind::InvalidArgument, "LMI references unknown variable");
    Matrix f = 0.5 * (m + m.transpose());
    if (!f.isZero(0.0)) b.terms.emplace_back(v, std::move(f));
  }
  blocks_.push_back(std::move(b));
}

void LmiProblem::negative(const AffineExpr& e, const std::string& name) { positive(-e, name); }

void LmiProblem::bound(int var, double lo, double hi) {
  require(var >= 0 && var < n_vars() && lo <= hi, ErrorKind::InvalidArgument, "invalid bound");
  bounds_.push_back({var, lo, hi});
}

void LmiProblem::minimize(const AffineExpr& e) {
  require(e.rows() == 1 && e.cols() == 1, ErrorKind::DimensionMismatch,
          "objective must be a scalar expression");
  c_.setZero(n_vars());
  c0_ = e.constant()(0, 0);
  for (const auto& [v, m] : e.terms()) c_(v) = m(0, 0);
}

std::vector<Matrix> LmiProblem::evaluate(std::span<const double> x) const {
  std::vector<Matrix> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) {
    Matrix f = b.F0;
    for (const auto& [v, m] : b.terms) f += x[v] * m;
    out.push_back(std::move(f));
  }
  return out;
}

const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::Optimal:
      return "optimal";
    case SdpStatus::Infeasible:
      return "infeasible";
    case SdpStatus::MaxIter:
      return "max_iter";
    case SdpStatus::NumericalFailure:
      return "numerical_failure";
  }
  return "unknown";
}

// ---- interior point ---------------------------------------------------------

namespace {

struct DenseBlock {
  int n = 0;
  Matrix F0;
  std::vector<int> vars;
  std::vector<Matrix> F;
  Matrix Fm;  // row i = vec(F_i)
};

// Scaled conic form: F0_b + Σ x F_b ≽ 0 for dense blocks, lp0 + A x ≥ 0 for
// the diagonal block.
struct Model {
  int m = 0;
  std::vector<DenseBlock> blocks;
  Matrix lpA;
  Vector lp0;
};

struct IpmResult {
  SdpStatus status = SdpStatus::NumericalFailure;
  Vector x;
  double gap = 0.0, pinf = 0.0, dinf = 0.0;
  int iterations = 0;
};

void finish_block(DenseBlock& b) {
  const int k = static_cast<int>(b.F.size());
  b.Fm.resize(k, b.n * b.n);
  for (int i = 0; i < k; ++i) b.Fm.row(i) = Eigen::Map<const Vector>(b.F[i].data(), b.n * b.n);
}

void add_bound_rows(Model& md, const std::vector<LmiProblem::Bound>& bounds, int n_orig,
                    double box) {
  std::vector<std::tuple<int, double, double>> rows;  // var, coef, constant
  for (const auto& b : bounds) {
    if (std::isfinite(b.lo)) rows.emplace_back(b.var, 1.0, -b.lo);
    if (std::isfinite(b.hi)) rows.emplace_back(b.var, -1.0, b.hi);
  }
  if (box > 0.0)
    for (int v = 0; v < n_orig; ++v) {
      rows.emplace_back(v, 1.0, box);
      rows.emplace_back(v, -1.0, box);
    }
  md.lpA = Matrix::Zero(static_cast<int>(rows.size()), md.m);
  md.lp0.resize(static_cast<int>(rows.size()));
  for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
    const auto [v, coef, c] = rows[r];
    const double s = 1.0 / std::max(1.0, std::abs(c));
    md.lpA(r, v) = coef * s;
    md.lp0(r) = c * s;
  }
}

// Largest α ≤ cap with X + αΔ ≽ 0, given the Cholesky factor of X.
double max_step(const Eigen::LLT<Matrix>& llt, const Matrix& d) {
  const Matrix t = llt.matrixL().solve(d);
  const Matrix w = llt.matrixL().solve(t.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (w + w.transpose()), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  return lmin >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / lmin;
}

double max_step_lp(const Vector& s, const Vector& ds) {
  double a = std::numeric_limits<double>::infinity();
  for (int i = 0; i < s.size(); ++i)
    if (ds(i) < 0.0) a = std::min(a, -s(i) / ds(i));
  return a;
}

Matrix sym(const Matrix& m) { return 0.5 * (m + m.transpose()); }

IpmResult ipm(const Model& md, const Vector& c, const SdpOptions& opts) {
  const int m = md.m;
  const int nb = static_cast<int>(md.blocks.size());
  const int nlp = static_cast<int>(md.lp0.size());
  IpmResult res;
  Vector x = Vector::Zero(m);
  std::vector<Matrix> S(nb), Y(nb);
  int total_dim = nlp;
  double f0_norm = md.lp0.norm();
  for (int b = 0; b < nb; ++b) {
    const int n = md.blocks[b].n;
    const double z = std::max(10.0, std::sqrt(static_cast<double>(n)));
    S[b] = z * Matrix::Identity(n, n);
    Y[b] = z * Matrix::Identity(n, n);
    total_dim += n;
    f0_norm = std::max(f0_norm, md.blocks[b].F0.norm());
  }
  Vector s_lp = Vector::Constant(nlp, 10.0);
  Vector y_lp = Vector::Constant(nlp, 10.0);
  const double c_norm = c.norm();

  std::vector<Matrix> Rd(nb), Sinv(nb), dS(nb), dY(nb), dSa(nb), dYa(nb);
  std::vector<Eigen::LLT<Matrix>> cholS(nb), cholY(nb);
  Vector r_lp, dx, ds_lp, dy_lp, dsa_lp, dya_lp;
  int stalls = 0;
  IpmResult best;
  double best_merit = std::numeric_limits<double>::infinity();

  for (int it = 0; it <= opts.max_iter; ++it) {
    res.iterations = it;
    // Residuals.
    Vector aty = md.lpA.transpose() * y_lp;
    double dobj = -md.lp0.dot(y_lp);
    double comp = s_lp.dot(y_lp);
    double pinf2 = 0.0;
    for (int b = 0; b < nb; ++b) {
      const DenseBlock& blk = md.blocks[b];
      Rd[b] = blk.F0 - S[b];
      for (size_t k = 0; k < blk.vars.size(); ++k) Rd[b] += x(blk.vars[k]) * blk.F[k];
      pinf2 += Rd[b].squaredNorm();
      const Vector ty = blk.Fm * Eigen::Map<const Vector>(Y[b].data(), blk.n * blk.n);
      for (size_t k = 0; k < blk.vars.size(); ++k) aty(blk.vars[k]) += ty(k);
      dobj -= (blk.F0.cwiseProduct(Y[b])).sum();
      comp += (S[b].cwiseProduct(Y[b])).sum();
    }
    r_lp = md.lp0 + md.lpA * x - s_lp;
    pinf2 += r_lp.squaredNorm();
    const Vector rp = c - aty;
    const double pobj = c.dot(x);
    res.pinf = std::sqrt(pinf2) / (1.0 + f0_norm);
    res.dinf = rp.norm() / (1.0 + c_norm);
    res.gap = std::max(std::abs(pobj - dobj), comp) / (1.0 + std::abs(pobj) + std::abs(dobj));
    res.x = x;
    const double merit = std::max({res.pinf, res.dinf, res.gap});
    if (merit < best_merit) {
      best_merit = merit;
      best = res;
    }
    // The gap is driven one decade past tol so the iterate itself, not only
    // the objective bound, is accurate to tol.
    if (res.pinf < opts.tol && res.dinf < opts.tol && res.gap < 0.1 * opts.tol) {
      res.status = SdpStatus::Optimal;
      return res;
    }
    if (it == opts.max_iter) break;
    double ymax = y_lp.size() ? y_lp.cwiseAbs().maxCoeff() : 0.0;
    for (int b = 0; b < nb; ++b) ymax = std::max(ymax, Y[b].cwiseAbs().maxCoeff());
    if (ymax > 1e13 || stalls >= 5) break;

    const double mu = comp / total_dim;
    // Factorizations and Schur complement.
    Matrix M = Matrix::Zero(m, m);
    bool breakdown = false;
    for (int b = 0; b < nb && !breakdown; ++b) {
      const DenseBlock& blk = md.blocks[b];
      cholS[b].compute(S[b]);
      cholY[b].compute(Y[b]);
      if (cholS[b].info() != Eigen::Success || cholY[b].info() != Eigen::Success) breakdown = true;
      if (breakdown) break;
      Sinv[b] = cholS[b].solve(Matrix::Identity(blk.n, blk.n));
      const int k = static_cast<int>(blk.vars.size());
      if (k == 0) continue;
      Matrix G(blk.n * blk.n, k);
      for (int j = 0; j < k; ++j) {
        const Matrix g = Y[b] * blk.F[j] * Sinv[b];
        G.col(j) = Eigen::Map<const Vector>(g.data(), blk.n * blk.n);
      }
      const Matrix Mb = blk.Fm * G;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) M(blk.vars[i], blk.vars[j]) += Mb(i, j);
    }
    if (breakdown) break;
    const Vector lp_ratio = y_lp.cwiseQuotient(s_lp);
    M.noalias() += md.lpA.transpose() * lp_ratio.asDiagonal() * md.lpA;
    M = sym(M);
    Eigen::LLT<Matrix> cholM(M);
    if (cholM.info() != Eigen::Success) {
      const double ridge = 1e-12 * std::max(1.0, M.diagonal().cwiseAbs().maxCoeff());
      cholM.compute(M + ridge * Matrix::Identity(m, m));
      if (cholM.info() != Eigen::Success) break;
    }

    // Search direction for centering σ and optional second-order correction.
    auto direction = [&](double sigma, bool corrected) {
      Vector rhs = -rp;
      std::vector<Matrix> R(nb);
      for (int b = 0; b < nb; ++b) {
        const DenseBlock& blk = md.blocks[b];
        R[b] = sigma * mu * Sinv[b] - Y[b] - Y[b] * Rd[b] * Sinv[b];
        if (corrected) R[b] -= dYa[b] * dSa[b] * Sinv[b];
        if (blk.vars.empty()) continue;
        const Vector t = blk.Fm * Eigen::Map<const Vector>(R[b].data(), blk.n * blk.n);
        for (size_t k = 0; k < blk.vars.size(); ++k) rhs(blk.vars[k]) += t(k);
      }
      Vector r_l = Vector::Constant(nlp, sigma * mu).cwiseQuotient(s_lp) - y_lp -
                   lp_ratio.cwiseProduct(r_lp);
      if (corrected) r_l -= dya_lp.cwiseProduct(dsa_lp).cwiseQuotient(s_lp);
      rhs += md.lpA.transpose() * r_l;
      dx = cholM.solve(rhs);
      for (int b = 0; b < nb; ++b) {
        const DenseBlock& blk = md.blocks[b];
        dS[b] = Rd[b];
        for (size_t k = 0; k < blk.vars.size(); ++k) dS[b] += dx(blk.vars[k]) * blk.F[k];
        Matrix d = sigma * mu * Sinv[b] - Y[b] - Y[b] * dS[b] * Sinv[b];
        if (corrected) d -= dYa[b] * dSa[b] * Sinv[b];
        dY[b] = sym(d);
      }
      ds_lp = md.lpA * dx + r_lp;
      dy_lp = Vector::Constant(nlp, sigma * mu).cwiseQuotient(s_lp) - y_lp -
              lp_ratio.cwiseProduct(ds_lp);
      if (corrected) dy_lp -= dya_lp.cwiseProduct(dsa_lp).cwiseQuotient(s_lp);
    };
    auto step_lengths = [&]() {
      double ap = max_step_lp(s_lp, ds_lp);
      double ad = max_step_lp(y_lp, dy_lp);
      for (int b = 0; b < nb; ++b) {
        ap = std::min(ap, max_step(cholS[b], dS[b]));
        ad = std::min(ad, max_step(cholY[b], dY[b]));
      }
      return std::pair{ap, ad};
    };

    // Predictor.
    direction(0.0, false);
    auto [ap_max, ad_max] = step_lengths();
    const double ap_aff = std::min(1.0, ap_max), ad_aff = std::min(1.0, ad_max);
    double comp_aff = (s_lp + ap_aff * ds_lp).dot(y_lp + ad_aff * dy_lp);
    for (int b = 0; b < nb; ++b)
      comp_aff += ((S[b] + ap_aff * dS[b]).cwiseProduct(Y[b] + ad_aff * dY[b])).sum();
    const double ratio = std::clamp(comp_aff / comp, 0.0, 1.0);
    const double sigma = ratio * ratio * ratio;

    // Corrector.
    dSa = dS;
    dYa = dY;
    dsa_lp = ds_lp;
    dya_lp = dy_lp;
    direction(sigma, true);
    std::tie(ap_max, ad_max) = step_lengths();
    const double ap = std::min(1.0, opts.step_fraction * ap_max);
    const double ad = std::min(1.0, opts.step_fraction * ad_max);
    stalls = (ap < 1e-9 && ad < 1e-9) ? stalls + 1 : 0;

    x += ap * dx;
    s_lp += ap * ds_lp;
    y_lp += ad * dy_lp;
    for (int b = 0; b < nb; ++b) {
      S[b] = sym(S[b] + ap * dS[b]);
      Y[b] = sym(Y[b] + ad * dY[b]);
    }
  }
  // Progress stopped: fall back to the best iterate seen, accepting slightly
  // looser tolerances.
  const int iterations = res.iterations;
  if (best_merit < std::numeric_limits<double>::infinity()) res = best;
  res.iterations = iterations;
  if (res.pinf < 10 * opts.tol && res.dinf < 10 * opts.tol && res.gap < 100 * opts.tol)
    res.status = SdpStatus::Optimal;
  else
    res.status = iterations >= opts.max_iter ? SdpStatus::MaxIter : SdpStatus::NumericalFailure;
  return res;
}

double block_scale(const LmiBlock& b) {
  double n2 = b.F0.squaredNorm();
  for (const auto& [v, f] : b.terms) n2 += f.squaredNorm();
  return n2 > 0.0 ? 1.0 / std::sqrt(n2) : 1.0;
}

// Dense blocks scaled, with the constant shifted by `shift`·I and an extra
// variable `t_var` entering each block with coefficient I (phase-1).
Model build_model(const LmiProblem& p, double shift, int t_var, double box) {
  Model md;
  md.m = p.n_vars() + (t_var >= 0 ? 1 : 0);
  for (const auto& lb : p.blocks()) {
    const double s = block_scale(lb);
    DenseBlock b;
    b.n = lb.dim();
    b.F0 = s * (lb.F0 - shift * Matrix::Identity(b.n, b.n));
    for (const auto& [v, f] : lb.terms) {
      b.vars.push_back(v);
      b.F.push_back(s * f);
    }
    if (t_var >= 0) {
      b.vars.push_back(t_var);
      b.F.push_back(s * Matrix::Identity(b.n, b.n));
    }
    finish_block(b);
    md.blocks.push_back(std::move(b));
  }
  auto bounds = p.bounds();
  if (t_var >= 0) bounds.push_back({t_var, -1.0, std::numeric_limits<double>::infinity()});
  add_bound_rows(md, bounds, p.n_vars(), box);
  return md;
}

std::vector<double> block_min_eigs(const LmiProblem& p, std::span<const double> x) {
  std::vector<double> out;
  for (const Matrix& f : p.evaluate(x)) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(f, Eigen::EigenvaluesOnly);
    out.push_back(es.eigenvalues()(0));
  }
  return out;
}

}  // namespace

FeasibilityResult feasibility(const LmiProblem& problem, const SdpOptions& opts) {
  FeasibilityResult fr;
  const int m = problem.n_vars();
  if (problem.blocks().empty()) {
    fr.feasible = true;
    fr.t = -1.0;
    fr.x = Vector::Zero(m);
    fr.status = SdpStatus::Optimal;
    return fr;
  }
  const Model md = build_model(problem, 0.0, m, opts.var_bound);
  Vector c = Vector::Zero(m + 1);
  c(m) = 1.0;
  const IpmResult r = ipm(md, c, opts);
  fr.status = r.status;
  fr.x = r.x.head(m);
  fr.t = r.x(m);
  const auto eigs = block_min_eigs(problem, {fr.x.data(), static_cast<size_t>(m)});
  const double worst = *std::min_element(eigs.begin(), eigs.end());
  if (r.status == SdpStatus::Optimal) {
    fr.t = std::max(fr.t, -worst);
    fr.feasible = fr.t < -problem.margin / 2;
  } else {
    fr.feasible = worst > problem.margin / 2;
  }
  return fr;
}

SdpSolution solve(const LmiProblem& problem, const SdpOptions& opts) {
  SdpSolution sol;
  const int m = problem.n_vars();
  const Model md = build_model(problem, problem.margin, -1, opts.var_bound);
  const Vector& c_raw = problem.objective();
  const double cs = std::max(1.0, c_raw.size() ? c_raw.cwiseAbs().maxCoeff() : 0.0);
  const IpmResult r = ipm(md, c_raw / cs, opts);
  sol.status = r.status;
  sol.x = r.x;
  sol.iterations = r.iterations;
  sol.gap = r.gap;
  sol.primal_infeasibility = r.pinf;
  sol.dual_infeasibility = r.dinf;
  sol.objective = c_raw.dot(sol.x) + problem.objective_offset();
  sol.min_eig = block_min_eigs(problem, {sol.x.data(), static_cast<size_t>(m)});
  if (sol.status != SdpStatus::Optimal && opts.certify_infeasible) {
    const FeasibilityResult fr = feasibility(problem, opts);
    if (!fr.feasible && fr.status == SdpStatus::Optimal) sol.status = SdpStatus::Infeasible;
  }
  return sol;
}

void dump_sdpa(const LmiProblem& problem, std::ostream& os) {
  const int m = problem.n_vars();
  std::vector<std::tuple<int, double, double>> rows;
  for (const auto& b : problem.bounds()) {
    if (std::isfinite(b.lo)) rows.emplace_back(b.var, 1.0, -b.lo);
    if (std::isfinite(b.hi)) rows.emplace_back(b.var, -1.0, b.hi);
  }
  const int nblocks = static_cast<int>(problem.blocks().size()) + (rows.empty() ? 0 : 1);
  os << std::setprecision(17);
  os << "\"pcehinf LMI problem, margin " << problem.margin << "\n";
  for (int v = 0; v < m; ++v) os << "*var " << v + 1 << " " << problem.var_names()[v] << "\n";
  os << m << "\n" << nblocks << "\n";
  for (const auto& b : problem.blocks()) os << b.dim() << " ";
  if (!rows.empty()) os << -static_cast<int>(rows.size());
  os << "\n";
  for (int v = 0; v < m; ++v) os << problem.objective()(v) << (v + 1 < m ? " " : "\n");
  if (m == 0) os << "\n";
  auto emit = [&](int mat, int blk, const Matrix& f) {
    for (int i = 0; i < f.rows(); ++i)
      for (int j = i; j < f.cols(); ++j)
        if (f(i, j) != 0.0)
          os << mat << " " << blk << " " << i + 1 << " " << j + 1 << " " << f(i, j) << "\n";
  };
  int blk = 1;
  for (const auto& b : problem.blocks()) {
    emit(0, blk, -(b.F0 - problem.margin * Matrix::Identity(b.dim(), b.dim())));
    for (const auto& [v, f] : b.terms) emit(v + 1, blk, f);
    ++blk;
  }
  for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
    const auto [v, coef, c] = rows[r];
    os << 0 << " " << blk << " " << r + 1 << " " << r + 1 << " " << -c << "\n";
    os << v + 1 << " " << blk << " " << r + 1 << " " << r + 1 << " " << coef << "\n";
  }
}

}  // namespace pcehinf
