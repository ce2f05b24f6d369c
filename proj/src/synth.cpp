#include "pcehinf/synth.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "pcehinf/parallel.hpp"

namespace pcehinf {

const char* to_string(SynthesisMode m) {
  switch (m) {
    case SynthesisMode::WorstCase:
      return "worst-case";
    case SynthesisMode::NominalPce:
      return "nominal-pce";
    case SynthesisMode::RobustPce:
      return "robust-pce";
  }
  return "unknown";
}

SynthesisMode parse_mode(const std::string& s) {
  if (s == "worst-case" || s == "worstcase" || s == "wc") return SynthesisMode::WorstCase;
  if (s == "nominal-pce" || s == "nominal" || s == "pce") return SynthesisMode::NominalPce;
  if (s == "robust-pce" || s == "robust") return SynthesisMode::RobustPce;
  fail(ErrorKind::InvalidArgument,
       "unknown mode '" + s + "' (expected worst-case, nominal-pce or robust-pce)");
}

namespace {

// Constraint assembly shared by the P-step, the K-step and the stabilization
// loop of one synthesis mode.
class ModeModel {
 public:
  ModeModel(const UncertainPlant& plant, const SynthesisConfig& cfg)
      : plant_(plant), mode_(cfg.mode), rho2_(cfg.rho2) {
    require(cfg.p >= 0 && cfg.rho2 >= 0.0, ErrorKind::InvalidArgument,
            "synthesis needs p >= 0 and rho2 >= 0");
    if (mode_ == SynthesisMode::WorstCase) {
      vertices_ = cfg.vertices.empty() ? plant.polytope_vertices() : cfg.vertices;
      state_dim_ = plant.nx();
    } else {
      const OrthonormalBasis basis = basis_for(plant, cfg.p);
      blocks_ = expand_blocks(plant, basis, cfg.p);
      state_dim_ = blocks_.nx * blocks_.np;
    }
  }

  int state_dim() const { return state_dim_; }
  bool uses_tau() const { return mode_ == SynthesisMode::RobustPce; }

  std::vector<AffineSystem> systems(const AffineExpr& K) const {
    if (mode_ != SynthesisMode::WorstCase) return {expanded_affine(blocks_, K)};
    std::vector<AffineSystem> out;
    for (const auto& v : vertices_) out.push_back(sample_affine(plant_, K, v));
    return out;
  }

  void performance(LmiProblem& lp, const AffineExpr& P, const AffineExpr& K,
                   const AffineExpr& gamma, const AffineExpr& tau) const {
    const auto sys = systems(K);
    for (size_t i = 0; i < sys.size(); ++i) {
      if (uses_tau())
        lp.negative(robust_matrix(P, sys[i], gamma, tau, rho2_), "robust");
      else
        lp.negative(brl_matrix(P, sys[i], gamma), "brl" + std::to_string(i));
    }
    add_positivity(lp, P, tau);
  }

  // Lyapunov-type blocks with decay rate −α (quadratic LDI stability in
  // robust mode).
  void decay(LmiProblem& lp, const AffineExpr& P, const AffineExpr& K, const AffineExpr& tau,
             const AffineExpr& alpha) const {
    for (const auto& s : systems(K)) {
      const int n = s.A.rows();
      // V̇ ≤ 2αV along the (LDI) trajectories.
      const AffineExpr shift = 2.0 * product(scaled_identity(alpha, n), P);
      if (!uses_tau()) {
        lp.negative(herm(product(P, s.A)) - shift, "decay");
        continue;
      }
      AffineExpr pad(2 * n, 2 * n);
      pad += AffineExpr::blocks({{shift, AffineExpr(n, n)}, {AffineExpr(n, n), AffineExpr(n, n)}});
      lp.negative(quad_stab_matrix(P, s.A, tau, rho2_) - pad, "decay");
    }
  }

  double max_abscissa(const Gain& K) const {
    double a = -std::numeric_limits<double>::infinity();
    for (const auto& s : systems(AffineExpr(K))) a = std::max(a, spectral_abscissa(s.A.constant()));
    return a;
  }

 private:
  void add_positivity(LmiProblem& lp, const AffineExpr& P, const AffineExpr& tau) const {
    if (!P.is_constant()) lp.positive(P, "P");
    if (uses_tau() && !tau.is_constant()) lp.positive(tau, "tau");
  }

  const UncertainPlant& plant_;
  SynthesisMode mode_;
  double rho2_;
  std::vector<std::vector<double>> vertices_;
  ExpandedBlocks blocks_;
  int state_dim_ = 0;
};

struct Certificate {
  double gamma = 0.0;
  Matrix P;
  double tau = 0.0;
};

std::vector<int> vars_of(const AffineExpr& e) {
  std::vector<int> v;
  for (const auto& [k, m] : e.terms()) v.push_back(k);
  return v;
}

// Minimum γ for fixed K.
std::optional<Certificate> p_step(const ModeModel& mm, const Gain& K) {
  LmiProblem lp;
  const AffineExpr P = lp.symmetric(mm.state_dim(), "P");
  const AffineExpr tau = mm.uses_tau() ? lp.scalar("tau") : AffineExpr::scalar(0.0);
  const AffineExpr gamma = lp.scalar("gamma");
  mm.performance(lp, P, AffineExpr(K), gamma, tau);
  lp.minimize(gamma);
  const SdpSolution sol = solve(lp);
  if (sol.status != SdpStatus::Optimal) return std::nullopt;
  Certificate c;
  c.gamma = sol.objective;
  c.P = P.value({sol.x.data(), static_cast<size_t>(sol.x.size())});
  c.tau = mm.uses_tau() ? tau.value({sol.x.data(), static_cast<size_t>(sol.x.size())})(0, 0) : 0.0;
  if (!std::isfinite(c.gamma) || c.gamma <= 0.0) return std::nullopt;
  return c;
}

// Well-centred (P, τ) feasible at a fixed γ.
std::optional<Certificate> central_step(const ModeModel& mm, const Gain& K, double gamma) {
  LmiProblem lp;
  const AffineExpr P = lp.symmetric(mm.state_dim(), "P");
  const AffineExpr tau = mm.uses_tau() ? lp.scalar("tau") : AffineExpr::scalar(0.0);
  mm.performance(lp, P, AffineExpr(K), AffineExpr::scalar(gamma), tau);
  const FeasibilityResult fr = feasibility(lp);
  if (!fr.feasible) return std::nullopt;
  const std::span<const double> x(fr.x.data(), static_cast<size_t>(fr.x.size()));
  return Certificate{gamma, P.value(x), mm.uses_tau() ? tau.value(x)(0, 0) : 0.0};
}

std::optional<std::pair<Gain, double>> k_step(const ModeModel& mm, const Certificate& c, int nu,
                                              int ny, double k_bound) {
  LmiProblem lp;
  const AffineExpr K = lp.general(nu, ny, "K");
  const AffineExpr gamma = lp.scalar("gamma");
  mm.performance(lp, AffineExpr(c.P), K, gamma, AffineExpr::scalar(c.tau));
  for (int v : vars_of(K)) lp.bound(v, -k_bound, k_bound);
  lp.minimize(gamma);
  const SdpSolution sol = solve(lp);
  if (sol.status != SdpStatus::Optimal) return std::nullopt;
  return std::pair{Gain(K.value({sol.x.data(), static_cast<size_t>(sol.x.size())})),
                   sol.objective};
}

struct DecayCertificate {
  double alpha = 0.0;
  Matrix P;
  double tau = 0.0;
};

std::optional<DecayCertificate> decay_feasible(const ModeModel& mm, const Gain& K, double alpha) {
  const int n = mm.state_dim();
  LmiProblem lp;
  const AffineExpr P = lp.symmetric(n, "P");
  const AffineExpr tau = mm.uses_tau() ? lp.scalar("tau") : AffineExpr::scalar(0.0);
  mm.decay(lp, P, AffineExpr(K), tau, AffineExpr::scalar(alpha));
  lp.positive(P - AffineExpr(Matrix::Identity(n, n)), "P>=I");
  if (mm.uses_tau()) lp.positive(tau, "tau");
  const FeasibilityResult fr = feasibility(lp);
  if (!fr.feasible) return std::nullopt;
  const std::span<const double> x(fr.x.data(), static_cast<size_t>(fr.x.size()));
  return DecayCertificate{alpha, P.value(x), mm.uses_tau() ? tau.value(x)(0, 0) : 0.0};
}

// Smallest certified decay bound α for fixed K, by bisection.
std::optional<DecayCertificate> decay_p_step(const ModeModel& mm, const Gain& K) {
  const double lo0 = mm.max_abscissa(K);
  double lo = lo0, step = std::max(1e-2, 0.1 * std::abs(lo0));
  std::optional<DecayCertificate> hi;
  for (int i = 0; i < 40 && !hi; ++i, step *= 2.0) hi = decay_feasible(mm, K, lo0 + step);
  if (!hi) return std::nullopt;
  while (hi->alpha - lo > 1e-4 * (1.0 + std::abs(hi->alpha))) {
    const double mid = 0.5 * (lo + hi->alpha);
    if (auto c = decay_feasible(mm, K, mid))
      hi = std::move(c);
    else
      lo = mid;
  }
  return hi;
}

std::optional<Gain> decay_k_step(const ModeModel& mm, const DecayCertificate& c, const Gain& K,
                                 double k_bound) {
  LmiProblem kp;
  const AffineExpr Kv = kp.general(static_cast<int>(K.rows()), static_cast<int>(K.cols()), "K");
  const AffineExpr alpha = kp.scalar("alpha");
  mm.decay(kp, AffineExpr(c.P), Kv, AffineExpr::scalar(c.tau), alpha);
  for (int v : vars_of(Kv)) kp.bound(v, -k_bound, k_bound);
  kp.minimize(alpha);
  const SdpSolution ks = solve(kp);
  if (ks.status != SdpStatus::Optimal) return std::nullopt;
  return Gain(Kv.value({ks.x.data(), static_cast<size_t>(ks.x.size())}));
}

// Drives the certified decay bound negative by alternating over (P, τ) and K,
// with the same centring and step schedule as the γ alternation. Returns a
// gain with a finite certified γ.
std::optional<Gain> stabilize(const ModeModel& mm, Gain K, const SynthesisConfig& cfg) {
  auto cert = decay_p_step(mm, K);
  if (!cert) return std::nullopt;
  const double steps[] = {1.0, 0.5, 0.25};
  for (int it = 0; it < 4 * cfg.max_outer_iters; ++it) {
    if (cert->alpha < 0.0 && p_step(mm, K)) return K;
    const double a = cert->alpha;
    const double base_slack = std::max(0.01, 0.1 * std::abs(a));
    std::optional<std::pair<Gain, DecayCertificate>> accepted;
    for (const double slack : {base_slack, 0.25 * base_slack, 0.0}) {
      const auto centre = slack > 0.0 ? decay_feasible(mm, K, a + slack) : cert;
      if (!centre) continue;
      const auto kn = decay_k_step(mm, *centre, K, cfg.k_bound);
      if (!kn) continue;
      for (const double lambda : steps) {
        const Gain trial = K + lambda * (*kn - K);
        const auto next = decay_p_step(mm, trial);
        if (next && next->alpha < a - 1e-6 * (1.0 + std::abs(a))) {
          accepted.emplace(trial, *next);
          break;
        }
      }
      if (accepted) break;
    }
    if (!accepted) return std::nullopt;
    K = accepted->first;
    cert = accepted->second;
  }
  return std::nullopt;
}

RestartTrace run_restart(const ModeModel& mm, const SynthesisConfig& cfg, const Gain& k_init,
                         int index) {
  RestartTrace tr;
  tr.restart = index;
  tr.k_init = k_init;
  std::optional<Certificate> cert = p_step(mm, k_init);
  Gain K = k_init;
  if (!cert) {
    const auto ks = stabilize(mm, k_init, cfg);
    if (!ks) {
      tr.failure = "stabilization failed";
      return tr;
    }
    K = *ks;
    cert = p_step(mm, K);
    if (!cert) {
      tr.failure = "no certificate for stabilized gain";
      return tr;
    }
  }
  tr.gamma.push_back(cert->gamma);
  // Each round tries progressively tighter centring slacks and shorter steps
  // toward the K-step gain; the first certified improvement is accepted.
  const double slacks[] = {cfg.relax, 0.25 * cfg.relax, 0.0};
  const double steps[] = {1.0, 0.5, 0.25};
  for (int it = 0; it < cfg.max_outer_iters; ++it) {
    const double g = cert->gamma;
    std::optional<std::pair<Gain, Certificate>> accepted;
    for (const double slack : slacks) {
      std::optional<Certificate> centre =
          slack > 0.0 ? central_step(mm, K, g * (1.0 + slack)) : cert;
      if (!centre) continue;
      const auto step = k_step(mm, *centre, static_cast<int>(K.rows()),
                               static_cast<int>(K.cols()), cfg.k_bound);
      if (!step) continue;
      for (const double lambda : steps) {
        const Gain trial = K + lambda * (step->first - K);
        const auto next = p_step(mm, trial);
        if (next && next->gamma < g) {
          accepted.emplace(trial, *next);
          break;
        }
      }
      if (accepted) break;
    }
    if (!accepted) break;
    K = accepted->first;
    cert = accepted->second;
    tr.gamma.push_back(cert->gamma);
    if (g - cert->gamma < cfg.tol * g) break;
  }
  tr.K = K;
  tr.success = true;
  return tr;
}

Matrix mean_of(const UncertainPlant& plant, const PolynomialMatrix& m) {
  const OrthonormalBasis basis = OrthonormalBasis::build(plant.dist, 0, m.degree());
  return polymat_pce(basis, m, m.degree())[0];
}

Gain random_gain(const UncertainPlant& plant, std::uint64_t seed) {
  const double scale = 1.0 / std::max(1e-12, mean_of(plant, plant.B).norm());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Gain K(plant.nu(), plant.ny());
  for (int i = 0; i < K.rows(); ++i)
    for (int j = 0; j < K.cols(); ++j) K(i, j) = scale * g(rng);
  return K;
}

Gain initial_gain(const UncertainPlant& plant, const SynthesisConfig& cfg) {
  const Gain zero = Gain::Zero(plant.nu(), plant.ny());
  switch (cfg.k_init) {
    case KInitPolicy::Zero:
      return zero;
    case KInitPolicy::Random:
      return random_gain(plant, cfg.seed);
    case KInitPolicy::Given:
      require(cfg.k_given.has_value(), ErrorKind::InvalidArgument,
              "K_init policy 'given' needs a gain");
      require(cfg.k_given->rows() == plant.nu() && cfg.k_given->cols() == plant.ny(),
              ErrorKind::DimensionMismatch, "initial gain must be n_u x n_y");
      return *cfg.k_given;
    case KInitPolicy::Auto:
      break;
  }
  if (stability_post_analysis(plant, zero, cfg.stability_grid, cfg.stability_margin).stable ||
      cfg.mode == SynthesisMode::WorstCase)
    return zero;
  SynthesisConfig wc = cfg;
  wc.mode = SynthesisMode::WorstCase;
  wc.k_init = KInitPolicy::Zero;
  wc.restarts = 1;
  try {
    return synthesize(plant, wc).K;
  } catch (const Error&) {
    return random_gain(plant, cfg.seed);
  }
}

}  // namespace

StabilityReport stability_post_analysis(const UncertainPlant& plant, const Gain& K, int grid_n,
                                        double margin) {
  require(grid_n >= 2, ErrorKind::InvalidArgument, "stability grid needs at least 2 points");
  const Matrix grid = sample_xi(plant.dist, grid_n, 0, SampleMode::Grid);
  StabilityReport rep;
  rep.points = static_cast<int>(grid.cols());
  rep.margin = margin;
  rep.max_real_part = -std::numeric_limits<double>::infinity();
  std::vector<double> xi(plant.n_xi());
  for (int s = 0; s < grid.cols(); ++s) {
    for (int d = 0; d < plant.n_xi(); ++d) xi[d] = grid(d, s);
    const double a = spectral_abscissa(close_loop(plant, K, xi).A);
    if (a > rep.max_real_part) {
      rep.max_real_part = a;
      rep.worst_xi = xi;
    }
  }
  rep.stable = rep.max_real_part < -margin;
  return rep;
}

std::optional<double> certified_gamma(const UncertainPlant& plant, const SynthesisConfig& cfg,
                                      const Gain& K) {
  const ModeModel mm(plant, cfg);
  const auto c = p_step(mm, K);
  if (!c) return std::nullopt;
  return c->gamma;
}

LmiProblem certificate_lmi(const UncertainPlant& plant, const SynthesisConfig& cfg,
                           const Gain& K, double gamma) {
  const ModeModel mm(plant, cfg);
  LmiProblem lp;
  lp.margin = 0.0;
  const AffineExpr P = lp.symmetric(mm.state_dim(), "P");
  const AffineExpr tau = mm.uses_tau() ? lp.scalar("tau") : AffineExpr::scalar(0.0);
  mm.performance(lp, P, AffineExpr(K), AffineExpr::scalar(gamma), tau);
  return lp;
}

bool lmi_recheck(const UncertainPlant& plant, const SynthesisConfig& cfg, const Gain& K,
                 double gamma) {
  const LmiProblem lp = certificate_lmi(plant, cfg, K, gamma);
  const FeasibilityResult fr = feasibility(lp);
  const auto vals = lp.evaluate({fr.x.data(), static_cast<size_t>(fr.x.size())});
  for (size_t b = 0; b < vals.size(); ++b) {
    const double lmin = Eigen::SelfAdjointEigenSolver<Matrix>(vals[b], Eigen::EigenvaluesOnly)
                            .eigenvalues()(0);
    if (lmin < -1e-7 * (1.0 + lp.blocks()[b].F0.norm())) return false;
  }
  return true;
}

SynthesisResult synthesize(const UncertainPlant& plant, const SynthesisConfig& cfg) {
  plant.validate();
  require(cfg.restarts >= 1 && cfg.max_outer_iters >= 0, ErrorKind::InvalidArgument,
          "restarts must be >= 1");
  const ModeModel mm(plant, cfg);
  const Gain k0 = initial_gain(plant, cfg);

  std::vector<Gain> starts{k0};
  for (const Gain& g : cfg.extra_starts) {
    require(g.rows() == plant.nu() && g.cols() == plant.ny(), ErrorKind::DimensionMismatch,
            "initial gain must be n_u x n_y");
    starts.push_back(g);
  }
  for (int r = 1; r < cfg.restarts; ++r)
    starts.push_back(random_gain(plant, cfg.seed + static_cast<std::uint64_t>(r)));
  const int n_starts = static_cast<int>(starts.size());

  std::vector<RestartTrace> traces(n_starts);
  parallel_for(n_starts, [&](int r) { traces[r] = run_restart(mm, cfg, starts[r], r); });

  int best = -1;
  for (int r = 0; r < n_starts; ++r)
    if (traces[r].success && (best < 0 || traces[r].gamma.back() < traces[best].gamma.back()))
      best = r;
  if (best < 0)
    fail(ErrorKind::NoFeasibleStart, std::string("no restart produced a certified ") +
                                         to_string(cfg.mode) + " gain (" + traces[0].failure +
                                         ")");

  SynthesisResult res;
  res.K = traces[best].K;
  res.gamma = traces[best].gamma.back();
  res.iterations = static_cast<int>(traces[best].gamma.size()) - 1;
  res.best_restart = best;
  res.traces = std::move(traces);
  res.rho2 = cfg.rho2;
  res.mode = cfg.mode;
  res.stability = stability_post_analysis(plant, res.K, cfg.stability_grid, cfg.stability_margin);
  return res;
}

RhoBisectionResult rho_bisection(const UncertainPlant& plant, const SynthesisConfig& cfg,
                                 double rho2_hi, double tol) {
  require(rho2_hi >= 0.0 && tol > 0.0, ErrorKind::InvalidArgument,
          "bisection needs rho2_hi >= 0 and tol > 0");
  // Every probe starts from the nominal PCE optimum at the same degree, so
  // the robust problem is followed continuously from ρ² = 0, and from the
  // policy's initial gain, which covers ρ² beyond the nominal basin.
  SynthesisConfig nominal = cfg;
  nominal.mode = SynthesisMode::NominalPce;
  nominal.rho2 = 0.0;
  SynthesisConfig base = cfg;
  base.mode = SynthesisMode::RobustPce;
  base.extra_starts.insert(base.extra_starts.begin(), initial_gain(plant, base));
  base.k_given = synthesize(plant, nominal).K;
  base.k_init = KInitPolicy::Given;

  RhoBisectionResult out;
  std::optional<SynthesisResult> best;
  auto probe = [&](double rho2) {
    RhoProbe pr;
    pr.rho2 = rho2;
    SynthesisConfig c = base;
    c.rho2 = rho2;
    try {
      SynthesisResult r = synthesize(plant, c);
      pr.synthesized = true;
      pr.gamma = r.gamma;
      pr.K = r.K;
      pr.max_real_part = r.stability.max_real_part;
      pr.stable = r.stability.stable;
      if (pr.stable) best = std::move(r);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoFeasibleStart && e.kind() != ErrorKind::SolverFailure) throw;
    }
    out.probes.push_back(pr);
    return pr;
  };

  const RhoProbe hi = probe(rho2_hi);
  if (!hi.synthesized)
    fail(ErrorKind::InfeasibleAtHi,
         "robust synthesis infeasible at rho2 = " + std::to_string(rho2_hi));
  if (!hi.stable)
    fail(ErrorKind::UnstableSystem, "gain synthesized at rho2 = " + std::to_string(rho2_hi) +
                                        " fails stability post-analysis");
  double lo = 0.0, up = rho2_hi;
  SynthesisResult at_up = *best;
  if (probe(0.0).stable) {
    up = 0.0;
    at_up = *best;
  } else {
    while (up - lo > tol) {
      const double mid = 0.5 * (lo + up);
      if (probe(mid).stable) {
        up = mid;
        at_up = *best;
      } else {
        lo = mid;
      }
    }
  }
  out.rho2_min = up;
  out.result = std::move(at_up);
  return out;
}

}  // namespace pcehinf
