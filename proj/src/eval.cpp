#include "pcehinf/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pcehinf/hinf.hpp"
#include "pcehinf/kernels.hpp"
#include "pcehinf/parallel.hpp"

namespace pcehinf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kChunk = 512;

NormDistribution evaluate_norms(const UncertainPlant& plant, const Gain& K, Matrix xi,
                                std::vector<double> weight, double tol) {
  const int n = static_cast<int>(xi.cols());
  NormDistribution out;
  out.gamma.assign(n, kInf);
  parallel_for(n, [&](int s) {
    const Vector point = xi.col(s);
    const LtiSystem sys(close_loop(plant, K, {point.data(), static_cast<size_t>(point.size())}));
    if (is_hurwitz(sys.A)) out.gamma[s] = hinf_norm(sys, tol);
  });
  double wsum = 0.0, acc = 0.0;
  for (int s = 0; s < n; ++s) {
    if (!std::isfinite(out.gamma[s])) {
      out.unstable.push_back(s);
      continue;
    }
    out.worst_case = std::max(out.worst_case, out.gamma[s]);
    acc += weight[s] * out.gamma[s];
    wsum += weight[s];
  }
  if (!out.unstable.empty()) out.worst_case = kInf;
  out.averaged = wsum > 0.0 ? acc / wsum : kInf;
  out.xi = std::move(xi);
  out.weight = std::move(weight);
  return out;
}

Vector initial_state(const UncertainPlant& plant, const SimulationConfig& cfg) {
  if (cfg.x0.size() == 0) {
    Vector x = Vector::Zero(plant.nx());
    x(0) = 1.0;
    return x;
  }
  require(cfg.x0.size() == plant.nx(), ErrorKind::DimensionMismatch,
          "x0 has " + std::to_string(cfg.x0.size()) + " entries, plant has " +
              std::to_string(plant.nx()) + " states");
  return cfg.x0;
}

int step_count(const SimulationConfig& cfg) {
  require(cfg.dt > 0.0 && cfg.T > 0.0, ErrorKind::InvalidArgument, "T and dt must be positive");
  return static_cast<int>(std::llround(cfg.T / cfg.dt));
}

double blowup_limit(const Vector& x0) { return 1e12 * (1.0 + x0.cwiseAbs().maxCoeff()); }

void guard(std::span<const double> x, double limit, const char* what) {
  for (const double v : x)
    if (!(std::abs(v) < limit)) fail(ErrorKind::UnstableSystem, std::string(what) + " diverged");
}

// Structure-of-arrays copy of per-sample closed-loop A matrices.
std::vector<double> soa_matrices(const UncertainPlant& plant, const Gain& K, const Matrix& xi,
                                 int first, int count) {
  const int n = plant.nx();
  std::vector<double> a(static_cast<size_t>(n) * n * count);
  for (int s = 0; s < count; ++s) {
    const Vector point = xi.col(first + s);
    const Matrix A = close_loop(plant, K, {point.data(), static_cast<size_t>(point.size())}).A;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) a[(static_cast<size_t>(r) * n + c) * count + s] = A(r, c);
  }
  return a;
}

TrajectoryStats expanded_trajectory(const Matrix& A, int nx, const Vector& x0, int steps,
                                    double dt, TrajectorySource source) {
  const int n = static_cast<int>(A.rows());
  const int np = n / nx;
  std::vector<double> a(static_cast<size_t>(n) * n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) a[static_cast<size_t>(r) * n + c] = A(r, c);
  std::vector<double> X(n, 0.0);
  for (int i = 0; i < nx; ++i) X[i] = x0(i);
  const double limit = blowup_limit(x0);

  TrajectoryStats out;
  out.source = source;
  out.t.resize(steps + 1);
  out.mean.resize(nx, steps + 1);
  out.variance.resize(nx, steps + 1);
  auto record = [&](int k) {
    out.t[k] = k * dt;
    for (int i = 0; i < nx; ++i) {
      out.mean(i, k) = X[i];
      double v = 0.0;
      for (int j = 1; j < np; ++j) v += X[j * nx + i] * X[j * nx + i];
      out.variance(i, k) = v;
    }
  };
  record(0);
  for (int k = 1; k <= steps; ++k) {
    kernels::ensemble_rk4(n, 1, a, X, dt, 1);
    guard(X, limit, "expanded trajectory");
    record(k);
  }
  return out;
}

struct ChunkMoments {
  int count = 0;
  Matrix mean, m2;  // n_x × steps+1
};

}  // namespace

NormDistribution norm_distribution(const UncertainPlant& plant, const Gain& K, int grid_n,
                                   double tol) {
  require(grid_n >= 2, ErrorKind::InvalidArgument, "grid size must be >= 2");
  Matrix xi = sample_xi(plant.dist, grid_n, 0, SampleMode::Grid);
  std::vector<double> weight(xi.cols(), 1.0);
  for (Eigen::Index s = 0; s < xi.cols(); ++s)
    for (int k = 0; k < plant.n_xi(); ++k) {
      const ParamDist& d = plant.dist.params[k];
      if (d.kind == DistKind::Gaussian) {
        const double z = (xi(k, s) - d.lo) / d.hi;
        weight[s] *= std::exp(-0.5 * z * z);
      }
    }
  double total = 0.0;
  for (const double w : weight) total += w;
  for (double& w : weight) w /= total;
  return evaluate_norms(plant, K, std::move(xi), std::move(weight), tol);
}

NormDistribution norm_distribution_at(const UncertainPlant& plant, const Gain& K,
                                      const Matrix& xi, double tol) {
  require(xi.rows() == plant.n_xi() && xi.cols() >= 1, ErrorKind::DimensionMismatch,
          "sample matrix does not match the parameter dimension");
  std::vector<double> weight(xi.cols(), 1.0 / static_cast<double>(xi.cols()));
  return evaluate_norms(plant, K, xi, std::move(weight), tol);
}

const char* to_string(TrajectorySource s) {
  switch (s) {
    case TrajectorySource::MonteCarlo: return "monte_carlo";
    case TrajectorySource::ExpandedProposed: return "expanded_proposed";
    case TrajectorySource::ExpandedLegacy: return "expanded_legacy";
  }
  return "?";
}

SimulationResult simulate_stats(const UncertainPlant& plant, const Gain& K, int p,
                                const SimulationConfig& cfg) {
  require(cfg.n_mc >= 2, ErrorKind::InvalidArgument, "n_mc must be >= 2");
  const Vector x0 = initial_state(plant, cfg);
  const int steps = step_count(cfg);
  const int nx = plant.nx();
  const double limit = blowup_limit(x0);

  const Matrix xi = sample_xi(plant.dist, cfg.n_mc, cfg.seed, SampleMode::Random);
  const int chunks = (cfg.n_mc + kChunk - 1) / kChunk;
  std::vector<ChunkMoments> parts(chunks);
  parallel_for(chunks, [&](int c) {
    const int first = c * kChunk;
    const int ns = std::min(kChunk, cfg.n_mc - first);
    const std::vector<double> a = soa_matrices(plant, K, xi, first, ns);
    std::vector<double> x(static_cast<size_t>(nx) * ns);
    for (int r = 0; r < nx; ++r) std::fill_n(x.begin() + r * ns, ns, x0(r));
    ChunkMoments& m = parts[c];
    m.count = ns;
    m.mean.resize(nx, steps + 1);
    m.m2.resize(nx, steps + 1);
    auto record = [&](int k) {
      for (int r = 0; r < nx; ++r) {
        const kernels::Moments mo =
            kernels::moments({x.data() + static_cast<size_t>(r) * ns, static_cast<size_t>(ns)});
        m.mean(r, k) = mo.mean;
        m.m2(r, k) = mo.variance * (ns - 1);
      }
    };
    record(0);
    for (int k = 1; k <= steps; ++k) {
      kernels::ensemble_rk4(nx, ns, a, x, cfg.dt, 1);
      guard(x, limit, "Monte-Carlo trajectory");
      record(k);
    }
  });

  SimulationResult out;
  TrajectoryStats& mc = out.monte_carlo;
  mc.source = TrajectorySource::MonteCarlo;
  mc.t.resize(steps + 1);
  for (int k = 0; k <= steps; ++k) mc.t[k] = k * cfg.dt;
  // Pairwise moment merge in chunk order keeps the result thread-count independent.
  Matrix mean = parts[0].mean, m2 = parts[0].m2;
  double count = parts[0].count;
  for (int c = 1; c < chunks; ++c) {
    const double nb = parts[c].count, n = count + nb;
    const Matrix delta = parts[c].mean - mean;
    mean += delta * (nb / n);
    m2 += parts[c].m2 + delta.cwiseProduct(delta) * (count * nb / n);
    count = n;
  }
  mc.mean = std::move(mean);
  mc.variance = m2 / (count - 1.0);

  const ExpandedBlocks blocks = expand_blocks(plant, basis_for(plant, p), p);
  out.proposed = expanded_trajectory(assemble_closed_loop(blocks, K).A, nx, x0, steps, cfg.dt,
                                     TrajectorySource::ExpandedProposed);
  out.legacy = expanded_trajectory(assemble_legacy(blocks, K).A, nx, x0, steps, cfg.dt,
                                   TrajectorySource::ExpandedLegacy);
  return out;
}

TransformComparison transform_error(const UncertainPlant& plant, const Gain& K, int p,
                                    const SimulationConfig& cfg, int nodes) {
  require(nodes >= 1, ErrorKind::InvalidArgument, "node count must be >= 1");
  const Vector x0 = initial_state(plant, cfg);
  const int steps = step_count(cfg);
  const int nx = plant.nx();
  const double limit = blowup_limit(x0);

  const OrthonormalBasis basis = basis_for(plant, p);
  const ExpandedBlocks blocks = expand_blocks(plant, basis, p);
  const int np = blocks.np;
  const Quadrature quad = OrthonormalBasis::build(plant.dist, 0, 0, nodes).quadrature();
  const int ns = quad.size();

  Matrix phi(np, ns);
  for (int s = 0; s < ns; ++s) {
    const Vector point = quad.nodes.col(s);
    phi.col(s) = basis.evaluate({point.data(), static_cast<size_t>(point.size())}, np);
  }
  const std::vector<double> w(quad.weights.data(), quad.weights.data() + ns);

  const std::vector<double> a = soa_matrices(plant, K, quad.nodes, 0, ns);
  std::vector<double> x(static_cast<size_t>(nx) * ns);
  for (int r = 0; r < nx; ++r) std::fill_n(x.begin() + r * ns, ns, x0(r));

  struct Expanded {
    std::vector<double> a, X;
    TransformErrors err;
  };
  std::vector<Expanded> ex(2);
  const Matrix A_prop = assemble_closed_loop(blocks, K).A;
  const Matrix A_leg = assemble_legacy(blocks, K).A;
  const int n = nx * np;
  for (int v = 0; v < 2; ++v) {
    const Matrix& A = v == 0 ? A_prop : A_leg;
    ex[v].a.resize(static_cast<size_t>(n) * n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) ex[v].a[static_cast<size_t>(r) * n + c] = A(r, c);
    ex[v].X.assign(n, 0.0);
    for (int i = 0; i < nx; ++i) ex[v].X[i] = x0(i);
  }

  std::vector<double> dev(ns);
  const std::vector<double> ones(ns, 1.0);
  Vector true_mean(nx), true_var(nx);
  auto compare = [&] {
    for (int r = 0; r < nx; ++r) {
      const std::span<const double> xr(x.data() + static_cast<size_t>(r) * ns, ns);
      true_mean(r) = kernels::weighted_dot(w, xr, ones);
      for (int s = 0; s < ns; ++s) dev[s] = xr[s] - true_mean(r);
      true_var(r) = kernels::weighted_dot(w, dev, dev);
    }
    for (Expanded& e : ex) {
      const Eigen::Map<const Matrix> X(e.X.data(), nx, np);
      const Matrix rec = X * phi;
      for (int s = 0; s < ns; ++s) {
        double sq = 0.0;
        for (int r = 0; r < nx; ++r) {
          const double d = x[static_cast<size_t>(r) * ns + s] - rec(r, s);
          sq += d * d;
        }
        e.err.state = std::max(e.err.state, std::sqrt(sq));
      }
      for (int r = 0; r < nx; ++r) {
        double var = 0.0;
        for (int j = 1; j < np; ++j) var += X(r, j) * X(r, j);
        e.err.mean = std::max(e.err.mean, std::abs(X(r, 0) - true_mean(r)));
        e.err.variance = std::max(e.err.variance, std::abs(var - true_var(r)));
      }
    }
  };
  compare();
  for (int k = 1; k <= steps; ++k) {
    kernels::ensemble_rk4(nx, ns, a, x, cfg.dt, 1);
    guard(x, limit, "per-node trajectory");
    for (Expanded& e : ex) {
      kernels::ensemble_rk4(n, 1, e.a, e.X, cfg.dt, 1);
      guard(e.X, limit, "expanded trajectory");
    }
    compare();
  }
  return {ex[0].err, ex[1].err, ns};
}

ExpandedNorms expanded_norms(const UncertainPlant& plant, const Gain& K, int p, double tol) {
  const ExpandedBlocks blocks = expand_blocks(plant, basis_for(plant, p), p);
  return {hinf_norm(LtiSystem(assemble_closed_loop(blocks, K)), tol),
          hinf_norm(LtiSystem(assemble_legacy(blocks, K)), tol)};
}

}  // namespace pcehinf
