#include <gtest/gtest.h>

#include <cmath>

#include "pcehinf/eval.hpp"
#include "test_support.hpp"

using namespace pcehinf;

TEST(NormDistribution, WorstCaseGainGrid) {
  const NormDistribution d =
      norm_distribution(testsupport::benchmark_plant(), testsupport::gain(-0.1281, -9.4664), 1000);
  ASSERT_EQ(d.gamma.size(), 1000u);
  EXPECT_TRUE(d.all_stable());
  EXPECT_NEAR(d.worst_case, 54.1316, 0.01 * 54.1316);
  EXPECT_NEAR(d.averaged, 21.0501, 0.01 * 21.0501);
}

TEST(NormDistribution, DeterministicPlantCollapses) {
  const UncertainPlant p = testsupport::frozen_plant(-0.4);
  const Gain K = testsupport::gain(-0.2, -6.0);
  const double xi[] = {-0.4};
  const double g = hinf_norm(LtiSystem(close_loop(p, K, xi)));
  const NormDistribution d = norm_distribution(p, K, 11);
  EXPECT_NEAR(d.worst_case, g, 1e-9 * g);
  EXPECT_NEAR(d.averaged, g, 1e-9 * g);
}

TEST(NormDistribution, WorstAtLeastAverageForRandomGains) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  const UncertainPlant p = testsupport::benchmark_plant();
  int checked = 0;
  for (int t = 0; t < 30; ++t) {
    const Gain K = testsupport::gain(-0.1281 + 0.3 * n(rng), -9.4664 + 2.0 * n(rng));
    const NormDistribution d = norm_distribution(p, K, 51);
    if (!d.all_stable()) {
      EXPECT_TRUE(std::isinf(d.worst_case));
      continue;
    }
    EXPECT_GE(d.worst_case, d.averaged);
    ++checked;
  }
  EXPECT_GT(checked, 10);
}

TEST(NormDistribution, UnstableSamplesAreFlagged) {
  const NormDistribution d = norm_distribution(testsupport::benchmark_plant(), Gain::Zero(1, 2), 101);
  EXPECT_FALSE(d.all_stable());
  EXPECT_TRUE(std::isinf(d.worst_case));
  for (const int s : d.unstable) EXPECT_TRUE(std::isinf(d.gamma[s]));
}

TEST(NormDistribution, GaussianWeights) {
  UncertainPlant p = testsupport::benchmark_plant();
  p.dist.params[0] = ParamDist::gaussian(0.0, 1.0 / 3.0);
  const NormDistribution d = norm_distribution(p, testsupport::gain(-0.1281, -9.4664), 61);
  double sum = 0.0;
  for (const double w : d.weight) sum += w;
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_GT(d.weight[30], d.weight[0]);
  EXPECT_NEAR(d.weight[10], d.weight[50], 1e-15);
}

TEST(SimulateStats, DeterministicPlantTracesAgree) {
  const UncertainPlant p = testsupport::frozen_plant(0.2);
  SimulationConfig cfg;
  cfg.T = 2.0;
  cfg.dt = 1e-2;
  cfg.n_mc = 64;
  const SimulationResult r = simulate_stats(p, testsupport::gain(-0.2, -6.0), 2, cfg);
  EXPECT_LT((r.monte_carlo.mean - r.proposed.mean).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((r.proposed.mean - r.legacy.mean).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(r.monte_carlo.variance.cwiseAbs().maxCoeff(), 1e-20);
  EXPECT_LT(r.proposed.variance.cwiseAbs().maxCoeff(), 1e-20);
}

TEST(SimulateStats, InitialVarianceZeroAndNonnegative) {
  SimulationConfig cfg;
  cfg.T = 3.0;
  cfg.dt = 1e-2;
  cfg.n_mc = 500;
  const SimulationResult r =
      simulate_stats(testsupport::benchmark_plant(), testsupport::gain(1.8539, -27.4996), 2, cfg);
  EXPECT_EQ(r.monte_carlo.variance.col(0).cwiseAbs().maxCoeff(), 0.0);
  for (const TrajectoryStats* t : {&r.monte_carlo, &r.proposed, &r.legacy}) {
    EXPECT_GE(t->variance.minCoeff(), 0.0);
    EXPECT_EQ(t->t.size(), 301u);
    EXPECT_DOUBLE_EQ(t->t.back(), 3.0);
  }
}

TEST(SimulateStats, UnstableLoopTriggersGuard) {
  SimulationConfig cfg;
  cfg.T = 200.0;
  cfg.dt = 1e-2;
  cfg.n_mc = 16;
  try {
    simulate_stats(testsupport::benchmark_plant(), testsupport::gain(0.0, 5.0), 1, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnstableSystem);
  }
}

TEST(SimulateStats, MonteCarloErrorScalesAsInverseRootN) {
  // Oracle: 64-node Gauss-Legendre statistics of per-node RK4 with the same step.
  const UncertainPlant p = testsupport::benchmark_plant();
  const Gain K = testsupport::gain(1.8539, -27.4996);
  const double dt = 1e-2;
  const int steps = 100;
  std::vector<double> nodes, weights;
  {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(64, 64);
    for (int k = 1; k < 64; ++k) J(k, k - 1) = J(k - 1, k) = k / std::sqrt(4.0 * k * k - 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    for (int i = 0; i < 64; ++i) {
      nodes.push_back(es.eigenvalues()(i));
      weights.push_back(es.eigenvectors()(0, i) * es.eigenvectors()(0, i));
    }
  }
  double truth = 0.0;
  for (int i = 0; i < 64; ++i) {
    const double xi[] = {nodes[i]};
    const Matrix A = close_loop(p, K, xi).A;
    Vector x = Vector::Unit(2, 0);
    for (int s = 0; s < steps; ++s) {
      const Vector k1 = A * x, k2 = A * (x + 0.5 * dt * k1), k3 = A * (x + 0.5 * dt * k2),
                   k4 = A * (x + dt * k3);
      x += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    truth += weights[i] * x(0);
  }
  auto rms = [&](int n) {
    double acc = 0.0;
    for (int seed = 1; seed <= 200; ++seed) {
      SimulationConfig cfg;
      cfg.T = steps * dt;
      cfg.dt = dt;
      cfg.n_mc = n;
      cfg.seed = seed;
      const double e = simulate_stats(p, K, 1, cfg).monte_carlo.mean(0, steps) - truth;
      acc += e * e;
    }
    return std::sqrt(acc / 200);
  };
  const double ratio = rms(400) / rms(800);
  EXPECT_GE(ratio, 1.2);
  EXPECT_LE(ratio, 1.7);
}

TEST(TransformError, ConstantInputOutputCollapse) {
  UncertainPlant p = testsupport::benchmark_plant();
  const double zero[] = {0.0};
  p.B = PolynomialMatrix::constant(p.B.eval(zero), 1);
  p.C = PolynomialMatrix::constant(p.C.eval(zero), 1);
  p.Dw = PolynomialMatrix::constant(p.Dw.eval(zero), 1);
  SimulationConfig cfg;
  cfg.T = 2.0;
  cfg.dt = 1e-2;
  const TransformComparison c = transform_error(p, testsupport::gain(-0.2, -6.0), 2, cfg, 41);
  EXPECT_NEAR(c.proposed.state, c.legacy.state, 1e-12);
  EXPECT_NEAR(c.proposed.mean, c.legacy.mean, 1e-12);
  EXPECT_NEAR(c.proposed.variance, c.legacy.variance, 1e-12);
}

TEST(TransformError, ConvergesWithDegree) {
  SimulationConfig cfg;
  cfg.dt = 1e-2;
  const UncertainPlant p = testsupport::benchmark_plant();
  const Gain K = testsupport::gain(1.8539, -27.4996);
  const TransformComparison lo = transform_error(p, K, 2, cfg), hi = transform_error(p, K, 8, cfg);
  EXPECT_EQ(lo.nodes, 101);
  EXPECT_LE(hi.proposed.state * 10, lo.proposed.state);
  EXPECT_LE(hi.legacy.state * 10, lo.legacy.state);
}

TEST(ExpandedNorms, HighDegreeTransformsAgree) {
  const ExpandedNorms n =
      expanded_norms(testsupport::benchmark_plant(), testsupport::gain(5.1988, -74.7948), 10);
  EXPECT_NEAR(n.proposed, n.legacy, 1e-3 * n.proposed);
}
