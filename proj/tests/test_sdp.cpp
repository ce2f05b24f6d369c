#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <sstream>

#include "pcehinf/hinf.hpp"
#include "pcehinf/sdp.hpp"
#include "test_support.hpp"

using namespace pcehinf;

TEST(Sdp, LambdaMaxReformulation) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 7;
    Matrix M(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) M(i, j) = g(rng);
    M = 0.5 * (M + M.transpose()).eval();
    LmiProblem prob;
    prob.margin = 0.0;
    const AffineExpr t = prob.scalar("t");
    prob.positive(scaled_identity(t, n) - AffineExpr(M), "tI-M");
    prob.minimize(t);
    const SdpSolution sol = solve(prob);
    ASSERT_EQ(sol.status, SdpStatus::Optimal);
    const double lmax = Eigen::SelfAdjointEigenSolver<Matrix>(M).eigenvalues().maxCoeff();
    EXPECT_NEAR(sol.x[0], lmax, 1e-8) << "trial " << trial;
  }
}

TEST(Sdp, LinearProgramWithBounds) {
  // min -x0 - x1 s.t. x0 + 2 x1 <= 4, 0 <= x0 <= 3, x1 >= 0 : optimum (3, 0.5).
  LmiProblem prob;
  prob.margin = 0.0;
  const AffineExpr x0 = prob.scalar("x0"), x1 = prob.scalar("x1");
  prob.positive(AffineExpr::scalar(4.0) - x0 - 2.0 * x1, "budget");
  prob.bound(0, 0.0, 3.0);
  prob.bound(1, 0.0, std::numeric_limits<double>::infinity());
  prob.minimize(-1.0 * x0 - x1);
  const SdpSolution sol = solve(prob);
  ASSERT_EQ(sol.status, SdpStatus::Optimal);
  EXPECT_NEAR(sol.x[0], 3.0, 1e-7);
  EXPECT_NEAR(sol.x[1], 0.5, 1e-7);
  EXPECT_NEAR(sol.objective, -3.5, 1e-7);
}

TEST(Sdp, LyapunovFeasibility) {
  Matrix A(2, 2);
  A << -1, 0.5, 0, -2;
  {
    LmiProblem prob;
    const AffineExpr P = prob.symmetric(2, "P");
    prob.positive(P - AffineExpr(Matrix::Identity(2, 2)), "P>I");
    prob.negative(herm(product(P, AffineExpr(A))), "lyap");
    const FeasibilityResult r = feasibility(prob);
    EXPECT_TRUE(r.feasible);
    const auto vals = prob.evaluate({r.x.data(), static_cast<size_t>(r.x.size())});
    for (const Matrix& v : vals)
      EXPECT_GT(Eigen::SelfAdjointEigenSolver<Matrix>(v).eigenvalues().minCoeff(), 0.0);
  }
  {
    Matrix U(2, 2);
    U << 1, 0, 0, -1;
    LmiProblem prob;
    const AffineExpr P = prob.symmetric(2, "P");
    prob.positive(P - AffineExpr(Matrix::Identity(2, 2)), "P>I");
    prob.negative(herm(product(P, AffineExpr(U))), "lyap");
    EXPECT_FALSE(feasibility(prob).feasible);
    const SdpSolution sol = solve(prob);
    EXPECT_EQ(sol.status, SdpStatus::Infeasible);
  }
}

TEST(Sdp, BrlBoundaryMatchesHamiltonian) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const LtiSystem s =
        testsupport::random_stable(rng, 1 + trial % 4, 1 + trial % 2, 1 + (trial / 2) % 2);
    const double h = hinf_norm(s, 1e-8);
    const double tol = 1e-4 * h;
    double lo = 0.0, hi = 2.0 * h + 1.0;
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      LmiProblem prob = brl_lmi(s, mid);
      prob.margin = 1e-9;
      (feasibility(prob).feasible ? hi : lo) = mid;
    }
    EXPECT_NEAR(hi, h, 10 * tol) << "trial " << trial;
  }
}

TEST(Sdp, BrlMinGammaMatchesHamiltonian) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const LtiSystem s = testsupport::random_stable(rng, 2 + trial % 3, 1, 1 + trial % 2);
    const double h = hinf_norm(s, 1e-8);
    EXPECT_NEAR(brl_min_gamma(s), h, 1e-3 * h) << "trial " << trial;
  }
}

TEST(Sdp, RobustLmiImpliesNominalNorm) {
  std::mt19937_64 rng(33);
  int feasible = 0;
  for (int trial = 0; trial < 40 && feasible < 20; ++trial) {
    const LtiSystem s = testsupport::random_stable(rng, 2 + trial % 3, 1, 1);
    const double h = hinf_norm(s);
    ExpandedClosedLoop cl{s.A, s.B, s.C, s.D, Transform::Proposed};
    const double gamma = 1.5 * h + 0.1;
    const FeasibilityResult r = feasibility(robust_lmi(cl, gamma, 1e-3));
    if (!r.feasible) continue;
    ++feasible;
    EXPECT_LE(h, gamma);
  }
  EXPECT_GE(feasible, 10);
}

TEST(Sdp, DumpSdpaFormat) {
  LmiProblem prob;
  const AffineExpr t = prob.scalar("t");
  prob.positive(scaled_identity(t, 2) - AffineExpr(Matrix::Identity(2, 2)), "tI-I");
  prob.bound(0, -5.0, 5.0);
  prob.minimize(t);
  std::ostringstream os;
  dump_sdpa(prob, os);
  std::istringstream is(os.str());
  std::string line;
  std::vector<std::string> data;
  while (std::getline(is, line))
    if (!line.empty() && line[0] != '"' && line[0] != '*') data.push_back(line);
  ASSERT_GE(data.size(), 4u);
  EXPECT_EQ(data[0], "1");
  EXPECT_EQ(data[1], "2");
  EXPECT_EQ(data[2], "2 -2");
}
