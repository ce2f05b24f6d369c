#include <gtest/gtest.h>

#include "pcehinf/plant_io.hpp"
#include "test_support.hpp"

using namespace pcehinf;

TEST(PolynomialParser, ParsesSumsProductsPowers) {
  const Polynomial p = parse_polynomial("0.2 + 2*xi1^3 - xi1*xi2", 2);
  EXPECT_DOUBLE_EQ(p.coefficient(MultiIndex({0, 0})), 0.2);
  EXPECT_DOUBLE_EQ(p.coefficient(MultiIndex({3, 0})), 2.0);
  EXPECT_DOUBLE_EQ(p.coefficient(MultiIndex({1, 1})), -1.0);
  EXPECT_EQ(p.terms().size(), 3u);
}

TEST(PolynomialParser, ParenthesesAndUnaryMinus) {
  const Polynomial p = parse_polynomial("-(1 + xi1)^2", 1);
  const double xi[] = {0.7};
  EXPECT_NEAR(p.eval(xi), -(1.7 * 1.7), 1e-15);
}

TEST(PolynomialParser, Errors) {
  for (const char* bad : {"xi3", "1 +", "2**xi1", "xi1^-1", "abc", "(xi1", "xi1 xi1"}) {
    try {
      parse_polynomial(bad, 2);
      FAIL() << "accepted " << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::Schema) << bad;
    }
  }
}

TEST(PolynomialParser, FormatRoundTrip) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int trial = 0; trial < 50; ++trial) {
    Polynomial p(2);
    for (const auto& s : graded_multi_indices(2, 4))
      if (rng() % 2) p.add_term(s, u(rng));
    EXPECT_EQ(parse_polynomial(format_polynomial(p), 2), p);
  }
  EXPECT_EQ(format_polynomial(parse_polynomial("0.2 + xi1^3", 1)), "0.2 + xi1^3");
  EXPECT_EQ(format_polynomial(Polynomial(1)), "0");
}

TEST(PlantIo, BenchmarkPlant) {
  const UncertainPlant p = testsupport::benchmark_plant();
  EXPECT_EQ(p.nx(), 2);
  EXPECT_EQ(p.nu(), 1);
  EXPECT_EQ(p.nw(), 4);
  EXPECT_EQ(p.ny(), 2);
  EXPECT_EQ(p.nz(), 3);
  EXPECT_EQ(p.n_xi(), 1);
  EXPECT_EQ(p.A.degree(), 3);
  EXPECT_EQ(p.B.degree(), 3);
  const double xi[] = {0.5};
  Matrix A(2, 2);
  A << 0.6 * 0.125, -0.4, 0.1, 0.5;
  EXPECT_LT((p.A.eval(xi) - A).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(p.Dw.eval(xi)(0, 2), 1.25, 1e-15);
}

TEST(PlantIo, SerializeRoundTrip) {
  const UncertainPlant p = testsupport::benchmark_plant();
  const std::string text = serialize_plant(p);
  const UncertainPlant q = parse_plant(text);
  EXPECT_EQ(serialize_plant(q), text);
  EXPECT_EQ(q.A.terms().size(), p.A.terms().size());
  for (const double x : {-1.0, -0.3, 0.9}) {
    const double xi[] = {x};
    EXPECT_EQ(q.A.eval(xi), p.A.eval(xi));
    EXPECT_EQ(q.B.eval(xi), p.B.eval(xi));
    EXPECT_EQ(q.Dw.eval(xi), p.Dw.eval(xi));
  }
}

TEST(PlantIo, SchemaDiagnostics) {
  const std::string good = serialize_plant(testsupport::benchmark_plant());
  auto expect_error = [](const std::string& text, ErrorKind kind, const std::string& needle) {
    try {
      parse_plant(text);
      FAIL() << "accepted plant";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), kind) << e.what();
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  expect_error("{\n\"name\": 1,\n", ErrorKind::Schema, "line");
  std::string t = good;
  t.replace(t.find("\"0.2\""), 5, "\"0.2*xi2\"");
  expect_error(t, ErrorKind::Schema, "matrices.B[1][0]");
  t = good;
  t.replace(t.find("\"uniform\""), 9, "\"beta\"");
  expect_error(t, ErrorKind::UnsupportedDistribution, "parameters[0]");
  t = good;
  t.replace(t.find("\"Dz\": ["), 7, "\"Dz\": [[0],");
  expect_error(t, ErrorKind::DimensionMismatch, "D_z");
}

TEST(Plant, ClosedLoopMatchesHandForm) {
  const UncertainPlant p = testsupport::benchmark_plant();
  const Gain K = testsupport::gain(1.8539, -27.4996);
  const double x = -0.4, c = x * x * x;
  const double xi[] = {x};
  const ClosedLoopSample s = close_loop(p, K, xi);
  Matrix B(2, 1), C(2, 2), Dw = Matrix::Zero(2, 4);
  B << 0.2 + c, 0.2;
  C << 1, c, 0, 1;
  Dw(0, 2) = 1 + 2 * c;
  Dw(1, 3) = 1;
  Matrix A(2, 2);
  A << 0.6 * c, -0.4, 0.1, 0.5;
  EXPECT_LT((s.A - (A + B * K * C)).norm(), 1e-14);
  EXPECT_LT((s.B - (p.Bw.eval(xi) + B * K * Dw)).norm(), 1e-14);
  EXPECT_LT((s.C - (p.Cz + p.Dz * K * C)).norm(), 1e-14);
  EXPECT_LT((s.D - (p.Dz * K * Dw)).norm(), 1e-14);

  const ClosedLoopPoly poly = close_loop_poly(p, K);
  EXPECT_LT((poly.A.eval(xi) - s.A).norm(), 1e-13);
  EXPECT_LT((poly.D.eval(xi) - s.D).norm(), 1e-13);
}

TEST(Plant, SamplingAndVertices) {
  const UncertainPlant p = testsupport::benchmark_plant();
  const Matrix g = sample_xi(p.dist, 1000, 0, SampleMode::Grid);
  ASSERT_EQ(g.cols(), 1000);
  EXPECT_DOUBLE_EQ(g(0, 0), -1.0);
  EXPECT_DOUBLE_EQ(g(0, 999), 1.0);
  const Matrix r1 = sample_xi(p.dist, 100, 42), r2 = sample_xi(p.dist, 100, 42);
  EXPECT_EQ(r1, r2);
  EXPECT_LE(r1.maxCoeff(), 1.0);
  EXPECT_GE(r1.minCoeff(), -1.0);
  const auto v = p.polytope_vertices();
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0][0], -1.0);
  EXPECT_EQ(v[1][0], 1.0);

  Distribution d;
  d.params = {ParamDist::uniform(0, 2), ParamDist::gaussian(1, 0.5)};
  const Matrix g2 = sample_xi(d, 3, 0, SampleMode::Grid);
  ASSERT_EQ(g2.cols(), 9);
  EXPECT_DOUBLE_EQ(g2(1, 0), -0.5);
  EXPECT_DOUBLE_EQ(g2(1, 2), 2.5);
  EXPECT_DOUBLE_EQ(g2(0, 8), 2.0);
}
