#include <gtest/gtest.h>

#include "pcehinf/galerkin.hpp"
#include "test_support.hpp"

using namespace pcehinf;
using testsupport::legendre_phi;
using testsupport::simpson_mean;

namespace {

// E{φ_i φ_j M(ξ)} for the scalar plant parameter, by Simpson.
Matrix sandwich_oracle(const PolynomialMatrix& M, int i, int j) {
  Matrix out(M.rows(), M.cols());
  for (int r = 0; r < M.rows(); ++r)
    for (int c = 0; c < M.cols(); ++c)
      out(r, c) = simpson_mean([&](double x) {
        const double xi[] = {x};
        return legendre_phi(i, x) * legendre_phi(j, x) * M.eval(xi)(r, c);
      });
  return out;
}

Matrix moment_oracle(const PolynomialMatrix& M, int i) {
  Matrix out(M.rows(), M.cols());
  for (int r = 0; r < M.rows(); ++r)
    for (int c = 0; c < M.cols(); ++c)
      out(r, c) = simpson_mean([&](double x) {
        const double xi[] = {x};
        return legendre_phi(i, x) * M.eval(xi)(r, c);
      });
  return out;
}

}  // namespace

TEST(Galerkin, ExpansionOrder) {
  const UncertainPlant p = testsupport::benchmark_plant();
  EXPECT_EQ(expansion_order(p, 1), 4);
  EXPECT_EQ(expansion_order(p, 2), 5);
  EXPECT_EQ(expansion_order(p, 10), 13);
}

TEST(Galerkin, BlocksMatchQuadratureOracle) {
  const UncertainPlant p = testsupport::benchmark_plant();
  for (int deg : {1, 2, 3}) {
    const OrthonormalBasis basis = basis_for(p, deg);
    const ExpandedBlocks eb = expand_blocks(p, basis, deg);
    ASSERT_EQ(eb.np, deg + 1);
    ASSERT_EQ(eb.nq, deg + 4);
    for (int i = 0; i < eb.np; ++i) {
      EXPECT_LT((eb.Bw.block(2 * i, 0, 2, 4) - moment_oracle(p.Bw, i)).cwiseAbs().maxCoeff(),
                1e-10);
      for (int j = 0; j < eb.np; ++j)
        EXPECT_LT((eb.A.block(2 * i, 2 * j, 2, 2) - sandwich_oracle(p.A, i, j))
                      .cwiseAbs()
                      .maxCoeff(),
                  1e-10);
    }
    for (int i = 0; i < eb.nq; ++i) {
      EXPECT_LT((eb.Dwbar.block(2 * i, 0, 2, 4) - moment_oracle(p.Dw, i)).cwiseAbs().maxCoeff(),
                1e-10);
      for (int j = 0; j < eb.np; ++j) {
        EXPECT_LT((eb.Bbar.block(2 * j, i, 2, 1) - sandwich_oracle(p.B, i, j))
                      .cwiseAbs()
                      .maxCoeff(),
                  1e-10);
        EXPECT_LT((eb.Cbar.block(2 * i, 2 * j, 2, 2) - sandwich_oracle(p.C, i, j))
                      .cwiseAbs()
                      .maxCoeff(),
                  1e-10);
      }
    }
    EXPECT_EQ(eb.CZbar.rows(), 3 * eb.nq);
    EXPECT_TRUE(eb.CZbar.bottomRows(3 * (eb.nq - eb.np)).isZero(0.0));
    EXPECT_EQ(eb.DZbar.rows(), 3 * eb.nq);
    EXPECT_EQ(eb.DZbar.cols(), eb.nq);
  }
}

TEST(Galerkin, ZNormIdentityRandom) {
  const UncertainPlant p = testsupport::benchmark_plant();
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int deg : {1, 2, 3}) {
    const OrthonormalBasis basis = basis_for(p, deg);
    const ExpandedBlocks eb = expand_blocks(p, basis, deg);
    for (int trial = 0; trial < 20; ++trial) {
      Vector X(eb.nx * eb.np), w(eb.nw);
      for (auto& v : X) v = g(rng);
      for (auto& v : w) v = g(rng);
      const Gain K = testsupport::gain(3 * g(rng), 10 * g(rng));
      const IdentityPair r = znorm_identity_check(p, basis, eb, K, X, w);
      EXPECT_LE(std::abs(r.lhs - r.rhs), 1e-9 * (1 + r.lhs));
    }
  }
}

TEST(Galerkin, GammaIdentities) {
  const UncertainPlant p = testsupport::benchmark_plant();
  for (int deg : {1, 2, 3}) {
    const OrthonormalBasis basis = basis_for(p, deg);
    const ExpandedBlocks eb = expand_blocks(p, basis, deg);
    EXPECT_LT(gamma_identities(p, basis, eb, testsupport::gain(1.5298, -28.6719)).max_error(),
              1e-9);
  }
}

TEST(Galerkin, KronOrthonormality) {
  const UncertainPlant p = testsupport::benchmark_plant();
  for (int deg = 0; deg <= 6; ++deg) {
    const OrthonormalBasis basis = basis_for(p, deg);
    EXPECT_LT(kron_orthonormality_error(basis, basis.size_for_degree(deg), 2), 1e-10);
  }
}

TEST(Galerkin, PartitionRelation) {
  const UncertainPlant p = testsupport::benchmark_plant();
  const Gain K = testsupport::gain(1.8539, -27.4996);
  for (int deg : {1, 2, 3}) {
    const OrthonormalBasis basis = basis_for(p, deg);
    const ExpandedBlocks eb = expand_blocks(p, basis, deg);
    const BlockPartitions bp = partition(eb);
    const ExpandedClosedLoop prop = assemble_closed_loop(eb, K);
    const ExpandedClosedLoop leg = assemble_legacy(eb, K);
    const Matrix K1 = kron_identity(eb.nq - eb.np, K);
    EXPECT_LT((prop.A - leg.A - bp.B1 * K1 * bp.C1).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((prop.B - leg.B - bp.B1 * K1 * bp.Dw1).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Galerkin, ConstantIoMakesTransformsEqual) {
  UncertainPlant p = testsupport::benchmark_plant();
  const double zero[] = {0.0};
  p.B = PolynomialMatrix::constant(p.B.eval(zero), 1);
  p.C = PolynomialMatrix::constant(p.C.eval(zero), 1);
  p.Dw = PolynomialMatrix::constant(p.Dw.eval(zero), 1);
  const Gain K = testsupport::gain(0.7, -3.0);
  for (int deg : {1, 2, 4}) {
    const OrthonormalBasis basis = basis_for(p, deg);
    const ExpandedBlocks eb = expand_blocks(p, basis, deg);
    const ExpandedClosedLoop a = assemble_closed_loop(eb, K), b = assemble_legacy(eb, K);
    EXPECT_LT((a.A - b.A).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((a.B - b.B).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((a.C - b.C).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((a.D - b.D).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Galerkin, ClosedLoopMeanDynamicsAtDegreeZeroPlant) {
  // A ξ-free plant: the expanded closed loop is I_np ⊗ (A+BKC) on the states.
  UncertainPlant p = testsupport::benchmark_plant();
  const double zero[] = {0.0};
  p.A = PolynomialMatrix::constant(p.A.eval(zero), 1);
  p.B = PolynomialMatrix::constant(p.B.eval(zero), 1);
  p.C = PolynomialMatrix::constant(p.C.eval(zero), 1);
  p.Dw = PolynomialMatrix::constant(p.Dw.eval(zero), 1);
  const Gain K = testsupport::gain(0.7, -3.0);
  const OrthonormalBasis basis = basis_for(p, 2);
  const ExpandedBlocks eb = expand_blocks(p, basis, 2);
  const ExpandedClosedLoop cl = assemble_closed_loop(eb, K);
  const ClosedLoopSample s = close_loop(p, K, zero);
  EXPECT_LT((cl.A - kron_identity(3, s.A)).cwiseAbs().maxCoeff(), 1e-12);
}
