#include <gtest/gtest.h>

#include "pcehinf/galerkin.hpp"
#include "pcehinf/synth.hpp"
#include "test_support.hpp"

using namespace pcehinf;

TEST(SynthMode, Parse) {
  EXPECT_EQ(parse_mode("worst-case"), SynthesisMode::WorstCase);
  EXPECT_EQ(parse_mode("wc"), SynthesisMode::WorstCase);
  EXPECT_EQ(parse_mode("nominal-pce"), SynthesisMode::NominalPce);
  EXPECT_EQ(parse_mode("robust-pce"), SynthesisMode::RobustPce);
  for (const auto m : {SynthesisMode::WorstCase, SynthesisMode::NominalPce,
                       SynthesisMode::RobustPce})
    EXPECT_EQ(parse_mode(to_string(m)), m);
  try {
    parse_mode("sos");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
  }
}

TEST(StabilityPostAnalysis, ReferenceGainsAndOpenLoop) {
  const UncertainPlant p = testsupport::benchmark_plant();
  for (const Gain& K : {testsupport::gain(-0.1281, -9.4664), testsupport::gain(1.8539, -27.4996)}) {
    const StabilityReport s = stability_post_analysis(p, K);
    EXPECT_TRUE(s.stable);
    EXPECT_EQ(s.points, 1001);
    EXPECT_LT(s.max_real_part, -1e-6);
  }
  // open loop: A(ξ) has trace 0.6ξ³ + 0.5 > 0 on part of the support
  const StabilityReport s = stability_post_analysis(p, Gain::Zero(1, 2));
  EXPECT_FALSE(s.stable);
  EXPECT_GT(s.max_real_part, 0.0);
  ASSERT_EQ(s.worst_xi.size(), 1u);
  const double xi[] = {s.worst_xi[0]};
  EXPECT_NEAR(spectral_abscissa(p.A.eval(xi)), s.max_real_part, 1e-12);
}

TEST(CertifiedGamma, DeterministicPlantMatchesHinfNorm) {
  const UncertainPlant p = testsupport::frozen_plant(0.3);
  const Gain K = testsupport::gain(-0.2, -6.0);
  const double xi[] = {0.3};
  const double g = hinf_norm(LtiSystem(close_loop(p, K, xi)), 1e-9);
  for (const auto mode : {SynthesisMode::NominalPce, SynthesisMode::WorstCase}) {
    SynthesisConfig cfg;
    cfg.mode = mode;
    cfg.p = 0;
    const auto c = certified_gamma(p, cfg, K);
    ASSERT_TRUE(c.has_value());
    EXPECT_NEAR(*c, g, 1e-4 * g);
    EXPECT_TRUE(lmi_recheck(p, cfg, K, *c * (1 + 1e-6)));
    EXPECT_FALSE(lmi_recheck(p, cfg, K, 0.95 * g));
  }
}

TEST(CertifiedGamma, NominalBoundsExpandedNorm) {
  const UncertainPlant p = testsupport::benchmark_plant();
  const Gain K = testsupport::gain(1.8539, -27.4996);
  SynthesisConfig cfg;
  cfg.p = 2;
  const auto c = certified_gamma(p, cfg, K);
  ASSERT_TRUE(c.has_value());
  const ExpandedBlocks b = expand_blocks(p, basis_for(p, 2), 2);
  const double g = hinf_norm(LtiSystem(assemble_closed_loop(b, K)), 1e-9);
  EXPECT_GE(*c, g * (1 - 1e-6));
  EXPECT_NEAR(*c, g, 1e-3 * g);

  cfg.mode = SynthesisMode::RobustPce;
  cfg.rho2 = 1e-3;
  const auto r = certified_gamma(p, cfg, K);
  ASSERT_TRUE(r.has_value());
  EXPECT_GE(*r, *c * (1 - 1e-6));
}

TEST(Synthesize, WorstCaseSingleRestartProperties) {
  const UncertainPlant p = testsupport::benchmark_plant();
  SynthesisConfig cfg;
  cfg.mode = SynthesisMode::WorstCase;
  const SynthesisResult r = synthesize(p, cfg);
  EXPECT_TRUE(r.stability.stable);
  EXPECT_TRUE(lmi_recheck(p, cfg, r.K, r.gamma));
  ASSERT_EQ(r.traces.size(), 1u);
  const auto& g = r.traces[0].gamma;
  ASSERT_FALSE(g.empty());
  for (size_t i = 1; i < g.size(); ++i) EXPECT_LE(g[i], g[i - 1]);
  EXPECT_DOUBLE_EQ(g.back(), r.gamma);
  // the polytopic certificate bounds every vertex norm
  for (const auto& v : p.polytope_vertices())
    EXPECT_LE(hinf_norm(LtiSystem(close_loop(p, r.K, v))), r.gamma * (1 + 1e-6));
}

TEST(Synthesize, DeterministicGivenSeed) {
  const UncertainPlant p = testsupport::benchmark_plant();
  SynthesisConfig cfg;
  cfg.mode = SynthesisMode::WorstCase;
  cfg.restarts = 2;
  cfg.seed = 7;
  const SynthesisResult a = synthesize(p, cfg), b = synthesize(p, cfg);
  EXPECT_EQ(a.K, b.K);
  EXPECT_EQ(a.gamma, b.gamma);
  EXPECT_EQ(a.best_restart, b.best_restart);
}

TEST(Synthesize, RejectsMismatchedGivenGain) {
  SynthesisConfig cfg;
  cfg.k_init = KInitPolicy::Given;
  cfg.k_given = Gain::Zero(2, 2);
  try {
    synthesize(testsupport::benchmark_plant(), cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}
