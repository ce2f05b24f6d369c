#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcehinf/galerkin.hpp"
#include "pcehinf/hinf.hpp"
#include "pcehinf/plant.hpp"

namespace pcehinf {

enum class SynthesisMode { WorstCase, NominalPce, RobustPce };
const char* to_string(SynthesisMode m);
SynthesisMode parse_mode(const std::string& s);

enum class KInitPolicy {
  /// Zero gain if the open loop is stable on the grid, else the worst-case
  /// polytopic design (used as is for WorstCase mode).
  Auto,
  Zero,
  Random,
  Given,
};

struct SynthesisConfig {
  SynthesisMode mode = SynthesisMode::NominalPce;
  int p = 2;
  double rho2 = 0.0;
  KInitPolicy k_init = KInitPolicy::Auto;
  std::optional<Gain> k_given;
  int max_outer_iters = 60;
  /// Relative γ decrease below which the alternation stops.
  double tol = 1e-4;
  /// Restart 0 follows the K_init policy, then one restart per extra start,
  /// then restarts − 1 seeded random gains.
  int restarts = 1;
  std::vector<Gain> extra_starts;
  std::uint64_t seed = 1;
  /// Relative γ slack of the central P handed to the K-step.
  double relax = 0.05;
  /// Entrywise bound on K in every SDP.
  double k_bound = 1e3;
  int stability_grid = 1001;
  double stability_margin = 1e-6;
  /// Polytope for WorstCase; empty uses the plant's vertices.
  std::vector<std::vector<double>> vertices;
};

struct StabilityReport {
  int points = 0;
  double max_real_part = 0.0;
  /// Parameter value attaining max_real_part.
  std::vector<double> worst_xi;
  double margin = 0.0;
  bool stable = false;
};

/// Eigenvalues of A_cl(ξ) on an equispaced tensor grid of the support.
StabilityReport stability_post_analysis(const UncertainPlant& plant, const Gain& K,
                                        int grid_n = 1001, double margin = 1e-6);

struct RestartTrace {
  int restart = 0;
  bool success = false;
  std::string failure;
  Gain k_init;
  /// Accepted γ values, nonincreasing.
  std::vector<double> gamma;
  Gain K;
};

struct SynthesisResult {
  Gain K;
  double gamma = 0.0;
  int iterations = 0;
  int best_restart = 0;
  std::vector<RestartTrace> traces;
  StabilityReport stability;
  double rho2 = 0.0;
  SynthesisMode mode = SynthesisMode::NominalPce;
};

/// Alternating-SDP solution of the mode's bilinear synthesis problem.
/// Throws NoFeasibleStart when no restart reaches a certified gain.
SynthesisResult synthesize(const UncertainPlant& plant, const SynthesisConfig& cfg);

/// Smallest γ certified by the mode's LMI for a fixed gain, or nullopt when
/// the LMI is infeasible for every γ.
std::optional<double> certified_gamma(const UncertainPlant& plant, const SynthesisConfig& cfg,
                                      const Gain& K);

/// The mode's LMI in (P, τ) at fixed (K, γ), without margin.
LmiProblem certificate_lmi(const UncertainPlant& plant, const SynthesisConfig& cfg,
                           const Gain& K, double gamma);

/// True when the mode's LMI at (K, γ) has a witness with every block's
/// minimum eigenvalue ≥ −1e-7·(1+‖F_0‖).
bool lmi_recheck(const UncertainPlant& plant, const SynthesisConfig& cfg, const Gain& K,
                 double gamma);

struct RhoProbe {
  double rho2 = 0.0;
  bool synthesized = false;
  bool stable = false;
  double gamma = 0.0;
  double max_real_part = 0.0;
  Gain K;
};

struct RhoBisectionResult {
  double rho2_min = 0.0;
  SynthesisResult result;
  std::vector<RhoProbe> probes;
};

/// Bisection on ρ² ∈ [0, rho2_hi] with robust synthesis plus grid stability
/// post-analysis at each probe. Throws InfeasibleAtHi if the upper end does
/// not synthesize, UnstableSystem if it synthesizes but fails post-analysis.
RhoBisectionResult rho_bisection(const UncertainPlant& plant, const SynthesisConfig& cfg,
                                 double rho2_hi, double tol = 1e-4);

}  // namespace pcehinf
