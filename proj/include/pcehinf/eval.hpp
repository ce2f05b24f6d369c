#pragma once

#include <cstdint>
#include <vector>

#include "pcehinf/common.hpp"
#include "pcehinf/galerkin.hpp"
#include "pcehinf/plant.hpp"

namespace pcehinf {

/// Per-sample closed-loop H∞ norms of a fixed gain.
struct NormDistribution {
  Matrix xi;                  // n_ξ × n, one sample per column
  std::vector<double> gamma;  // +inf where A_cl(ξ) is not Hurwitz
  std::vector<double> weight; // sums to 1
  std::vector<int> unstable;
  double worst_case = 0.0;
  /// Weighted mean over the finite samples.
  double averaged = 0.0;

  bool all_stable() const { return unstable.empty(); }
};

/// Equispaced grid_n points per dimension over the support. Uniform
/// parameters get equal weights, Gaussian ones density weights.
NormDistribution norm_distribution(const UncertainPlant& plant, const Gain& K, int grid_n,
                                   double tol = 1e-6);

/// Equal-weight distribution over the given points (e.g. Monte-Carlo draws).
NormDistribution norm_distribution_at(const UncertainPlant& plant, const Gain& K,
                                      const Matrix& xi, double tol = 1e-6);

enum class TrajectorySource { MonteCarlo, ExpandedProposed, ExpandedLegacy };
const char* to_string(TrajectorySource s);

struct TrajectoryStats {
  TrajectorySource source = TrajectorySource::MonteCarlo;
  std::vector<double> t;
  Matrix mean;      // n_x × steps+1
  Matrix variance;  // n_x × steps+1
};

struct SimulationConfig {
  Vector x0;  // empty selects e_1
  double T = 10.0;
  double dt = 1e-3;
  int n_mc = 5000;
  std::uint64_t seed = 1;
};

struct SimulationResult {
  TrajectoryStats monte_carlo, proposed, legacy;
};

/// Zero-disturbance trajectories of the sampled closed loop and of both
/// expanded systems of degree p. Throws UnstableSystem when a trajectory
/// blows up.
SimulationResult simulate_stats(const UncertainPlant& plant, const Gain& K, int p,
                                const SimulationConfig& cfg);

struct TransformErrors {
  /// sup over nodes and t of ‖x(t,ξ) − Φ_xᵀ(ξ)X(t)‖₂.
  double state = 0.0;
  /// sup over t of the max-abs error of the mean and variance traces against
  /// quadrature statistics of the per-node trajectories.
  double mean = 0.0;
  double variance = 0.0;
};

struct TransformComparison {
  TransformErrors proposed, legacy;
  int nodes = 0;
};

/// Reconstruction errors of both transforms against per-node integration on
/// a Gauss grid with `nodes` points per dimension.
TransformComparison transform_error(const UncertainPlant& plant, const Gain& K, int p,
                                    const SimulationConfig& cfg, int nodes = 101);

/// H∞ norms of the proposed and legacy expanded closed loops.
struct ExpandedNorms {
  double proposed = 0.0;
  double legacy = 0.0;
};
ExpandedNorms expanded_norms(const UncertainPlant& plant, const Gain& K, int p,
                             double tol = 1e-6);

}  // namespace pcehinf
