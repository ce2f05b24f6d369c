#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pcehinf/common.hpp"
#include "pcehinf/polychaos.hpp"
#include "pcehinf/polynomial.hpp"

namespace pcehinf {

/// ẋ = A(ξ)x + B_w(ξ)w + B(ξ)u,  y = C(ξ)x + D_w(ξ)w,  z = C_z x + D_zw w + D_z u.
struct UncertainPlant {
  PolynomialMatrix A, Bw, B, C, Dw;
  Matrix Cz, Dzw, Dz;
  Distribution dist;
  /// Parameter points spanning an overbounding polytope; empty selects the
  /// support corners.
  std::vector<std::vector<double>> vertices;
  std::string name;

  int nx() const { return A.rows(); }
  int nu() const { return B.cols(); }
  int nw() const { return Bw.cols(); }
  int ny() const { return C.rows(); }
  int nz() const { return static_cast<int>(Cz.rows()); }
  int n_xi() const { return dist.dim(); }

  /// Throws DimensionMismatch on inconsistent shapes.
  void validate() const;
  /// Explicit vertices, or the corners of the support box.
  std::vector<std::vector<double>> polytope_vertices() const;
};

using Gain = Matrix;

struct ClosedLoopSample {
  Matrix A, B, C, D;
};

Matrix eval_polymat(const PolynomialMatrix& m, std::span<const double> xi);

/// Closed loop under u = K y at a fixed parameter value.
ClosedLoopSample close_loop(const UncertainPlant& plant, const Gain& K,
                            std::span<const double> xi);

/// Closed-loop matrices as polynomials in ξ.
struct ClosedLoopPoly {
  PolynomialMatrix A, B, C, D;
};
ClosedLoopPoly close_loop_poly(const UncertainPlant& plant, const Gain& K);

enum class SampleMode { Grid, Random };

/// Parameter points as columns (n_ξ × count). Grid mode places n equispaced
/// points per dimension over the support (μ ± 3σ for Gaussian parameters) and
/// tensorizes; random mode draws n seeded samples.
Matrix sample_xi(const Distribution& dist, int n, std::uint64_t seed,
                 SampleMode mode = SampleMode::Random);

}  // namespace pcehinf
