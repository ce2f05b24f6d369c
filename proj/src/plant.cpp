#include "pcehinf/plant.hpp"

#include <random>

namespace pcehinf {
namespace {

void check_shape(const char* name, int rows, int cols, int er, int ec) {
  require(rows == er && cols == ec, ErrorKind::DimensionMismatch,
          std::string(name) + " is " + std::to_string(rows) + "x" + std::to_string(cols) +
              ", expected " + std::to_string(er) + "x" + std::to_string(ec));
}

std::pair<double, double> support(const ParamDist& p) {
  if (p.kind == DistKind::Uniform) return {p.lo, p.hi};
  return {p.lo - 3.0 * p.hi, p.lo + 3.0 * p.hi};
}

}  // namespace

void UncertainPlant::validate() const {
  dist.validate();
  const int n = nx(), m = nu(), w = nw(), p = ny(), q = nz();
  require(n > 0 && m > 0 && p > 0 && q > 0, ErrorKind::DimensionMismatch,
          "plant matrices must be non-empty");
  check_shape("A", A.rows(), A.cols(), n, n);
  check_shape("B_w", Bw.rows(), Bw.cols(), n, w);
  check_shape("B", B.rows(), B.cols(), n, m);
  check_shape("C", C.rows(), C.cols(), p, n);
  check_shape("D_w", Dw.rows(), Dw.cols(), p, w);
  check_shape("C_z", static_cast<int>(Cz.rows()), static_cast<int>(Cz.cols()), q, n);
  check_shape("D_zw", static_cast<int>(Dzw.rows()), static_cast<int>(Dzw.cols()), q, w);
  check_shape("D_z", static_cast<int>(Dz.rows()), static_cast<int>(Dz.cols()), q, m);
  for (const PolynomialMatrix* pm : {&A, &Bw, &B, &C, &Dw})
    require(pm->n_xi() == n_xi(), ErrorKind::DimensionMismatch,
            "plant matrix depends on a different number of parameters than declared");
  for (const auto& v : vertices)
    require(static_cast<int>(v.size()) == n_xi(), ErrorKind::DimensionMismatch,
            "vertex has wrong dimension");
}

std::vector<std::vector<double>> UncertainPlant::polytope_vertices() const {
  if (!vertices.empty()) return vertices;
  const int n = n_xi();
  std::vector<std::vector<double>> out;
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<double> v(n);
    for (int d = 0; d < n; ++d) {
      const auto [lo, hi] = support(dist.params[d]);
      v[d] = (mask >> d) & 1 ? hi : lo;
    }
    out.push_back(std::move(v));
  }
  return out;
}

Matrix eval_polymat(const PolynomialMatrix& m, std::span<const double> xi) { return m.eval(xi); }

ClosedLoopSample close_loop(const UncertainPlant& plant, const Gain& K,
                            std::span<const double> xi) {
  require(K.rows() == plant.nu() && K.cols() == plant.ny(), ErrorKind::DimensionMismatch,
          "gain must be n_u x n_y");
  const Matrix B = plant.B.eval(xi);
  const Matrix C = plant.C.eval(xi);
  const Matrix Dw = plant.Dw.eval(xi);
  const Matrix BK = B * K;
  const Matrix DzK = plant.Dz * K;
  return {plant.A.eval(xi) + BK * C, plant.Bw.eval(xi) + BK * Dw, plant.Cz + DzK * C,
          plant.Dzw + DzK * Dw};
}

ClosedLoopPoly close_loop_poly(const UncertainPlant& plant, const Gain& K) {
  require(K.rows() == plant.nu() && K.cols() == plant.ny(), ErrorKind::DimensionMismatch,
          "gain must be n_u x n_y");
  const int n = plant.n_xi();
  const PolynomialMatrix BK = plant.B * K;
  const Matrix DzK = plant.Dz * K;
  return {plant.A + BK * plant.C, plant.Bw + BK * plant.Dw,
          PolynomialMatrix::constant(plant.Cz, n) + DzK * plant.C,
          PolynomialMatrix::constant(plant.Dzw, n) + DzK * plant.Dw};
}

Matrix sample_xi(const Distribution& dist, int n, std::uint64_t seed, SampleMode mode) {
  dist.validate();
  require(n >= 1, ErrorKind::InvalidArgument, "sample count must be >= 1");
  const int d = dist.dim();
  if (mode == SampleMode::Random) {
    std::mt19937_64 rng(seed);
    Matrix out(d, n);
    for (int s = 0; s < n; ++s)
      for (int k = 0; k < d; ++k) {
        const ParamDist& p = dist.params[k];
        if (p.kind == DistKind::Uniform)
          out(k, s) = std::uniform_real_distribution<double>(p.lo, p.hi)(rng);
        else
          out(k, s) = std::normal_distribution<double>(p.lo, p.hi)(rng);
      }
    return out;
  }
  long long total = 1;
  for (int k = 0; k < d; ++k) total *= n;
  require(total <= 100'000'000LL, ErrorKind::InvalidArgument, "grid too large");
  Matrix out(d, total);
  std::vector<int> digit(d, 0);
  for (long long s = 0; s < total; ++s) {
    for (int k = 0; k < d; ++k) {
      const auto [lo, hi] = support(dist.params[k]);
      out(k, s) = n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * digit[k] / (n - 1);
    }
    for (int k = d - 1; k >= 0; --k) {
      if (++digit[k] < n) break;
      digit[k] = 0;
    }
  }
  return out;
}

}  // namespace pcehinf
