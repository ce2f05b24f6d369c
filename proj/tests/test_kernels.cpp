#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "pcehinf/kernels.hpp"

using namespace pcehinf::kernels;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, int n, double lo = -1, double hi = 1) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

std::vector<Isa> simd_isas() {
  std::vector<Isa> out;
  for (const Isa i : {Isa::Avx2, Isa::Neon})
    if (isa_available(i)) out.push_back(i);
  return out;
}

const int kLengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 64, 101, 1000, 1003};

}  // namespace

TEST(KernelsScalar, MatchNaiveLoops) {
  std::mt19937_64 rng(1);
  const KernelTable& s = table(Isa::Scalar);
  for (const int n : kLengths) {
    const auto w = random_vec(rng, n, 0, 1), a = random_vec(rng, n), b = random_vec(rng, n),
               c = random_vec(rng, n);
    double d2 = 0, d3 = 0, mean = 0;
    for (int i = 0; i < n; ++i) {
      d2 += w[i] * a[i] * b[i];
      d3 += w[i] * a[i] * b[i] * c[i];
      mean += a[i];
    }
    EXPECT_NEAR(s.weighted_dot(w.data(), a.data(), b.data(), n), d2, 1e-13 * (1 + n));
    EXPECT_NEAR(s.weighted_dot3(w.data(), a.data(), b.data(), c.data(), n), d3, 1e-13 * (1 + n));
    if (n == 0) continue;
    mean /= n;
    double var = 0;
    for (const double x : a) var += (x - mean) * (x - mean);
    var = n > 1 ? var / (n - 1) : 0.0;
    const Moments m = s.moments(a.data(), n);
    EXPECT_NEAR(m.mean, mean, 1e-14);
    EXPECT_NEAR(m.variance, var, 1e-13);
  }
}

TEST(KernelsScalar, Rk4MatchesMatrixExponentialOnDiagonal) {
  // x' = λx: RK4 amplification is the degree-4 Taylor polynomial of e^{λ dt}
  const double lam[] = {-1.0, -0.25, 0.5};
  std::vector<double> a(3), x(3, 1.0);
  for (int s = 0; s < 3; ++s) a[s] = lam[s];
  const double dt = 0.1;
  table(Isa::Scalar).ensemble_rk4(1, 3, a.data(), x.data(), dt, 10);
  for (int s = 0; s < 3; ++s) {
    const double z = lam[s] * dt;
    const double g = 1 + z + z * z / 2 + z * z * z / 6 + z * z * z * z / 24;
    EXPECT_NEAR(x[s], std::pow(g, 10), 1e-14);
  }
}

TEST(KernelsSimd, ReductionsMatchScalar) {
  const auto isas = simd_isas();
  if (isas.empty()) GTEST_SKIP() << "no SIMD kernels on this machine";
  std::mt19937_64 rng(2);
  const KernelTable& s = table(Isa::Scalar);
  for (const Isa isa : isas) {
    const KernelTable& v = table(isa);
    for (const int n : kLengths) {
      const auto w = random_vec(rng, n, 0, 1), a = random_vec(rng, n, -5, 5),
                 b = random_vec(rng, n), c = random_vec(rng, n);
      const double tol = 1e-14 * (1 + n) * 5;
      EXPECT_NEAR(v.weighted_dot(w.data(), a.data(), b.data(), n),
                  s.weighted_dot(w.data(), a.data(), b.data(), n), tol)
          << isa_name(isa) << " n=" << n;
      EXPECT_NEAR(v.weighted_dot3(w.data(), a.data(), b.data(), c.data(), n),
                  s.weighted_dot3(w.data(), a.data(), b.data(), c.data(), n), tol);
      if (n == 0) continue;
      const Moments ms = s.moments(a.data(), n), mv = v.moments(a.data(), n);
      EXPECT_NEAR(mv.mean, ms.mean, 1e-13);
      EXPECT_NEAR(mv.variance, ms.variance, 1e-12 * (1 + ms.variance));
    }
  }
}

TEST(KernelsSimd, EnsembleRk4MatchesScalar) {
  const auto isas = simd_isas();
  if (isas.empty()) GTEST_SKIP() << "no SIMD kernels on this machine";
  std::mt19937_64 rng(3);
  for (const Isa isa : isas)
    for (const int n : {1, 2, 3, 5})
      for (const int ns : {1, 3, 4, 7, 8, 64, 129}) {
        auto a = random_vec(rng, n * n * ns);
        for (int s = 0; s < ns; ++s)
          for (int r = 0; r < n; ++r) a[(r * n + r) * ns + s] -= 2.0;
        const auto x0 = random_vec(rng, n * ns);
        auto xs = x0, xv = x0;
        table(Isa::Scalar).ensemble_rk4(n, ns, a.data(), xs.data(), 1e-2, 200);
        table(isa).ensemble_rk4(n, ns, a.data(), xv.data(), 1e-2, 200);
        for (int i = 0; i < n * ns; ++i)
          EXPECT_NEAR(xv[i], xs[i], 1e-12 * (1 + std::abs(xs[i])))
              << isa_name(isa) << " n=" << n << " ns=" << ns;
      }
}

TEST(KernelsDispatch, ActiveTableIsAvailable) {
  EXPECT_TRUE(isa_available(active().isa));
  EXPECT_TRUE(isa_available(Isa::Scalar));
}
