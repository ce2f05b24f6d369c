#include "pcehinf/kernels.hpp"

#include <vector>

namespace pcehinf::kernels::detail {
namespace {

double weighted_dot_scalar(const double* w, const double* a, const double* b, int n) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += w[i] * a[i] * b[i];
  return acc;
}

double weighted_dot3_scalar(const double* w, const double* a, const double* b, const double* c,
                            int n) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += w[i] * a[i] * b[i] * c[i];
  return acc;
}

Moments moments_scalar(const double* x, int n) {
  Moments m;
  if (n <= 0) return m;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += x[i];
  m.mean = sum / n;
  if (n < 2) return m;
  double ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = x[i] - m.mean;
    ss += d * d;
  }
  m.variance = ss / (n - 1);
  return m;
}

}  // namespace

void ensemble_rk4_scalar(int n, int ns, const double* a, double* x, double dt, int steps) {
  std::vector<double> xs(n), k1(n), k2(n), k3(n), k4(n), tmp(n), am(n * n);
  const double half = 0.5 * dt;
  const double sixth = dt / 6.0;
  auto apply = [&](const std::vector<double>& v, std::vector<double>& out) {
    for (int r = 0; r < n; ++r) {
      double acc = 0.0;
      for (int c = 0; c < n; ++c) acc += am[r * n + c] * v[c];
      out[r] = acc;
    }
  };
  for (int s = 0; s < ns; ++s) {
    for (int e = 0; e < n * n; ++e) am[e] = a[e * ns + s];
    for (int r = 0; r < n; ++r) xs[r] = x[r * ns + s];
    for (int step = 0; step < steps; ++step) {
      apply(xs, k1);
      for (int r = 0; r < n; ++r) tmp[r] = xs[r] + half * k1[r];
      apply(tmp, k2);
      for (int r = 0; r < n; ++r) tmp[r] = xs[r] + half * k2[r];
      apply(tmp, k3);
      for (int r = 0; r < n; ++r) tmp[r] = xs[r] + dt * k3[r];
      apply(tmp, k4);
      for (int r = 0; r < n; ++r) xs[r] += sixth * (k1[r] + 2.0 * k2[r] + 2.0 * k3[r] + k4[r]);
    }
    for (int r = 0; r < n; ++r) x[r * ns + s] = xs[r];
  }
}

const KernelTable kScalarTable{Isa::Scalar, weighted_dot_scalar, weighted_dot3_scalar,
                               moments_scalar, ensemble_rk4_scalar};

}  // namespace pcehinf::kernels::detail
