// aarch64 only; NEON is part of the base ISA there.
#include <arm_neon.h>

#include "pcehinf/kernels.hpp"

namespace pcehinf::kernels::detail {
namespace {

double weighted_dot_neon(const double* w, const double* a, const double* b, int n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  int i = 0;
  for (; i + 2 <= n; i += 2)
    acc = vfmaq_f64(acc, vmulq_f64(vld1q_f64(w + i), vld1q_f64(a + i)), vld1q_f64(b + i));
  double out = vaddvq_f64(acc);
  for (; i < n; ++i) out += w[i] * a[i] * b[i];
  return out;
}

double weighted_dot3_neon(const double* w, const double* a, const double* b, const double* c,
                          int n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  int i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t wa = vmulq_f64(vld1q_f64(w + i), vld1q_f64(a + i));
    acc = vfmaq_f64(acc, wa, vmulq_f64(vld1q_f64(b + i), vld1q_f64(c + i)));
  }
  double out = vaddvq_f64(acc);
  for (; i < n; ++i) out += w[i] * a[i] * b[i] * c[i];
  return out;
}

Moments moments_neon(const double* x, int n) {
  Moments m;
  if (n <= 0) return m;
  float64x2_t s = vdupq_n_f64(0.0);
  int i = 0;
  for (; i + 2 <= n; i += 2) s = vaddq_f64(s, vld1q_f64(x + i));
  double sum = vaddvq_f64(s);
  for (; i < n; ++i) sum += x[i];
  m.mean = sum / n;
  if (n < 2) return m;
  const float64x2_t mu = vdupq_n_f64(m.mean);
  float64x2_t ss = vdupq_n_f64(0.0);
  i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(x + i), mu);
    ss = vfmaq_f64(ss, d, d);
  }
  double sq = vaddvq_f64(ss);
  for (; i < n; ++i) sq += (x[i] - m.mean) * (x[i] - m.mean);
  m.variance = sq / (n - 1);
  return m;
}

}  // namespace

// The ensemble integrator has no NEON-specific path yet; the scalar loop
// auto-vectorizes reasonably on aarch64.
const KernelTable kNeonTable{Isa::Neon, weighted_dot_neon, weighted_dot3_neon, moments_neon,
                             ensemble_rk4_scalar};

}  // namespace pcehinf::kernels::detail
