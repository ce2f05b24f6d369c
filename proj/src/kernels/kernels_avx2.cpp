// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include <vector>

#include "pcehinf/kernels.hpp"

namespace pcehinf::kernels::detail {
namespace {

constexpr int kMaxStates = 12;

double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double weighted_dot_avx2(const double* w, const double* a, const double* b, int n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  int i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(a + i)),
                           _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i + 4), _mm256_loadu_pd(a + i + 4)),
                           _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(a + i)),
                           _mm256_loadu_pd(b + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += w[i] * a[i] * b[i];
  return acc;
}

double weighted_dot3_avx2(const double* w, const double* a, const double* b, const double* c,
                          int n) {
  __m256d acc = _mm256_setzero_pd();
  int i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d wa = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(a + i));
    const __m256d bc = _mm256_mul_pd(_mm256_loadu_pd(b + i), _mm256_loadu_pd(c + i));
    acc = _mm256_fmadd_pd(wa, bc, acc);
  }
  double out = hsum(acc);
  for (; i < n; ++i) out += w[i] * a[i] * b[i] * c[i];
  return out;
}

Moments moments_avx2(const double* x, int n) {
  Moments m;
  if (n <= 0) return m;
  __m256d s = _mm256_setzero_pd();
  int i = 0;
  for (; i + 4 <= n; i += 4) s = _mm256_add_pd(s, _mm256_loadu_pd(x + i));
  double sum = hsum(s);
  for (; i < n; ++i) sum += x[i];
  m.mean = sum / n;
  if (n < 2) return m;
  const __m256d mu = _mm256_set1_pd(m.mean);
  __m256d ss = _mm256_setzero_pd();
  i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), mu);
    ss = _mm256_fmadd_pd(d, d, ss);
  }
  double sq = hsum(ss);
  for (; i < n; ++i) {
    const double d = x[i] - m.mean;
    sq += d * d;
  }
  m.variance = sq / (n - 1);
  return m;
}

// Four samples per lane group; A and x for the group live in registers/stack
// for all steps.
void ensemble_rk4_avx2(int n, int ns, const double* a, double* x, double dt, int steps) {
  if (n > kMaxStates) {
    ensemble_rk4_scalar(n, ns, a, x, dt, steps);
    return;
  }
  const __m256d vhalf = _mm256_set1_pd(0.5 * dt);
  const __m256d vdt = _mm256_set1_pd(dt);
  const __m256d vsixth = _mm256_set1_pd(dt / 6.0);
  const __m256d two = _mm256_set1_pd(2.0);
  __m256d am[kMaxStates * kMaxStates];
  __m256d xs[kMaxStates], k1[kMaxStates], k2[kMaxStates], k3[kMaxStates], k4[kMaxStates],
      tmp[kMaxStates];

  auto apply = [&](const __m256d* v, __m256d* out) {
    for (int r = 0; r < n; ++r) {
      __m256d acc = _mm256_mul_pd(am[r * n], v[0]);
      for (int c = 1; c < n; ++c) acc = _mm256_fmadd_pd(am[r * n + c], v[c], acc);
      out[r] = acc;
    }
  };

  int s = 0;
  for (; s + 4 <= ns; s += 4) {
    for (int e = 0; e < n * n; ++e) am[e] = _mm256_loadu_pd(a + e * ns + s);
    for (int r = 0; r < n; ++r) xs[r] = _mm256_loadu_pd(x + r * ns + s);
    for (int step = 0; step < steps; ++step) {
      apply(xs, k1);
      for (int r = 0; r < n; ++r) tmp[r] = _mm256_fmadd_pd(vhalf, k1[r], xs[r]);
      apply(tmp, k2);
      for (int r = 0; r < n; ++r) tmp[r] = _mm256_fmadd_pd(vhalf, k2[r], xs[r]);
      apply(tmp, k3);
      for (int r = 0; r < n; ++r) tmp[r] = _mm256_fmadd_pd(vdt, k3[r], xs[r]);
      apply(tmp, k4);
      for (int r = 0; r < n; ++r) {
        const __m256d inner =
            _mm256_add_pd(_mm256_fmadd_pd(two, _mm256_add_pd(k2[r], k3[r]), k1[r]), k4[r]);
        xs[r] = _mm256_fmadd_pd(vsixth, inner, xs[r]);
      }
    }
    for (int r = 0; r < n; ++r) _mm256_storeu_pd(x + r * ns + s, xs[r]);
  }

  const int tail = ns - s;
  if (tail == 0) return;
  std::vector<double> ta(n * n * tail), tx(n * tail);
  for (int e = 0; e < n * n; ++e)
    for (int t = 0; t < tail; ++t) ta[e * tail + t] = a[e * ns + s + t];
  for (int r = 0; r < n; ++r)
    for (int t = 0; t < tail; ++t) tx[r * tail + t] = x[r * ns + s + t];
  ensemble_rk4_scalar(n, tail, ta.data(), tx.data(), dt, steps);
  for (int r = 0; r < n; ++r)
    for (int t = 0; t < tail; ++t) x[r * ns + s + t] = tx[r * tail + t];
}

}  // namespace

const KernelTable kAvx2Table{Isa::Avx2, weighted_dot_avx2, weighted_dot3_avx2, moments_avx2,
                             ensemble_rk4_avx2};

}  // namespace pcehinf::kernels::detail
