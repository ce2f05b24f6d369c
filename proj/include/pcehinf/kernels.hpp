#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference and, where the
// target supports it, an AVX2/FMA (x86-64) or NEON (aarch64) variant. The
// variant is picked once at runtime from CPU features; PCEHINF_SIMD=scalar in
// the environment pins the reference path.

#include <span>

namespace pcehinf::kernels {

enum class Isa { Scalar, Avx2, Neon };

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased (n-1); 0 for n < 2
};

/// Function table for one instruction set.
struct KernelTable {
  Isa isa;
  double (*weighted_dot)(const double* w, const double* a, const double* b, int n);
  double (*weighted_dot3)(const double* w, const double* a, const double* b, const double* c,
                          int n);
  Moments (*moments)(const double* x, int n);
  // Batched classical RK4 for x' = A_s x over ns independent samples.
  // Structure-of-arrays layout: a[(r*n + c)*ns + s], x[r*ns + s].
  void (*ensemble_rk4)(int n, int ns, const double* a, double* x, double dt, int steps);
};

bool isa_available(Isa isa);
const char* isa_name(Isa isa);

/// Table for a specific ISA; throws if unavailable on this machine/build.
const KernelTable& table(Isa isa);

/// Table selected at first use (best available unless overridden by env).
const KernelTable& active();

double weighted_dot(std::span<const double> w, std::span<const double> a,
                    std::span<const double> b);
double weighted_dot3(std::span<const double> w, std::span<const double> a,
                     std::span<const double> b, std::span<const double> c);
Moments moments(std::span<const double> x);
void ensemble_rk4(int n, int ns, std::span<const double> a, std::span<double> x, double dt,
                  int steps);

namespace detail {
void ensemble_rk4_scalar(int n, int ns, const double* a, double* x, double dt, int steps);

extern const KernelTable kScalarTable;
#if defined(PCEHINF_HAVE_AVX2_TU)
extern const KernelTable kAvx2Table;
#endif
#if defined(PCEHINF_HAVE_NEON_TU)
extern const KernelTable kNeonTable;
#endif
}  // namespace detail

}  // namespace pcehinf::kernels
