#include <cstdlib>
#include <string_view>

#include "pcehinf/common.hpp"
#include "pcehinf/kernels.hpp"

namespace pcehinf::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(PCEHINF_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& select() {
  const char* env = std::getenv("PCEHINF_SIMD");
  if (env != nullptr && std::string_view(env) == "scalar") return detail::kScalarTable;
#if defined(PCEHINF_HAVE_AVX2_TU)
  if (cpu_has_avx2()) return detail::kAvx2Table;
#endif
#if defined(PCEHINF_HAVE_NEON_TU)
  return detail::kNeonTable;
#endif
  return detail::kScalarTable;
}

}  // namespace

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
      return cpu_has_avx2();
    case Isa::Neon:
#if defined(PCEHINF_HAVE_NEON_TU)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
    case Isa::Neon:
      return "neon";
  }
  return "unknown";
}

const KernelTable& table(Isa isa) {
  require(isa_available(isa), ErrorKind::InvalidArgument,
          std::string("kernel ISA not available: ") + isa_name(isa));
  switch (isa) {
#if defined(PCEHINF_HAVE_AVX2_TU)
    case Isa::Avx2:
      return detail::kAvx2Table;
#endif
#if defined(PCEHINF_HAVE_NEON_TU)
    case Isa::Neon:
      return detail::kNeonTable;
#endif
    default:
      return detail::kScalarTable;
  }
}

const KernelTable& active() {
  static const KernelTable& t = select();
  return t;
}

double weighted_dot(std::span<const double> w, std::span<const double> a,
                    std::span<const double> b) {
  return active().weighted_dot(w.data(), a.data(), b.data(), static_cast<int>(w.size()));
}

double weighted_dot3(std::span<const double> w, std::span<const double> a,
                     std::span<const double> b, std::span<const double> c) {
  return active().weighted_dot3(w.data(), a.data(), b.data(), c.data(),
                                static_cast<int>(w.size()));
}

Moments moments(std::span<const double> x) {
  return active().moments(x.data(), static_cast<int>(x.size()));
}

void ensemble_rk4(int n, int ns, std::span<const double> a, std::span<double> x, double dt,
                  int steps) {
  require(static_cast<int>(a.size()) == n * n * ns && static_cast<int>(x.size()) == n * ns,
          ErrorKind::DimensionMismatch, "ensemble_rk4: buffer sizes do not match n/ns");
  active().ensemble_rk4(n, ns, a.data(), x.data(), dt, steps);
}

}  // namespace pcehinf::kernels
