#include <cstdlib>
#include <cstring>

#include "curveflat/error.hpp"
#include "kernels_internal.hpp"

namespace curveflat::kernels {

namespace {

constexpr KernelTable kScalar{Isa::scalar, "scalar", &detail::dot_scalar, &detail::sum_sq_diff_scalar,
                              &detail::truncated_power_scalar, &detail::slopes_from_scalar};

#if defined(CURVEFLAT_BUILD_AVX2)
constexpr KernelTable kAvx2{Isa::avx2, "avx2", &detail::dot_avx2, &detail::sum_sq_diff_avx2,
                            &detail::truncated_power_avx2, &detail::slopes_from_avx2};
#endif

const KernelTable& select() noexcept {
  if (const char* env = std::getenv("CURVEFLAT_KERNELS"); env != nullptr && std::strcmp(env, "scalar") == 0) {
    return kScalar;
  }
  if (const KernelTable* t = avx2_table()) return *t;
  return kScalar;
}

void require_same_size(std::size_t a, std::size_t b) {
  if (a != b) throw Error("kernels", "operand length mismatch");
}

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

const KernelTable* avx2_table() noexcept {
#if defined(CURVEFLAT_BUILD_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() noexcept {
  static const KernelTable& table = select();
  return table;
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size());
  return active().dot(a.data(), b.data(), a.size());
}

double sum_sq(std::span<const double> a) { return active().dot(a.data(), a.data(), a.size()); }

double sum_sq_diff(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size());
  return active().sum_sq_diff(a.data(), b.data(), a.size());
}

void truncated_power(std::span<const double> x, double knot, int degree, std::span<double> out) {
  require_same_size(x.size(), out.size());
  active().truncated_power(x.data(), x.size(), knot, degree, out.data());
}

}  // namespace curveflat::kernels
