#pragma once

// Arithmetic inner loops with a scalar reference implementation and optional
// SIMD variants. The variant is chosen once at startup from the CPU feature
// bits; setting CURVEFLAT_KERNELS=scalar forces the reference path.
//
// Element-wise kernels (truncated_power, slopes_from) are bit-identical across
// variants. Reductions (dot, sum_sq_diff) differ only in summation order.

#include <cstddef>
#include <span>
#include <string_view>

namespace curveflat::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  std::string_view name;
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_i (a_i - b_i)^2
  double (*sum_sq_diff)(const double* a, const double* b, std::size_t n);
  // out_i = (x_i - knot)^degree for x_i > knot, else 0. degree 0 gives the
  // step function.
  void (*truncated_power)(const double* x, std::size_t n, double knot, int degree, double* out);
  // out_k = (y[anchor + 1 + k] - y[anchor]) / (k + 1) for k < n - anchor - 1
  void (*slopes_from)(const double* y, std::size_t n, std::size_t anchor, double* out);
};

const KernelTable& scalar_table() noexcept;
// nullptr when the variant was not compiled in or the CPU lacks the feature.
const KernelTable* avx2_table() noexcept;
const KernelTable& active() noexcept;

double dot(std::span<const double> a, std::span<const double> b);
double sum_sq(std::span<const double> a);
double sum_sq_diff(std::span<const double> a, std::span<const double> b);
void truncated_power(std::span<const double> x, double knot, int degree, std::span<double> out);

}  // namespace curveflat::kernels
