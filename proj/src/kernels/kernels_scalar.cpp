#include "kernels_internal.hpp"

namespace curveflat::kernels::detail {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_sq_diff_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

void truncated_power_scalar(const double* x, std::size_t n, double knot, int degree, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > knot)) {
      out[i] = 0.0;
      continue;
    }
    const double d = x[i] - knot;
    double p = 1.0;
    for (int k = 0; k < degree; ++k) p *= d;
    out[i] = p;
  }
}

void slopes_from_scalar(const double* y, std::size_t n, std::size_t anchor, double* out) {
  if (anchor + 1 >= n) return;
  const double ya = y[anchor];
  const std::size_t count = n - anchor - 1;
  for (std::size_t k = 0; k < count; ++k) {
    out[k] = (y[anchor + 1 + k] - ya) / static_cast<double>(k + 1);
  }
}

}  // namespace curveflat::kernels::detail
