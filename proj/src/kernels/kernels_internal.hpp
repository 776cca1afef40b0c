#pragma once

#include "curveflat/kernels.hpp"

namespace curveflat::kernels::detail {

double dot_scalar(const double* a, const double* b, std::size_t n);
double sum_sq_diff_scalar(const double* a, const double* b, std::size_t n);
void truncated_power_scalar(const double* x, std::size_t n, double knot, int degree, double* out);
void slopes_from_scalar(const double* y, std::size_t n, std::size_t anchor, double* out);

#if defined(CURVEFLAT_BUILD_AVX2)
double dot_avx2(const double* a, const double* b, std::size_t n);
double sum_sq_diff_avx2(const double* a, const double* b, std::size_t n);
void truncated_power_avx2(const double* x, std::size_t n, double knot, int degree, double* out);
void slopes_from_avx2(const double* y, std::size_t n, std::size_t anchor, double* out);
#endif

}  // namespace curveflat::kernels::detail
