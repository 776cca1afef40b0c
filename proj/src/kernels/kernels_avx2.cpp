#include <immintrin.h>

#include "kernels_internal.hpp"

namespace curveflat::kernels::detail {

namespace {

double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4)));
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_sq_diff_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(d0, d0));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(d1, d1));
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(d0, d0));
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

void truncated_power_avx2(const double* x, std::size_t n, double knot, int degree, double* out) {
  const __m256d vknot = _mm256_set1_pd(knot);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    const __m256d mask = _mm256_cmp_pd(vx, vknot, _CMP_GT_OQ);
    const __m256d d = _mm256_sub_pd(vx, vknot);
    __m256d p = one;
    for (int k = 0; k < degree; ++k) p = _mm256_mul_pd(p, d);
    _mm256_storeu_pd(out + i, _mm256_blendv_pd(zero, p, mask));
  }
  if (i < n) truncated_power_scalar(x + i, n - i, knot, degree, out + i);
}

void slopes_from_avx2(const double* y, std::size_t n, std::size_t anchor, double* out) {
  if (anchor + 1 >= n) return;
  const std::size_t count = n - anchor - 1;
  const double* src = y + anchor + 1;
  const __m256d ya = _mm256_set1_pd(y[anchor]);
  const __m256d step = _mm256_set1_pd(4.0);
  __m256d dx = _mm256_setr_pd(1.0, 2.0, 3.0, 4.0);
  std::size_t k = 0;
  for (; k + 4 <= count; k += 4) {
    _mm256_storeu_pd(out + k, _mm256_div_pd(_mm256_sub_pd(_mm256_loadu_pd(src + k), ya), dx));
    dx = _mm256_add_pd(dx, step);
  }
  const double yav = y[anchor];
  for (; k < count; ++k) out[k] = (src[k] - yav) / static_cast<double>(k + 1);
}

}  // namespace curveflat::kernels::detail
