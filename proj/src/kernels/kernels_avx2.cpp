#include "scdual/kernels/kernels.hpp"

#if defined(SCDUAL_BUILD_AVX2)
#include <immintrin.h>
#endif

#include <limits>
#include <stdexcept>

namespace scdual::kernels::avx2 {

#if defined(SCDUAL_BUILD_AVX2)

namespace {

double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

void gemv(std::span<const double> m, std::size_t rows, std::size_t cols, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < rows; ++i) {
    const double* r = m.data() + i * cols;
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= cols; j += 4) acc = _mm256_fmadd_pd(_mm256_loadu_pd(r + j), _mm256_loadu_pd(x.data() + j), acc);
    double s = hsum(acc);
    for (; j < cols; ++j) s += r[j] * x[j];
    y[i] = s;
  }
}

void gemv_t(std::span<const double> m, std::size_t rows, std::size_t cols, std::span<const double> x,
            std::span<double> y) {
  for (std::size_t j = 0; j < cols; ++j) y[j] = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    const double* r = m.data() + i * cols;
    const double xi = x[i];
    if (xi == 0.0) continue;
    const __m256d b = _mm256_set1_pd(xi);
    std::size_t j = 0;
    for (; j + 4 <= cols; j += 4) {
      _mm256_storeu_pd(y.data() + j, _mm256_fmadd_pd(_mm256_loadu_pd(r + j), b, _mm256_loadu_pd(y.data() + j)));
    }
    for (; j < cols; ++j) y[j] += r[j] * xi;
  }
}

GridMax quadratic_grid_max(double a, double b, double c, double x0, double dx, std::size_t j0, std::size_t j1) {
  const double neg_inf = -std::numeric_limits<double>::infinity();
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d vx0 = _mm256_set1_pd(x0);
  const __m256d vdx = _mm256_set1_pd(dx);
  __m256d best = _mm256_set1_pd(neg_inf);
  __m256d best_j = _mm256_setzero_pd();
  __m256d jv = _mm256_setr_pd(static_cast<double>(j0), static_cast<double>(j0 + 1), static_cast<double>(j0 + 2),
                              static_cast<double>(j0 + 3));
  const __m256d four = _mm256_set1_pd(4.0);
  std::size_t j = j0;
  for (; j + 3 <= j1; j += 4) {
    const __m256d x = _mm256_add_pd(vx0, _mm256_mul_pd(jv, vdx));
    const __m256d v = _mm256_add_pd(_mm256_mul_pd(_mm256_add_pd(_mm256_mul_pd(va, x), vb), x), vc);
    const __m256d better = _mm256_cmp_pd(v, best, _CMP_GT_OQ);
    best = _mm256_blendv_pd(best, v, better);
    best_j = _mm256_blendv_pd(best_j, jv, better);
    jv = _mm256_add_pd(jv, four);
  }
  alignas(32) double vals[4];
  alignas(32) double idx[4];
  _mm256_store_pd(vals, best);
  _mm256_store_pd(idx, best_j);
  GridMax out{neg_inf, j0};
  for (int l = 0; l < 4; ++l) {
    const auto i = static_cast<std::size_t>(idx[l]);
    if (vals[l] > out.value || (vals[l] == out.value && vals[l] > neg_inf && i < out.index)) out = {vals[l], i};
  }
  for (; j <= j1; ++j) {
    const double x = x0 + static_cast<double>(j) * dx;
    const double v = (a * x + b) * x + c;
    if (v > out.value) out = {v, j};
  }
  return out;
}

#else

void gemv(std::span<const double>, std::size_t, std::size_t, std::span<const double>, std::span<double>) {
  throw std::logic_error("AVX2 kernels are not built");
}
void gemv_t(std::span<const double>, std::size_t, std::size_t, std::span<const double>, std::span<double>) {
  throw std::logic_error("AVX2 kernels are not built");
}
GridMax quadratic_grid_max(double, double, double, double, double, std::size_t, std::size_t) {
  throw std::logic_error("AVX2 kernels are not built");
}

#endif

}  // namespace scdual::kernels::avx2
