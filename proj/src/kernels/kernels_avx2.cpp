// Compiled with -mavx2 only; dispatch guarantees the CPU supports it before
// any of these run. No FMA, so products and sums round exactly as the scalar
// reference does.
#include <immintrin.h>

#include <cmath>
#include <limits>

#include "swflow/kernels.hpp"

namespace swflow::detail {

namespace {

void project_avx2(const double* const* coords, std::size_t dim, std::size_t n, const double* theta,
                  double* out) {
  std::size_t i = 0;
  const __m256d t0 = _mm256_set1_pd(theta[0]);
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_mul_pd(_mm256_loadu_pd(coords[0] + i), t0);
    for (std::size_t k = 1; k < dim; ++k)
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(coords[k] + i), _mm256_set1_pd(theta[k])));
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) {
    double acc = coords[0][i] * theta[0];
    for (std::size_t k = 1; k < dim; ++k) acc = acc + coords[k][i] * theta[k];
    out[i] = acc;
  }
}

void gather_residual_avx2(const double* a, const double* b, const std::uint32_t* rank, std::size_t n,
                          double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(rank + i));
    const __m256d bv = _mm256_i32gather_pd(b, idx, 8);
    _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(a + i), bv));
  }
  for (; i < n; ++i) out[i] = a[i] - b[rank[i]];
}

void accumulate_avx2(double* const* grad, std::size_t dim, std::size_t n, const double* coeff, double w,
                     const double* theta) {
  const __m256d wv = _mm256_set1_pd(w);
  for (std::size_t k = 0; k < dim; ++k) {
    const __m256d tv = _mm256_set1_pd(theta[k]);
    double* g = grad[k];
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
      const __m256d s = _mm256_mul_pd(wv, _mm256_loadu_pd(coeff + i));
      _mm256_storeu_pd(g + i, _mm256_add_pd(_mm256_loadu_pd(g + i), _mm256_mul_pd(s, tv)));
    }
    for (; i < n; ++i) g[i] = g[i] + (w * coeff[i]) * theta[k];
  }
}

double sq_diff_sum_avx2(const double* x, const double* y, std::size_t n) {
  __m256d sum = _mm256_setzero_pd();
  __m256d comp = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    const __m256d term = _mm256_sub_pd(_mm256_mul_pd(d, d), comp);
    const __m256d next = _mm256_add_pd(sum, term);
    comp = _mm256_sub_pd(_mm256_sub_pd(next, sum), term);
    sum = next;
  }
  alignas(32) double lanes[4], lane_comp[4];
  _mm256_store_pd(lanes, sum);
  _mm256_store_pd(lane_comp, comp);
  double total = 0.0, c = 0.0;
  auto add = [&](double v) {
    const double term = v - c;
    const double next = total + term;
    c = (next - total) - term;
    total = next;
  };
  for (int l = 0; l < 4; ++l) add(lanes[l]);
  for (int l = 0; l < 4; ++l) add(-lane_comp[l]);
  for (; i < n; ++i) {
    const double d = x[i] - y[i];
    add(d * d);
  }
  return total;
}

double min_sq_dist_avx2(const double* const* coords, std::size_t dim, std::size_t n, const double* q,
                        std::size_t begin) {
  double best = std::numeric_limits<double>::infinity();
  std::size_t j = begin;
  if (n - begin >= 4) {
    __m256d bestv = _mm256_set1_pd(best);
    for (; j + 4 <= n; j += 4) {
      __m256d s = _mm256_setzero_pd();
      for (std::size_t k = 0; k < dim; ++k) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(coords[k] + j), _mm256_set1_pd(q[k]));
        s = _mm256_add_pd(s, _mm256_mul_pd(d, d));
      }
      bestv = _mm256_min_pd(bestv, s);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, bestv);
    for (double v : lanes) best = v < best ? v : best;
  }
  for (; j < n; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double d = coords[k][j] - q[k];
      s = s + d * d;
    }
    if (s < best) best = s;
  }
  return best;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{"avx2",        project_avx2,     gather_residual_avx2,
                                 accumulate_avx2, sq_diff_sum_avx2, min_sq_dist_avx2};
  return table;
}

}  // namespace swflow::detail
