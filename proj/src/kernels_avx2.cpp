// Compiled with -mavx2. Reached only through avx2(), which checks the CPU
// from a translation unit built for the baseline ISA.
#include <immintrin.h>

#include "cachelab/factor_kernels.hpp"

namespace cachelab::kernels {

namespace {

void multiply(std::span<double> dst, std::span<const double> src) {
  const std::size_t n = dst.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d a = _mm256_loadu_pd(dst.data() + i);
    __m256d b = _mm256_loadu_pd(src.data() + i);
    _mm256_storeu_pd(dst.data() + i, _mm256_mul_pd(a, b));
  }
  for (; i < n; ++i) dst[i] *= src[i];
}

void accumulate(std::span<double> dst, std::span<const double> src) {
  const std::size_t n = dst.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d a = _mm256_loadu_pd(dst.data() + i);
    __m256d b = _mm256_loadu_pd(src.data() + i);
    _mm256_storeu_pd(dst.data() + i, _mm256_add_pd(a, b));
  }
  for (; i < n; ++i) dst[i] += src[i];
}

// Lane-wise partial sums; the association order differs from the scalar
// loop, so results agree only to rounding.
double sum(std::span<const double> values) {
  const std::size_t n = values.size();
  std::size_t i = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(values.data() + i));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) s += values[i];
  return s;
}

void scale(std::span<double> values, double factor) {
  const std::size_t n = values.size();
  const __m256d f = _mm256_set1_pd(factor);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(values.data() + i, _mm256_mul_pd(_mm256_loadu_pd(values.data() + i), f));
  for (; i < n; ++i) values[i] *= factor;
}

constexpr KernelTable kAvx2{"avx2", multiply, accumulate, sum, scale};

}  // namespace

const KernelTable& avx2_unchecked() { return kAvx2; }

}  // namespace cachelab::kernels
