#include <cstdlib>
#include <cstring>

#include "cachelab/factor_kernels.hpp"

namespace cachelab::kernels {

namespace {

void multiply(std::span<double> dst, std::span<const double> src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] *= src[i];
}

void accumulate(std::span<double> dst, std::span<const double> src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

double sum(std::span<const double> values) {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

void scale(std::span<double> values, double factor) {
  for (double& v : values) v *= factor;
}

constexpr KernelTable kScalar{"scalar", multiply, accumulate, sum, scale};

}  // namespace

const KernelTable& scalar() { return kScalar; }

#ifdef CACHELAB_HAVE_AVX2
const KernelTable& avx2_unchecked();

const KernelTable* avx2() {
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &avx2_unchecked() : nullptr;
}
#else
const KernelTable* avx2() { return nullptr; }
#endif

const KernelTable& active() {
  static const KernelTable* chosen = [] {
    const char* force = std::getenv("CACHELAB_KERNELS");
    if (force && std::strcmp(force, "scalar") == 0) return &kScalar;
    if (const KernelTable* t = avx2()) return t;
    return &kScalar;
  }();
  return *chosen;
}

}  // namespace cachelab::kernels
