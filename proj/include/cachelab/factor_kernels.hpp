#pragma once

#include <span>
#include <string_view>

// Dense-table arithmetic behind factor products, marginalization and
// normalization. A portable scalar table is always present; an AVX2 table is
// compiled on x86-64 and chosen at runtime when the CPU supports it.
namespace cachelab::kernels {

struct KernelTable {
  std::string_view name;
  // dst[i] *= src[i]
  void (*multiply)(std::span<double> dst, std::span<const double> src);
  // dst[i] += src[i]
  void (*accumulate)(std::span<double> dst, std::span<const double> src);
  double (*sum)(std::span<const double> values);
  // v[i] *= factor
  void (*scale)(std::span<double> values, double factor);
};

const KernelTable& scalar();

// nullptr when not compiled in or unsupported by the running CPU.
const KernelTable* avx2();

// Table used by the inference engine. Resolved once per process; setting
// CACHELAB_KERNELS=scalar in the environment pins the reference path.
const KernelTable& active();

}  // namespace cachelab::kernels
