#pragma once

// Data-parallel kernels with a scalar reference implementation and SIMD
// variants (AVX2 on x86-64, NEON on AArch64) chosen once at runtime.
//
// Every kernel except `sum` is exact: all variants return identical results
// for identical inputs. `sum` reassociates and is only used for tolerance
// checks.
//
// The variant can be forced with ORDCP_SIMD=scalar|avx2|neon.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ordcp::kernels {

struct KernelTable {
  const char* name;
  /// Index of the first maximum. n >= 1, no NaN.
  std::size_t (*argmax_first)(const double* x, std::size_t n);
  /// True iff every entry satisfies 0 <= x <= DBL_MAX (rejects NaN, inf).
  bool (*all_finite_nonnegative)(const double* x, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  /// First index with x[i] > t, or n.
  std::size_t (*first_greater)(const double* x, std::size_t n, double t);
  /// First index with x[i] >= t, or n.
  std::size_t (*first_at_least)(const double* x, std::size_t n, double t);
  /// Number of i with lo[i] <= y[i] <= hi[i].
  std::size_t (*count_covered)(const std::int32_t* lo, const std::int32_t* hi,
                               const std::int32_t* y, std::size_t n);
  /// Sum of hi[i] - lo[i] + 1.
  std::int64_t (*sum_cardinalities)(const std::int32_t* lo, const std::int32_t* hi,
                                    std::size_t n);
};

const KernelTable& scalar_table();

/// Tables compiled into this binary and supported by the running CPU,
/// scalar first.
std::vector<const KernelTable*> available_tables();

/// The table used by the wrappers below.
const KernelTable& active();

inline std::size_t argmax_first(std::span<const double> x) {
  return active().argmax_first(x.data(), x.size());
}
inline bool all_finite_nonnegative(std::span<const double> x) {
  return active().all_finite_nonnegative(x.data(), x.size());
}
inline double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }
inline std::size_t first_greater(std::span<const double> x, double t) {
  return active().first_greater(x.data(), x.size(), t);
}
inline std::size_t first_at_least(std::span<const double> x, double t) {
  return active().first_at_least(x.data(), x.size(), t);
}
inline std::size_t count_covered(std::span<const std::int32_t> lo, std::span<const std::int32_t> hi,
                                 std::span<const std::int32_t> y) {
  return active().count_covered(lo.data(), hi.data(), y.data(), y.size());
}
inline std::int64_t sum_cardinalities(std::span<const std::int32_t> lo,
                                      std::span<const std::int32_t> hi) {
  return active().sum_cardinalities(lo.data(), hi.data(), lo.size());
}

namespace detail {
// Defined in the per-ISA translation units; nullptr when not compiled in.
const KernelTable* avx2_table();
const KernelTable* neon_table();
}  // namespace detail

}  // namespace ordcp::kernels
