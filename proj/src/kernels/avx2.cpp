// AVX2 kernels. Compiled with per-function target attributes so the rest of
// the library keeps the baseline ISA; only called after a CPUID check.

#include "ordcp/kernels.hpp"

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#define ORDCP_HAVE_AVX2_KERNELS 1
#include <immintrin.h>

#include <cfloat>
#endif

namespace ordcp::kernels::detail {

#if defined(ORDCP_HAVE_AVX2_KERNELS)
namespace {

#define ORDCP_AVX2 __attribute__((target("avx2")))

ORDCP_AVX2 std::size_t argmax_first_avx2(const double* x, std::size_t n) {
  double best = x[0];
  std::size_t i = 0;
  if (n >= 4) {
    __m256d m = _mm256_loadu_pd(x);
    for (i = 4; i + 4 <= n; i += 4) m = _mm256_max_pd(m, _mm256_loadu_pd(x + i));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, m);
    best = lanes[0];
    for (double v : lanes) {
      if (v > best) best = v;
    }
  } else {
    i = 1;
  }
  for (; i < n; ++i) {
    if (x[i] > best) best = x[i];
  }

  const __m256d b = _mm256_set1_pd(best);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const int mask = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(x + j), b, _CMP_EQ_OQ));
    if (mask != 0) return j + static_cast<std::size_t>(__builtin_ctz(static_cast<unsigned>(mask)));
  }
  for (; j < n; ++j) {
    if (x[j] == best) return j;
  }
  return 0;
}

ORDCP_AVX2 bool all_finite_nonnegative_avx2(const double* x, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d top = _mm256_set1_pd(DBL_MAX);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    const __m256d ok = _mm256_and_pd(_mm256_cmp_pd(v, zero, _CMP_GE_OQ),
                                     _mm256_cmp_pd(v, top, _CMP_LE_OQ));
    if (_mm256_movemask_pd(ok) != 0xF) return false;
  }
  for (; i < n; ++i) {
    if (!(x[i] >= 0.0 && x[i] <= DBL_MAX)) return false;
  }
  return true;
}

ORDCP_AVX2 double sum_avx2(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x + i + 4));
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) s += x[i];
  return s;
}

template <int Predicate>
ORDCP_AVX2 std::size_t first_cmp_avx2(const double* x, std::size_t n, double t) {
  const __m256d b = _mm256_set1_pd(t);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const int mask = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(x + i), b, Predicate));
    if (mask != 0) return i + static_cast<std::size_t>(__builtin_ctz(static_cast<unsigned>(mask)));
  }
  for (; i < n; ++i) {
    if constexpr (Predicate == _CMP_GT_OQ) {
      if (x[i] > t) return i;
    } else {
      if (x[i] >= t) return i;
    }
  }
  return n;
}

ORDCP_AVX2 std::size_t first_greater_avx2(const double* x, std::size_t n, double t) {
  return first_cmp_avx2<_CMP_GT_OQ>(x, n, t);
}

ORDCP_AVX2 std::size_t first_at_least_avx2(const double* x, std::size_t n, double t) {
  return first_cmp_avx2<_CMP_GE_OQ>(x, n, t);
}

ORDCP_AVX2 std::size_t count_covered_avx2(const std::int32_t* lo, const std::int32_t* hi,
                                          const std::int32_t* y, std::size_t n) {
  std::size_t missed = 0;
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256i l = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(lo + i));
    const __m256i h = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(hi + i));
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(y + i));
    const __m256i out = _mm256_or_si256(_mm256_cmpgt_epi32(l, v), _mm256_cmpgt_epi32(v, h));
    missed += static_cast<std::size_t>(
        __builtin_popcount(static_cast<unsigned>(_mm256_movemask_ps(_mm256_castsi256_ps(out)))));
  }
  std::size_t count = i - missed;
  for (; i < n; ++i) {
    if (lo[i] <= y[i] && y[i] <= hi[i]) ++count;
  }
  return count;
}

ORDCP_AVX2 std::int64_t sum_cardinalities_avx2(const std::int32_t* lo, const std::int32_t* hi,
                                               std::size_t n) {
  const __m256i one = _mm256_set1_epi32(1);
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256i l = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(lo + i));
    const __m256i h = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(hi + i));
    const __m256i d = _mm256_add_epi32(_mm256_sub_epi32(h, l), one);
    acc = _mm256_add_epi64(acc, _mm256_cvtepi32_epi64(_mm256_castsi256_si128(d)));
    acc = _mm256_add_epi64(acc, _mm256_cvtepi32_epi64(_mm256_extracti128_si256(d, 1)));
  }
  alignas(32) std::int64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  std::int64_t total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) total += static_cast<std::int64_t>(hi[i]) - lo[i] + 1;
  return total;
}

#undef ORDCP_AVX2

constexpr KernelTable kAvx2{
    "avx2",
    argmax_first_avx2,
    all_finite_nonnegative_avx2,
    sum_avx2,
    first_greater_avx2,
    first_at_least_avx2,
    count_covered_avx2,
    sum_cardinalities_avx2,
};

}  // namespace

const KernelTable* avx2_table() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") ? &kAvx2 : nullptr;
}

#else

const KernelTable* avx2_table() { return nullptr; }

#endif

}  // namespace ordcp::kernels::detail
