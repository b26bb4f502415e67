// NEON kernels for AArch64, where Advanced SIMD is part of the baseline ISA.

#include "ordcp/kernels.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)
#define ORDCP_HAVE_NEON_KERNELS 1
#include <arm_neon.h>

#include <cfloat>
#endif

namespace ordcp::kernels::detail {

#if defined(ORDCP_HAVE_NEON_KERNELS)
namespace {

std::size_t argmax_first_neon(const double* x, std::size_t n) {
  double best = x[0];
  std::size_t i = 1;
  if (n >= 2) {
    float64x2_t m = vld1q_f64(x);
    for (i = 2; i + 2 <= n; i += 2) m = vmaxq_f64(m, vld1q_f64(x + i));
    best = vmaxvq_f64(m);
  }
  for (; i < n; ++i) {
    if (x[i] > best) best = x[i];
  }

  const float64x2_t b = vdupq_n_f64(best);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const uint64x2_t eq = vceqq_f64(vld1q_f64(x + j), b);
    if (vgetq_lane_u64(eq, 0) != 0) return j;
    if (vgetq_lane_u64(eq, 1) != 0) return j + 1;
  }
  for (; j < n; ++j) {
    if (x[j] == best) return j;
  }
  return 0;
}

bool all_finite_nonnegative_neon(const double* x, std::size_t n) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  const float64x2_t top = vdupq_n_f64(DBL_MAX);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v = vld1q_f64(x + i);
    const uint64x2_t ok = vandq_u64(vcgeq_f64(v, zero), vcleq_f64(v, top));
    if ((vgetq_lane_u64(ok, 0) & vgetq_lane_u64(ok, 1)) == 0) return false;
  }
  for (; i < n; ++i) {
    if (!(x[i] >= 0.0 && x[i] <= DBL_MAX)) return false;
  }
  return true;
}

double sum_neon(const double* x, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vaddq_f64(acc0, vld1q_f64(x + i));
    acc1 = vaddq_f64(acc1, vld1q_f64(x + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += x[i];
  return s;
}

std::size_t first_greater_neon(const double* x, std::size_t n, double t) {
  const float64x2_t b = vdupq_n_f64(t);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const uint64x2_t gt = vcgtq_f64(vld1q_f64(x + i), b);
    if (vgetq_lane_u64(gt, 0) != 0) return i;
    if (vgetq_lane_u64(gt, 1) != 0) return i + 1;
  }
  for (; i < n; ++i) {
    if (x[i] > t) return i;
  }
  return n;
}

std::size_t first_at_least_neon(const double* x, std::size_t n, double t) {
  const float64x2_t b = vdupq_n_f64(t);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const uint64x2_t ge = vcgeq_f64(vld1q_f64(x + i), b);
    if (vgetq_lane_u64(ge, 0) != 0) return i;
    if (vgetq_lane_u64(ge, 1) != 0) return i + 1;
  }
  for (; i < n; ++i) {
    if (x[i] >= t) return i;
  }
  return n;
}

std::size_t count_covered_neon(const std::int32_t* lo, const std::int32_t* hi,
                               const std::int32_t* y, std::size_t n) {
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const int32x4_t l = vld1q_s32(lo + i);
    const int32x4_t h = vld1q_s32(hi + i);
    const int32x4_t v = vld1q_s32(y + i);
    const uint32x4_t in = vandq_u32(vcleq_s32(l, v), vcleq_s32(v, h));
    count += vaddvq_u32(vshrq_n_u32(in, 31));
  }
  for (; i < n; ++i) {
    if (lo[i] <= y[i] && y[i] <= hi[i]) ++count;
  }
  return count;
}

std::int64_t sum_cardinalities_neon(const std::int32_t* lo, const std::int32_t* hi,
                                    std::size_t n) {
  const int32x4_t one = vdupq_n_s32(1);
  int64x2_t acc = vdupq_n_s64(0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const int32x4_t d = vaddq_s32(vsubq_s32(vld1q_s32(hi + i), vld1q_s32(lo + i)), one);
    acc = vpadalq_s32(acc, d);
  }
  std::int64_t total = vaddvq_s64(acc);
  for (; i < n; ++i) total += static_cast<std::int64_t>(hi[i]) - lo[i] + 1;
  return total;
}

constexpr KernelTable kNeon{
    "neon",
    argmax_first_neon,
    all_finite_nonnegative_neon,
    sum_neon,
    first_greater_neon,
    first_at_least_neon,
    count_covered_neon,
    sum_cardinalities_neon,
};

}  // namespace

const KernelTable* neon_table() { return &kNeon; }

#else

const KernelTable* neon_table() { return nullptr; }

#endif

}  // namespace ordcp::kernels::detail
