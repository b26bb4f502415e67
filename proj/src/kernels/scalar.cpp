// Scalar reference kernels. The SIMD variants are tested against these.

#include <cfloat>

#include "ordcp/kernels.hpp"

namespace ordcp::kernels {
namespace {

std::size_t argmax_first_scalar(const double* x, std::size_t n) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (x[i] > x[best]) best = i;
  }
  return best;
}

bool all_finite_nonnegative_scalar(const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] >= 0.0 && x[i] <= DBL_MAX)) return false;
  }
  return true;
}

double sum_scalar(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

std::size_t first_greater_scalar(const double* x, std::size_t n, double t) {
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] > t) return i;
  }
  return n;
}

std::size_t first_at_least_scalar(const double* x, std::size_t n, double t) {
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] >= t) return i;
  }
  return n;
}

std::size_t count_covered_scalar(const std::int32_t* lo, const std::int32_t* hi,
                                 const std::int32_t* y, std::size_t n) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (lo[i] <= y[i] && y[i] <= hi[i]) ++count;
  }
  return count;
}

std::int64_t sum_cardinalities_scalar(const std::int32_t* lo, const std::int32_t* hi,
                                      std::size_t n) {
  std::int64_t total = 0;
  for (std::size_t i = 0; i < n; ++i) total += static_cast<std::int64_t>(hi[i]) - lo[i] + 1;
  return total;
}

constexpr KernelTable kScalar{
    "scalar",
    argmax_first_scalar,
    all_finite_nonnegative_scalar,
    sum_scalar,
    first_greater_scalar,
    first_at_least_scalar,
    count_covered_scalar,
    sum_cardinalities_scalar,
};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace ordcp::kernels
