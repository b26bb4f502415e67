#include "ordcp/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ordcp/kernels.hpp"

namespace ordcp {

ProbVector::ProbVector(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw std::invalid_argument("probability vector must have K >= 1 entries");
  if (!kernels::all_finite_nonnegative(probs_)) {
    throw std::invalid_argument("probability vector has a negative or non-finite entry");
  }
  const double total = kernels::sum(probs_);
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw std::invalid_argument("probability vector mass " + std::to_string(total) +
                                " outside tolerance");
  }
}

PrefixSums::PrefixSums(const ProbVector& p) : sums_(p.size() + 1) {
  sums_[0] = 0.0;
  const auto v = p.values();
  for (std::size_t k = 0; k < v.size(); ++k) sums_[k + 1] = sums_[k] + v[k];
}

Dataset::Dataset(std::vector<ProbVector> rows, std::vector<Label> labels)
    : rows_(std::move(rows)), labels_(std::move(labels)) {
  if (rows_.size() != labels_.size()) {
    throw std::invalid_argument("dataset has " + std::to_string(rows_.size()) + " rows but " +
                                std::to_string(labels_.size()) + " labels");
  }
  if (rows_.empty()) return;
  num_classes_ = rows_.front().num_classes();
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].num_classes() != num_classes_) {
      throw std::invalid_argument("row " + std::to_string(i + 1) + " has " +
                                  std::to_string(rows_[i].num_classes()) + " classes, expected " +
                                  std::to_string(num_classes_));
    }
    if (labels_[i] < 1 || labels_[i] > num_classes_) {
      throw std::invalid_argument("label out of range, row " + std::to_string(i + 1));
    }
  }
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  std::vector<ProbVector> rows;
  std::vector<Label> labels;
  rows.reserve(indices.size());
  labels.reserve(indices.size());
  for (std::size_t i : indices) {
    rows.push_back(rows_.at(i));
    labels.push_back(labels_.at(i));
  }
  return Dataset(std::move(rows), std::move(labels));
}

Label argmax_mode(const ProbVector& p) {
  return static_cast<Label>(kernels::argmax_first(p.values())) + 1;
}

PrefixSums prefix_sums(const ProbVector& p) { return PrefixSums(p); }

double interval_mass(const PrefixSums& ps, Label l, Label u) {
  if (l < 1 || u > ps.num_classes() || l > u) {
    throw std::out_of_range("interval [" + std::to_string(l) + ", " + std::to_string(u) +
                            "] outside [1, " + std::to_string(ps.num_classes()) + "]");
  }
  return ps.mass(l, u);
}

bool check_radial_monotonicity(const ProbVector& p, double tol) {
  const auto v = p.values();
  const std::size_t n = v.size();
  const std::size_t m = kernels::argmax_first(v);
  const double peak = v[m];
  for (std::size_t k = 0; k < n; ++k) {
    if (k != m && v[k] >= peak - tol) return false;
  }

  // Per distance d from the mode: smallest and largest entry at that distance.
  const std::size_t reach = std::max(m, n - 1 - m);
  std::vector<double> lowest(reach + 1), highest(reach + 1);
  lowest[0] = highest[0] = peak;
  for (std::size_t d = 1; d <= reach; ++d) {
    double lo = INFINITY, hi = -INFINITY;
    if (d <= m) lo = hi = v[m - d];
    if (m + d < n) {
      lo = std::min(lo, v[m + d]);
      hi = std::max(hi, v[m + d]);
    }
    lowest[d] = lo;
    highest[d] = hi;
  }
  // Every entry at distance <= d must dominate every entry at distance > d.
  for (std::size_t d = reach; d-- > 0;) highest[d] = std::max(highest[d], highest[d + 1]);
  double closest_min = peak;
  for (std::size_t d = 0; d < reach; ++d) {
    closest_min = std::min(closest_min, lowest[d]);
    if (closest_min < highest[d + 1] - tol) return false;
  }
  return true;
}

double radial_monotone_fraction(const Dataset& d, double tol) {
  if (d.empty()) return 0.0;
  std::size_t passing = 0;
  for (const auto& row : d.rows()) {
    if (check_radial_monotonicity(row, tol)) ++passing;
  }
  return static_cast<double>(passing) / static_cast<double>(d.size());
}

}  // namespace ordcp
