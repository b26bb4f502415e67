#pragma once

// Domain types shared by every ordcp module: probability vectors over ordered
// labels, their prefix sums, contiguous label intervals and labelled datasets.
//
// Labels are 1-based on the whole public surface. Storage is 0-based.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace ordcp {

using Label = std::int32_t;

/// Entries must sum to one within this tolerance. Inputs outside it are
/// rejected, never renormalized.
inline constexpr double kMassTolerance = 1e-6;

/// Tolerance used by diagnostic radial-monotonicity reports.
inline constexpr double kRadialDiagnosticTolerance = 1e-9;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One model output: K >= 1 nonnegative finite entries summing to one.
class ProbVector {
 public:
  /// Throws std::invalid_argument when the invariants do not hold.
  explicit ProbVector(std::vector<double> probs);

  std::size_t size() const { return probs_.size(); }
  Label num_classes() const { return static_cast<Label>(probs_.size()); }

  /// Probability of label k, 1-based.
  double prob(Label k) const { return probs_[static_cast<std::size_t>(k - 1)]; }

  std::span<const double> values() const { return probs_; }

  bool operator==(const ProbVector&) const = default;

 private:
  std::vector<double> probs_;
};

/// P_0 = 0, P_k = P_{k-1} + p_k, accumulated strictly left to right.
class PrefixSums {
 public:
  explicit PrefixSums(const ProbVector& p);

  Label num_classes() const { return static_cast<Label>(sums_.size() - 1); }

  /// P_k for k in [0, K].
  double at(Label k) const { return sums_[static_cast<std::size_t>(k)]; }

  /// Mass of [l, u] as P_u - P_{l-1}. No range check; see interval_mass.
  double mass(Label l, Label u) const {
    return sums_[static_cast<std::size_t>(u)] - sums_[static_cast<std::size_t>(l - 1)];
  }

  std::span<const double> values() const { return sums_; }

 private:
  std::vector<double> sums_;
};

/// Contiguous label range [lower, upper], inclusive.
struct PredictionInterval {
  Label lower = 1;
  Label upper = 1;

  /// u - l, the quantity minimized by the covering problem.
  Label length() const { return upper - lower; }
  /// Number of labels in the set, u - l + 1.
  Label cardinality() const { return upper - lower + 1; }
  bool contains(Label y) const { return lower <= y && y <= upper; }
  bool contains(const PredictionInterval& other) const {
    return lower <= other.lower && other.upper <= upper;
  }

  bool operator==(const PredictionInterval&) const = default;
};

/// n probability vectors over the same K labels, each with a ground truth.
class Dataset {
 public:
  Dataset() = default;
  /// Throws std::invalid_argument on ragged rows, mismatched lengths or
  /// labels outside [1, K].
  Dataset(std::vector<ProbVector> rows, std::vector<Label> labels);

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  Label num_classes() const { return num_classes_; }

  const ProbVector& row(std::size_t i) const { return rows_[i]; }
  Label label(std::size_t i) const { return labels_[i]; }
  std::span<const ProbVector> rows() const { return rows_; }
  std::span<const Label> labels() const { return labels_; }

  /// Rows picked by index, in the given order.
  Dataset subset(std::span<const std::size_t> indices) const;

  bool operator==(const Dataset&) const = default;

 private:
  std::vector<ProbVector> rows_;
  std::vector<Label> labels_;
  Label num_classes_ = 0;
};

/// Mode of p; the smallest index among tied maxima.
Label argmax_mode(const ProbVector& p);

PrefixSums prefix_sums(const ProbVector& p);

/// P_u - P_{l-1}; throws std::out_of_range unless 1 <= l <= u <= K.
double interval_mass(const PrefixSums& ps, Label l, Label u);

/// True iff p has a unique mode m (no other entry within tol of the maximum)
/// and every entry strictly closer to m is no smaller than every entry
/// farther away, up to tol. Runs in O(K).
bool check_radial_monotonicity(const ProbVector& p, double tol = 0.0);

/// Fraction of dataset rows passing check_radial_monotonicity(row, tol).
double radial_monotone_fraction(const Dataset& d, double tol = kRadialDiagnosticTolerance);

}  // namespace ordcp
