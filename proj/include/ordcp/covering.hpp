#pragma once

// Instance-level minimum-length covering: the shortest label interval that
// contains the mode and carries at least a given probability mass, optionally
// with a linear penalty on interval length.

#include <cstddef>

#include "ordcp/core.hpp"

namespace ordcp {

/// Two same-length feasible intervals whose (adjusted) masses differ by no
/// more than this are treated as tied; the one found first (smaller upper
/// bound) wins.
inline constexpr double kMassTieTolerance = 1e-12;

struct CoveringResult {
  PredictionInterval interval;
  /// False only when no anchored interval satisfies the constraint, in which
  /// case interval is the conservative fallback [1, K].
  bool feasible = true;
  /// mass(interval) - lambda * length(interval).
  double adjusted_mass = 0.0;

  bool operator==(const CoveringResult&) const = default;
};

/// Pointer movements made by the two-pointer scan.
struct ScanCounters {
  std::size_t upper_steps = 0;
  std::size_t lower_steps = 0;
  std::size_t total() const { return upper_steps + lower_steps; }
};

/// Shortest [l, u] with l <= mode <= u and mass >= tau, found in O(K) by a
/// single sweep of u upward from the mode while l only moves right. Among
/// equally short feasible intervals the heaviest is returned, ties going to
/// the smaller u. Throws std::invalid_argument unless 0 < tau <= 1.
CoveringResult min_length_interval(const ProbVector& p, double tau);
CoveringResult min_length_interval(const ProbVector& p, double tau, ScanCounters& counters);

/// Same sweep with feasibility mass - lambda * (u - l) >= tau. Exact for
/// every lambda: the lower pointer skips left ends that a shorter interval
/// beats, so penalized mass that rises as light tail entries are trimmed is
/// still found. Returns [1, K] with feasible = false when nothing qualifies.
/// Bit-identical to min_length_interval when lambda == 0.
CoveringResult min_length_interval_regularized(const ProbVector& p, double tau, double lambda);

/// Variant for callers that evaluate many thresholds on the same row.
CoveringResult min_length_interval_regularized(const PrefixSums& ps, Label mode, double tau,
                                               double lambda);

/// O(K^2) oracle: every anchored (l, u) in ascending (length, u) order, masses
/// summed directly from p. Uses the same tie rule as the sweep.
CoveringResult brute_force_min_interval(const ProbVector& p, double tau, double lambda);

/// Interval of length L grown from the mode one label at a time, always
/// taking the more probable neighbour (left on ties). For radially monotone
/// p it has the largest mass among anchored intervals of length L. The
/// radial-monotonicity precondition is the caller's responsibility.
/// Throws std::out_of_range unless 0 <= L <= K - 1.
PredictionInterval greedy_max_mass_interval(const ProbVector& p, Label length);

/// Threshold at which label y enters the covering interval: for radially
/// monotone p, min_length_interval_regularized(p, tau, lambda) contains y
/// iff tau > critical_score(p, y, lambda). Zero for the mode.
double critical_score(const ProbVector& p, Label y, double lambda);

}  // namespace ordcp
