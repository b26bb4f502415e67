#pragma once

// Reference ordinal conformal methods used for comparison: Ordinal APS and
// an uncalibrated cumulative-distribution interval.

#include <cstdint>
#include <string>
#include <vector>

#include "ordcp/calibrate.hpp"
#include "ordcp/core.hpp"

namespace ordcp {

struct TraceStep {
  PredictionInterval interval;
  /// Mass of interval, P_u - P_{l-1}.
  double mass = 0.0;

  bool operator==(const TraceStep&) const = default;
};

struct ApsQuantile {
  double q_hat = 1.0;
  double alpha = 0.1;
  std::int64_t n_cal = 0;
  std::vector<std::string> warnings;
};

/// Greedy expansion from the mode: K steps, each adding the more probable
/// neighbour (left on ties). The last step is [1, K].
std::vector<TraceStep> ordinal_aps_expand(const ProbVector& p);

/// Mass of the first trace step containing y.
double ordinal_aps_score(const ProbVector& p, Label y);

/// ceil((n + 1)(1 - alpha))-th smallest calibration score, or the largest
/// score with a warning when that rank exceeds n.
ApsQuantile ordinal_aps_calibrate(const Dataset& d, double alpha);

/// First trace step whose mass reaches q_hat ([1, K] if none does).
PredictionInterval ordinal_aps_predict(const ProbVector& p, const ApsQuantile& q);

/// lower = min{k : P_k > alpha/2}, upper = min{k : P_k >= 1 - alpha/2}.
PredictionInterval naive_cdf_interval(const ProbVector& p, double alpha);

/// Wraps an APS quantile in the shared predictor envelope (tau_hat = q_hat).
CalibratedPredictor aps_predictor(const ApsQuantile& q, const Dataset& cal);

}  // namespace ordcp
