#include "ordcp/baselines.hpp"

#include <algorithm>
#include <stdexcept>

#include "ordcp/kernels.hpp"

namespace ordcp {

std::vector<TraceStep> ordinal_aps_expand(const ProbVector& p) {
  const Label k = p.num_classes();
  const PrefixSums ps(p);
  const Label mode = argmax_mode(p);
  std::vector<TraceStep> trace;
  trace.reserve(static_cast<std::size_t>(k));
  PredictionInterval iv{mode, mode};
  trace.push_back({iv, ps.mass(iv.lower, iv.upper)});
  while (iv.length() < k - 1) {
    const bool can_left = iv.lower > 1;
    const bool can_right = iv.upper < k;
    if (can_left && (!can_right || p.prob(iv.lower - 1) >= p.prob(iv.upper + 1))) {
      --iv.lower;
    } else {
      ++iv.upper;
    }
    trace.push_back({iv, ps.mass(iv.lower, iv.upper)});
  }
  return trace;
}

double ordinal_aps_score(const ProbVector& p, Label y) {
  if (y < 1 || y > p.num_classes()) {
    throw std::out_of_range("label " + std::to_string(y) + " outside [1, " +
                            std::to_string(p.num_classes()) + "]");
  }
  for (const auto& step : ordinal_aps_expand(p)) {
    if (step.interval.contains(y)) return step.mass;
  }
  return 1.0;  // unreachable: the last step is [1, K]
}

ApsQuantile ordinal_aps_calibrate(const Dataset& d, double alpha) {
  if (d.empty()) throw std::invalid_argument("calibration dataset is empty");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");

  std::vector<double> scores;
  scores.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    scores.push_back(ordinal_aps_score(d.row(i), d.label(i)));
  }

  ApsQuantile q;
  q.alpha = alpha;
  q.n_cal = static_cast<std::int64_t>(d.size());
  const std::int64_t rank = target_count(alpha, q.n_cal);
  if (rank > q.n_cal) {
    q.warnings.push_back("rank " + std::to_string(rank) + " exceeds n_cal = " +
                         std::to_string(q.n_cal) + "; using the largest score");
    q.q_hat = *std::max_element(scores.begin(), scores.end());
  } else {
    auto nth = scores.begin() + (rank - 1);
    std::nth_element(scores.begin(), nth, scores.end());
    q.q_hat = *nth;
  }
  return q;
}

PredictionInterval ordinal_aps_predict(const ProbVector& p, const ApsQuantile& q) {
  const auto trace = ordinal_aps_expand(p);
  for (const auto& step : trace) {
    if (step.mass >= q.q_hat) return step.interval;
  }
  return trace.back().interval;
}

PredictionInterval naive_cdf_interval(const ProbVector& p, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  const PrefixSums ps(p);
  const auto cumulative = ps.values().subspan(1);
  const auto n = cumulative.size();
  const std::size_t lower = kernels::first_greater(cumulative, alpha / 2.0);
  const std::size_t upper = kernels::first_at_least(cumulative, 1.0 - alpha / 2.0);
  // Both searches can only miss when P_K falls short of 1 by more than alpha/2.
  return {static_cast<Label>(std::min(lower, n - 1)) + 1,
          static_cast<Label>(std::min(upper, n - 1)) + 1};
}

CalibratedPredictor aps_predictor(const ApsQuantile& q, const Dataset& cal) {
  CalibratedPredictor pred;
  pred.method = Method::kOrdinalAps;
  pred.num_classes = cal.num_classes();
  pred.tau_hat = q.q_hat;
  pred.lambda = 0.0;
  pred.alpha = q.alpha;
  pred.n_cal = q.n_cal;
  pred.diagnostics.radial_monotone_fraction = radial_monotone_fraction(cal);
  std::int64_t covered = 0;
  for (std::size_t i = 0; i < cal.size(); ++i) {
    if (ordinal_aps_predict(cal.row(i), q).contains(cal.label(i))) ++covered;
  }
  pred.diagnostics.calibration_coverage_count = covered;
  pred.warnings = q.warnings;
  return pred;
}

}  // namespace ordcp
