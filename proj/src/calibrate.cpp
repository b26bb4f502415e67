#include "ordcp/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ordcp/covering.hpp"

namespace ordcp {
namespace {

constexpr double kExactNudge = 1e-12;

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
}

void require_nonempty(const Dataset& d) {
  if (d.empty()) throw std::invalid_argument("calibration dataset is empty");
}

// Prefix sums and modes cached once per row; bisection re-evaluates every
// row at each step.
class PreparedRows {
 public:
  explicit PreparedRows(const Dataset& d) : labels_(d.labels()) {
    sums_.reserve(d.size());
    modes_.reserve(d.size());
    for (const auto& row : d.rows()) {
      sums_.emplace_back(row);
      modes_.push_back(argmax_mode(row));
    }
  }

  std::int64_t covered(double tau, double lambda) const {
    std::int64_t count = 0;
    for (std::size_t i = 0; i < sums_.size(); ++i) {
      const auto r = min_length_interval_regularized(sums_[i], modes_[i], tau, lambda);
      if (r.interval.contains(labels_[i])) ++count;
    }
    return count;
  }

 private:
  std::span<const Label> labels_;
  std::vector<PrefixSums> sums_;
  std::vector<Label> modes_;
};

CalibratedPredictor base_predictor(const Dataset& d, double alpha, double lambda) {
  CalibratedPredictor pred;
  pred.method = lambda == 0.0 ? Method::kMinCps : Method::kMinRcps;
  pred.num_classes = d.num_classes();
  pred.lambda = lambda;
  pred.alpha = alpha;
  pred.n_cal = static_cast<std::int64_t>(d.size());
  pred.diagnostics.radial_monotone_fraction = radial_monotone_fraction(d);
  return pred;
}

std::string small_n_warning(std::int64_t c, std::int64_t n) {
  return "target count " + std::to_string(c) + " exceeds n_cal = " + std::to_string(n) +
         "; threshold forced to the conservative end";
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::kMinCps:
      return "min-cps";
    case Method::kMinRcps:
      return "min-rcps";
    case Method::kOrdinalAps:
      return "ordinal-aps";
    case Method::kNaiveCdf:
      return "naive-cdf";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::kMinCps, Method::kMinRcps, Method::kOrdinalAps, Method::kNaiveCdf}) {
    if (method_name(m) == name) return m;
  }
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

void SearchOptions::validate() const {
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  if (!(lower_init >= 0.0 && lower_init < upper_init && upper_init <= 1.0)) {
    throw std::invalid_argument("search bracket must satisfy 0 <= lower < upper <= 1");
  }
}

std::int64_t target_count(double alpha, std::int64_t n) {
  // The 1e-9 slack keeps products such as 0.9 * 20 from rounding up to 19.
  return static_cast<std::int64_t>(
      std::ceil((1.0 - alpha) * static_cast<double>(n + 1) - 1e-9));
}

std::int64_t covered_count(const Dataset& d, double tau, double lambda) {
  return PreparedRows(d).covered(tau, lambda);
}

double empirical_coverage(const Dataset& d, double tau, double lambda) {
  require_nonempty(d);
  return static_cast<double>(covered_count(d, tau, lambda)) / static_cast<double>(d.size());
}

CalibratedPredictor calibrate_binary_search(const Dataset& d, double alpha, double lambda,
                                            const SearchOptions& opts) {
  require_alpha(alpha);
  require_nonempty(d);
  opts.validate();
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");

  const PreparedRows rows(d);
  const auto n = static_cast<std::int64_t>(d.size());
  const std::int64_t c = target_count(alpha, n);
  CalibratedPredictor pred = base_predictor(d, alpha, lambda);

  if (c > n) {
    pred.warnings.push_back(small_n_warning(c, n));
    pred.tau_hat = 1.0;
    pred.diagnostics.calibration_coverage_count = rows.covered(1.0, lambda);
    if (pred.diagnostics.calibration_coverage_count < n) {
      throw CalibrationError("coverage target unreachable: tau = 1 covers only " +
                             std::to_string(pred.diagnostics.calibration_coverage_count) + " of " +
                             std::to_string(n) + " calibration rows");
    }
    return pred;
  }

  double lo = opts.lower_init;
  double hi = opts.upper_init;
  std::int64_t hi_count = rows.covered(hi, lambda);
  if (hi_count < c && hi < 1.0) {
    pred.warnings.push_back("upper bound " + std::to_string(hi) +
                            " misses the target count; widened to 1");
    lo = std::max(lo, hi);
    hi = 1.0;
    hi_count = rows.covered(hi, lambda);
  }
  if (hi_count < c) {
    throw CalibrationError("coverage target unreachable: tau = 1 covers only " +
                           std::to_string(hi_count) + " of the required " + std::to_string(c) +
                           " calibration rows");
  }

  // Invariant: hi meets the target. Insufficient coverage raises lo.
  int iters = 0;
  while (iters < opts.max_iters && hi - lo >= opts.tolerance) {
    const double mid = lo + 0.5 * (hi - lo);
    if (!(mid > 0.0)) break;
    const std::int64_t count = rows.covered(mid, lambda);
    if (count >= c) {
      hi = mid;
      hi_count = count;
    } else {
      lo = mid;
    }
    ++iters;
  }

  pred.tau_hat = hi;
  pred.diagnostics.calibration_coverage_count = hi_count;
  pred.diagnostics.search_iterations = iters;
  return pred;
}

CalibratedPredictor calibrate_exact(const Dataset& d, double alpha, double lambda) {
  require_alpha(alpha);
  require_nonempty(d);
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");

  std::vector<double> scores;
  scores.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!check_radial_monotonicity(d.row(i))) {
      throw CalibrationError("row " + std::to_string(i + 1) +
                             " is not radially monotone; exact calibration needs every row to be");
    }
    scores.push_back(critical_score(d.row(i), d.label(i), lambda));
  }

  const auto n = static_cast<std::int64_t>(d.size());
  const std::int64_t c = target_count(alpha, n);
  CalibratedPredictor pred = base_predictor(d, alpha, lambda);

  double threshold = 0.0;
  if (c > n) {
    pred.warnings.push_back(small_n_warning(c, n));
    threshold = *std::max_element(scores.begin(), scores.end());
  } else {
    auto nth = scores.begin() + (c - 1);
    std::nth_element(scores.begin(), nth, scores.end());
    threshold = *nth;
  }
  pred.tau_hat = std::min(threshold + kExactNudge, 1.0);

  const std::int64_t target = std::min(c, n);
  pred.diagnostics.calibration_coverage_count = covered_count(d, pred.tau_hat, lambda);
  if (pred.diagnostics.calibration_coverage_count < target) {
    throw CalibrationError("exact threshold covers " +
                           std::to_string(pred.diagnostics.calibration_coverage_count) +
                           " calibration rows, below the target " + std::to_string(target));
  }
  return pred;
}

PredictionInterval predict(const CalibratedPredictor& pred, const ProbVector& p) {
  if (pred.method != Method::kMinCps && pred.method != Method::kMinRcps) {
    throw std::invalid_argument("predict expects a min-cps or min-rcps predictor, got " +
                                std::string(method_name(pred.method)));
  }
  if (p.num_classes() != pred.num_classes) {
    throw std::invalid_argument("predictor has K = " + std::to_string(pred.num_classes) +
                                " but input has K = " + std::to_string(p.num_classes()));
  }
  return min_length_interval_regularized(p, pred.tau_hat, pred.lambda).interval;
}

}  // namespace ordcp
