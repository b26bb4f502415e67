#pragma once

// Split-conformal calibration of the covering threshold tau.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ordcp/core.hpp"

namespace ordcp {

enum class Method { kMinCps, kMinRcps, kOrdinalAps, kNaiveCdf };

std::string_view method_name(Method m);
/// Accepts "min-cps", "min-rcps", "ordinal-aps", "naive-cdf".
Method parse_method(std::string_view name);

/// Bisection controls. Defaults: 60 iterations, stop once the bracket is
/// narrower than 1e-9, bracket [0, 1].
struct SearchOptions {
  int max_iters = 60;
  double tolerance = 1e-9;
  double lower_init = 0.0;
  double upper_init = 1.0;

  void validate() const;
};

struct CalibrationDiagnostics {
  /// Calibration rows passing the radial-monotonicity check at tol 1e-9.
  double radial_monotone_fraction = 0.0;
  /// Calibration rows covered at tau_hat.
  std::int64_t calibration_coverage_count = 0;
  /// Bisection steps taken (0 for closed-form paths).
  int search_iterations = 0;

  bool operator==(const CalibrationDiagnostics&) const = default;
};

struct CalibratedPredictor {
  Method method = Method::kMinCps;
  Label num_classes = 0;
  /// Mass threshold; q_hat for ordinal-aps, unused for naive-cdf.
  double tau_hat = 1.0;
  double lambda = 0.0;
  double alpha = 0.1;
  std::int64_t n_cal = 0;
  CalibrationDiagnostics diagnostics;
  /// Non-fatal conditions met during calibration. Not serialized.
  std::vector<std::string> warnings;

  bool same_fields(const CalibratedPredictor& other) const {
    return method == other.method && num_classes == other.num_classes &&
           tau_hat == other.tau_hat && lambda == other.lambda && alpha == other.alpha &&
           n_cal == other.n_cal && diagnostics == other.diagnostics;
  }
};

/// ceil((1 - alpha)(n + 1)), not clamped to n.
std::int64_t target_count(double alpha, std::int64_t n);

/// Rows whose covering interval at (tau, lambda) contains the label.
std::int64_t covered_count(const Dataset& d, double tau, double lambda);

/// covered_count / n. Throws std::invalid_argument on an empty dataset.
double empirical_coverage(const Dataset& d, double tau, double lambda);

/// Bisection on tau keeping an upper bound that always meets the count
/// target min(ceil((1 - alpha)(n + 1)), n); returns that upper bound. When
/// the unclamped target exceeds n the search is skipped and tau_hat = 1.
/// method is min-cps for lambda == 0, min-rcps otherwise.
CalibratedPredictor calibrate_binary_search(const Dataset& d, double alpha, double lambda,
                                            const SearchOptions& opts = {});

/// Closed form via critical scores: tau_hat is the c-th smallest score plus
/// 1e-12 (the largest score when c > n). Requires every row to be radially
/// monotone and throws CalibrationError naming the first row that is not.
CalibratedPredictor calibrate_exact(const Dataset& d, double alpha, double lambda);

/// Covering interval of p at the predictor's threshold. Only for min-cps and
/// min-rcps predictors; throws std::invalid_argument on a K mismatch.
PredictionInterval predict(const CalibratedPredictor& pred, const ProbVector& p);

}  // namespace ordcp
