#pragma once

// Experiment engine: synthetic data, splits, metrics, repeated trials,
// coverage curves and lambda sweeps.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ordcp/calibrate.hpp"
#include "ordcp/core.hpp"

namespace ordcp {

/// Discretized-Gaussian ordinal scores. Each row draws a centre uniformly in
/// [1, K] and a spread uniformly in [sigma_min, sigma_max]; the label is drawn
/// from those scores, then the emitted scores are sharpened or flattened by
/// miscal_temp (1 keeps them calibrated).
struct SynthSpec {
  Label num_classes = 10;
  std::int64_t n = 1000;
  double sigma_min = 1.0;
  double sigma_max = 5.0;
  double miscal_temp = 1.0;
  std::uint64_t seed = 42;

  void validate() const;
};

Dataset synth_generate(const SynthSpec& spec);

/// Seeded uniform permutation, then the first floor(n * cal_fraction) rows
/// calibrate and the rest test. Throws if either part would be empty.
std::pair<Dataset, Dataset> split_dataset(const Dataset& d, std::uint64_t seed,
                                          double cal_fraction = 0.5);

/// Structure-of-arrays interval list, the layout the metric kernels consume.
struct IntervalBatch {
  std::vector<Label> lower;
  std::vector<Label> upper;

  void push_back(const PredictionInterval& iv) {
    lower.push_back(iv.lower);
    upper.push_back(iv.upper);
  }
  std::size_t size() const { return lower.size(); }
  PredictionInterval at(std::size_t i) const { return {lower[i], upper[i]}; }
};

/// Fraction of intervals containing their label.
double coverage_metric(const IntervalBatch& intervals, std::span<const Label> labels);

/// Mean cardinality u - l + 1.
double avg_set_size(const IntervalBatch& intervals);

/// Calibrates `method` on cal. lambda is only used by min-rcps.
CalibratedPredictor fit_predictor(Method method, const Dataset& cal, double alpha, double lambda);

/// Prediction set of any predictor kind.
PredictionInterval apply_predictor(const CalibratedPredictor& pred, const ProbVector& p);

struct Metrics {
  double coverage = 0.0;
  double avg_set_size = 0.0;
};

Metrics evaluate_predictor(const CalibratedPredictor& pred, const Dataset& test,
                           IntervalBatch* intervals = nullptr);

struct TrialRecord {
  int trial_id = 0;
  std::uint64_t seed = 0;
  Method method = Method::kMinCps;
  double alpha = 0.0;
  double lambda = 0.0;
  double coverage = 0.0;
  double avg_set_size = 0.0;
  double runtime_ms = 0.0;

  bool operator==(const TrialRecord&) const = default;
};

struct TrialAggregate {
  Method method = Method::kMinCps;
  double alpha = 0.0;
  double lambda = 0.0;
  int n_trials = 0;
  double coverage_mean = 0.0;
  double coverage_std = 0.0;
  double avg_set_size_mean = 0.0;
  double avg_set_size_std = 0.0;
  double runtime_ms_mean = 0.0;

  bool operator==(const TrialAggregate&) const = default;
};

struct TrialReport {
  std::vector<TrialRecord> records;
  std::vector<TrialAggregate> aggregates;

  bool operator==(const TrialReport&) const = default;
};

/// Mean and sample standard deviation (n - 1 divisor; 0 for a single trial)
/// per (method, alpha, lambda), in order of first appearance.
std::vector<TrialAggregate> aggregate_records(std::span<const TrialRecord> records);

struct TrialOptions {
  double cal_fraction = 0.5;
  /// When false runtime_ms is recorded as 0 so reports are reproducible.
  bool record_timing = true;
};

/// Trial t splits with seed base_seed + t; every method in a trial sees the
/// same split. Calibration failures propagate as CalibrationError naming the
/// trial and method.
TrialReport run_trials(const Dataset& d, std::span<const Method> methods, double alpha,
                       double lambda, int n_trials, std::uint64_t base_seed,
                       const TrialOptions& opts = {});

struct TauPoint {
  double tau = 0.0;
  double coverage = 0.0;
};

/// Empirical coverage at each grid point. The grid must be strictly
/// ascending inside (0, 1].
std::vector<TauPoint> tau_curve(const Dataset& d, std::span<const double> taus, double lambda);

/// n evenly spaced thresholds from tau_min to tau_max inclusive.
std::vector<double> linear_tau_grid(double tau_min, double tau_max, int points);

struct SweepPoint {
  double lambda = 0.0;
  double coverage = 0.0;
  double avg_set_size = 0.0;
};

/// run_trials with min-rcps once per lambda.
std::vector<SweepPoint> lambda_sweep(const Dataset& d, double alpha,
                                     std::span<const double> lambdas, int n_trials,
                                     std::uint64_t base_seed, const TrialOptions& opts = {});

/// {0, 0.001, 0.003, ..., 0.019}.
std::vector<double> default_lambda_grid();

}  // namespace ordcp
