#include "ordcp/harness.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>

#include "ordcp/baselines.hpp"
#include "ordcp/covering.hpp"
#include "ordcp/kernels.hpp"
#include "ordcp/rng.hpp"

namespace ordcp {

std::pair<Dataset, Dataset> split_dataset(const Dataset& d, std::uint64_t seed,
                                          double cal_fraction) {
  if (!(cal_fraction > 0.0 && cal_fraction < 1.0)) {
    throw std::invalid_argument("cal_fraction must lie in (0, 1)");
  }
  const std::size_t n = d.size();
  const auto n_cal = static_cast<std::size_t>(std::floor(static_cast<double>(n) * cal_fraction));
  if (n_cal == 0 || n_cal == n) {
    throw std::invalid_argument("split of " + std::to_string(n) + " rows at fraction " +
                                std::to_string(cal_fraction) + " leaves an empty part");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  const std::span<const std::size_t> all(order);
  return {d.subset(all.first(n_cal)), d.subset(all.subspan(n_cal))};
}

double coverage_metric(const IntervalBatch& intervals, std::span<const Label> labels) {
  if (intervals.size() != labels.size()) {
    throw std::invalid_argument("coverage_metric: " + std::to_string(intervals.size()) +
                                " intervals but " + std::to_string(labels.size()) + " labels");
  }
  if (labels.empty()) throw std::invalid_argument("coverage_metric: no intervals");
  const std::size_t covered = kernels::count_covered(intervals.lower, intervals.upper, labels);
  return static_cast<double>(covered) / static_cast<double>(labels.size());
}

double avg_set_size(const IntervalBatch& intervals) {
  if (intervals.size() == 0) throw std::invalid_argument("avg_set_size: no intervals");
  const std::int64_t total = kernels::sum_cardinalities(intervals.lower, intervals.upper);
  return static_cast<double>(total) / static_cast<double>(intervals.size());
}

CalibratedPredictor fit_predictor(Method method, const Dataset& cal, double alpha, double lambda) {
  switch (method) {
    case Method::kMinCps:
      return calibrate_binary_search(cal, alpha, 0.0);
    case Method::kMinRcps: {
      auto pred = calibrate_binary_search(cal, alpha, lambda);
      pred.method = Method::kMinRcps;
      return pred;
    }
    case Method::kOrdinalAps:
      return aps_predictor(ordinal_aps_calibrate(cal, alpha), cal);
    case Method::kNaiveCdf: {
      if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
      CalibratedPredictor pred;
      pred.method = Method::kNaiveCdf;
      pred.num_classes = cal.num_classes();
      pred.tau_hat = 0.0;
      pred.alpha = alpha;
      pred.n_cal = static_cast<std::int64_t>(cal.size());
      pred.diagnostics.radial_monotone_fraction = radial_monotone_fraction(cal);
      std::int64_t covered = 0;
      for (std::size_t i = 0; i < cal.size(); ++i) {
        if (naive_cdf_interval(cal.row(i), alpha).contains(cal.label(i))) ++covered;
      }
      pred.diagnostics.calibration_coverage_count = covered;
      return pred;
    }
  }
  throw std::invalid_argument("unknown method");
}

PredictionInterval apply_predictor(const CalibratedPredictor& pred, const ProbVector& p) {
  if (p.num_classes() != pred.num_classes) {
    throw std::invalid_argument("predictor has K = " + std::to_string(pred.num_classes) +
                                " but input has K = " + std::to_string(p.num_classes()));
  }
  switch (pred.method) {
    case Method::kMinCps:
    case Method::kMinRcps:
      return predict(pred, p);
    case Method::kOrdinalAps:
      return ordinal_aps_predict(p, ApsQuantile{pred.tau_hat, pred.alpha, pred.n_cal, {}});
    case Method::kNaiveCdf:
      return naive_cdf_interval(p, pred.alpha);
  }
  throw std::invalid_argument("unknown method");
}

Metrics evaluate_predictor(const CalibratedPredictor& pred, const Dataset& test,
                           IntervalBatch* intervals) {
  IntervalBatch local;
  IntervalBatch& batch = intervals != nullptr ? *intervals : local;
  batch = {};
  batch.lower.reserve(test.size());
  batch.upper.reserve(test.size());
  for (const auto& row : test.rows()) batch.push_back(apply_predictor(pred, row));
  return {coverage_metric(batch, test.labels()), avg_set_size(batch)};
}

std::vector<TrialAggregate> aggregate_records(std::span<const TrialRecord> records) {
  std::vector<TrialAggregate> out;
  std::vector<std::vector<const TrialRecord*>> groups;
  for (const auto& r : records) {
    std::size_t g = 0;
    while (g < out.size() &&
           !(out[g].method == r.method && out[g].alpha == r.alpha && out[g].lambda == r.lambda)) {
      ++g;
    }
    if (g == out.size()) {
      out.push_back({r.method, r.alpha, r.lambda});
      groups.emplace_back();
    }
    groups[g].push_back(&r);
  }

  auto mean_std = [](const std::vector<const TrialRecord*>& rs, double TrialRecord::*field) {
    double mean = 0.0;
    for (const auto* r : rs) mean += r->*field;
    mean /= static_cast<double>(rs.size());
    double ss = 0.0;
    for (const auto* r : rs) ss += (r->*field - mean) * (r->*field - mean);
    const double sd = rs.size() > 1 ? std::sqrt(ss / static_cast<double>(rs.size() - 1)) : 0.0;
    return std::pair{mean, sd};
  };

  for (std::size_t g = 0; g < out.size(); ++g) {
    auto& agg = out[g];
    agg.n_trials = static_cast<int>(groups[g].size());
    std::tie(agg.coverage_mean, agg.coverage_std) = mean_std(groups[g], &TrialRecord::coverage);
    std::tie(agg.avg_set_size_mean, agg.avg_set_size_std) =
        mean_std(groups[g], &TrialRecord::avg_set_size);
    agg.runtime_ms_mean = mean_std(groups[g], &TrialRecord::runtime_ms).first;
  }
  return out;
}

TrialReport run_trials(const Dataset& d, std::span<const Method> methods, double alpha,
                       double lambda, int n_trials, std::uint64_t base_seed,
                       const TrialOptions& opts) {
  if (n_trials < 1) throw std::invalid_argument("n_trials must be >= 1");
  if (methods.empty()) throw std::invalid_argument("no methods requested");

  TrialReport report;
  for (int t = 0; t < n_trials; ++t) {
    const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(t);
    const auto [cal, test] = split_dataset(d, seed, opts.cal_fraction);
    for (Method method : methods) {
      const auto start = std::chrono::steady_clock::now();
      CalibratedPredictor pred;
      try {
        pred = fit_predictor(method, cal, alpha, lambda);
      } catch (const std::exception& e) {
        throw CalibrationError("trial " + std::to_string(t) + ", method " +
                               std::string(method_name(method)) + ": " + e.what());
      }
      const Metrics m = evaluate_predictor(pred, test);
      const auto stop = std::chrono::steady_clock::now();

      TrialRecord rec;
      rec.trial_id = t;
      rec.seed = seed;
      rec.method = method;
      rec.alpha = alpha;
      rec.lambda = method == Method::kMinRcps ? lambda : 0.0;
      rec.coverage = m.coverage;
      rec.avg_set_size = m.avg_set_size;
      rec.runtime_ms =
          opts.record_timing ? std::chrono::duration<double, std::milli>(stop - start).count() : 0.0;
      report.records.push_back(rec);
    }
  }
  report.aggregates = aggregate_records(report.records);
  return report;
}

std::vector<TauPoint> tau_curve(const Dataset& d, std::span<const double> taus, double lambda) {
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (!(taus[i] > 0.0 && taus[i] <= 1.0)) {
      throw std::invalid_argument("tau grid values must lie in (0, 1]");
    }
    if (i > 0 && !(taus[i] > taus[i - 1])) {
      throw std::invalid_argument("tau grid must be strictly ascending");
    }
  }
  std::vector<TauPoint> out;
  out.reserve(taus.size());
  for (double tau : taus) out.push_back({tau, empirical_coverage(d, tau, lambda)});
  return out;
}

std::vector<double> linear_tau_grid(double tau_min, double tau_max, int points) {
  if (points < 1) throw std::invalid_argument("points must be >= 1");
  if (points == 1) return {tau_max};
  std::vector<double> grid(static_cast<std::size_t>(points));
  const double step = (tau_max - tau_min) / static_cast<double>(points - 1);
  for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = tau_min + step * i;
  grid.back() = tau_max;
  return grid;
}

std::vector<SweepPoint> lambda_sweep(const Dataset& d, double alpha,
                                     std::span<const double> lambdas, int n_trials,
                                     std::uint64_t base_seed, const TrialOptions& opts) {
  std::vector<SweepPoint> out;
  const Method rcps[] = {Method::kMinRcps};
  for (double lambda : lambdas) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("lambda values must be >= 0");
    const auto report = run_trials(d, rcps, alpha, lambda, n_trials, base_seed, opts);
    const auto& agg = report.aggregates.front();
    out.push_back({lambda, agg.coverage_mean, agg.avg_set_size_mean});
  }
  return out;
}

std::vector<double> default_lambda_grid() {
  std::vector<double> grid{0.0};
  for (int i = 0; i < 10; ++i) grid.push_back(static_cast<double>(1 + 2 * i) / 1000.0);
  return grid;
}

}  // namespace ordcp
