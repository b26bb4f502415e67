#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "ordcp/harness.hpp"

namespace ordcp {
namespace {

TEST(Synth, SameSeedSameData) {
  SynthSpec spec;
  spec.num_classes = 12;
  spec.n = 300;
  EXPECT_EQ(synth_generate(spec), synth_generate(spec));
  spec.seed = 43;
  const auto other = synth_generate(spec);
  spec.seed = 42;
  EXPECT_FALSE(other == synth_generate(spec));
}

TEST(Synth, WideSpreadIsNearlyFlat) {
  SynthSpec spec;
  spec.num_classes = 2;
  spec.n = 50;
  spec.sigma_min = spec.sigma_max = 1e6;
  const auto d = synth_generate(spec);
  for (const auto& row : d.rows()) {
    EXPECT_NEAR(row.prob(1), 0.5, 1e-9);
    EXPECT_NEAR(row.prob(2), 0.5, 1e-9);
  }
}

TEST(Synth, RowsAreRadiallyMonotone) {
  SynthSpec spec;
  spec.num_classes = 50;
  spec.n = 2000;
  spec.miscal_temp = 1.5;
  EXPECT_EQ(radial_monotone_fraction(synth_generate(spec), 1e-12), 1.0);
}

TEST(Synth, RejectsBadSpec) {
  SynthSpec spec;
  spec.num_classes = 1;
  EXPECT_THROW(synth_generate(spec), std::invalid_argument);
  spec = {};
  spec.sigma_min = 0.0;
  EXPECT_THROW(synth_generate(spec), std::invalid_argument);
  spec = {};
  spec.miscal_temp = 0.0;
  EXPECT_THROW(synth_generate(spec), std::invalid_argument);
  spec = {};
  spec.sigma_max = 0.5;
  EXPECT_THROW(synth_generate(spec), std::invalid_argument);
}

// Bins rows by predicted probability of each label and checks the observed
// label frequency against a 3-sigma binomial band in every populated bin.
TEST(Synth, CalibratedLabelsMatchScores) {
  SynthSpec spec;
  spec.num_classes = 6;
  spec.n = 40000;
  spec.seed = 7;
  const auto d = synth_generate(spec);
  constexpr int kBins = 10;
  std::vector<double> expected(kBins), observed(kBins), count(kBins);
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (Label k = 1; k <= spec.num_classes; ++k) {
      const double q = d.row(i).prob(k);
      const int b = std::min(kBins - 1, static_cast<int>(q * kBins));
      expected[b] += q;
      observed[b] += d.label(i) == k ? 1.0 : 0.0;
      count[b] += 1.0;
    }
  }
  for (int b = 0; b < kBins; ++b) {
    if (count[b] < 100) continue;
    const double mean_q = expected[b] / count[b];
    const double sd = std::sqrt(mean_q * (1 - mean_q) / count[b]);
    EXPECT_NEAR(observed[b] / count[b], mean_q, 3 * sd + 1e-3) << "bin " << b;
  }
}

TEST(Split, Sizes) {
  Rng rng(71);
  const auto d10 = testgen::simplex_dataset(rng, 10, 4);
  const auto [a, b] = split_dataset(d10, 1);
  EXPECT_EQ(a.size(), 5u);
  EXPECT_EQ(b.size(), 5u);
  const auto d11 = testgen::simplex_dataset(rng, 11, 4);
  const auto [c, e] = split_dataset(d11, 1);
  EXPECT_EQ(c.size(), 5u);
  EXPECT_EQ(e.size(), 6u);
  EXPECT_THROW(split_dataset(testgen::simplex_dataset(rng, 1, 4), 1), std::invalid_argument);
  EXPECT_THROW(split_dataset(d10, 1, 1.0), std::invalid_argument);
}

TEST(Split, DeterministicAndComplete) {
  Rng rng(72);
  const auto d = testgen::simplex_dataset(rng, 101, 5);
  const auto first = split_dataset(d, 9);
  const auto second = split_dataset(d, 9);
  EXPECT_EQ(first.first, second.first);
  EXPECT_EQ(first.second, second.second);

  std::vector<double> all, halves;
  for (const auto& r : d.rows()) all.push_back(r.prob(1));
  for (const auto& r : first.first.rows()) halves.push_back(r.prob(1));
  for (const auto& r : first.second.rows()) halves.push_back(r.prob(1));
  std::sort(all.begin(), all.end());
  std::sort(halves.begin(), halves.end());
  EXPECT_EQ(all, halves);
}

TEST(Metrics, Coverage) {
  IntervalBatch full;
  std::vector<Label> labels;
  for (int i = 0; i < 10; ++i) {
    full.push_back({1, 5});
    labels.push_back(1 + i % 5);
  }
  EXPECT_EQ(coverage_metric(full, labels), 1.0);

  IntervalBatch miss;
  for (int i = 0; i < 10; ++i) miss.push_back({1, 1});
  std::vector<Label> twos(10, 2);
  EXPECT_EQ(coverage_metric(miss, twos), 0.0);

  twos[3] = 1;
  IntervalBatch nine;
  for (int i = 0; i < 10; ++i) nine.push_back(i == 3 ? PredictionInterval{4, 5} : PredictionInterval{2, 3});
  EXPECT_DOUBLE_EQ(coverage_metric(nine, twos), 0.9);

  EXPECT_THROW(coverage_metric(nine, std::vector<Label>(3, 1)), std::invalid_argument);
  EXPECT_THROW(coverage_metric(IntervalBatch{}, std::vector<Label>{}), std::invalid_argument);
}

TEST(Metrics, SetSize) {
  IntervalBatch singles;
  for (int i = 0; i < 4; ++i) singles.push_back({i + 1, i + 1});
  EXPECT_EQ(avg_set_size(singles), 1.0);
  IntervalBatch full;
  for (int i = 0; i < 4; ++i) full.push_back({1, 7});
  EXPECT_EQ(avg_set_size(full), 7.0);
  IntervalBatch mixed;
  mixed.push_back({2, 3});
  mixed.push_back({1, 4});
  EXPECT_EQ(avg_set_size(mixed), 3.0);
  EXPECT_THROW(avg_set_size(IntervalBatch{}), std::invalid_argument);
}

TEST(Trials, RecordsAndAggregates) {
  SynthSpec spec;
  spec.num_classes = 20;
  spec.n = 600;
  const auto d = synth_generate(spec);
  const Method methods[] = {Method::kNaiveCdf, Method::kOrdinalAps, Method::kMinCps,
                            Method::kMinRcps};
  TrialOptions opts;
  opts.record_timing = false;
  const auto report = run_trials(d, methods, 0.1, 0.003, 3, 100, opts);
  ASSERT_EQ(report.records.size(), 12u);
  ASSERT_EQ(report.aggregates.size(), 4u);
  for (const auto& r : report.records) {
    EXPECT_EQ(r.seed, 100u + static_cast<std::uint64_t>(r.trial_id));
    EXPECT_GE(r.coverage, 0.0);
    EXPECT_LE(r.coverage, 1.0);
    EXPECT_GE(r.avg_set_size, 1.0);
    EXPECT_LE(r.avg_set_size, 20.0);
    EXPECT_EQ(r.runtime_ms, 0.0);
    EXPECT_EQ(r.lambda, r.method == Method::kMinRcps ? 0.003 : 0.0);
  }
  EXPECT_EQ(report.aggregates[2].n_trials, 3);
  EXPECT_EQ(run_trials(d, methods, 0.1, 0.003, 3, 100, opts), report);
}

TEST(Trials, SampleStd) {
  std::vector<TrialRecord> rs(3);
  rs[0].coverage = 0.8;
  rs[1].coverage = 0.9;
  rs[2].coverage = 1.0;
  const auto agg = aggregate_records(rs);
  ASSERT_EQ(agg.size(), 1u);
  EXPECT_NEAR(agg[0].coverage_mean, 0.9, 1e-15);
  EXPECT_NEAR(agg[0].coverage_std, 0.1, 1e-15);
  EXPECT_EQ(aggregate_records(std::span(rs).first(1))[0].coverage_std, 0.0);
}

TEST(Trials, CalibrationSatisfiesCount) {
  SynthSpec spec;
  spec.num_classes = 15;
  spec.n = 400;
  const auto d = synth_generate(spec);
  const auto [cal, test] = split_dataset(d, 42);
  const auto pred = fit_predictor(Method::kMinCps, cal, 0.1, 0.0);
  EXPECT_GE(pred.diagnostics.calibration_coverage_count, target_count(0.1, cal.size()));
}

TEST(Trials, ZeroLambdaRowMatchesMinCps) {
  SynthSpec spec;
  spec.num_classes = 15;
  spec.n = 400;
  const auto d = synth_generate(spec);
  TrialOptions opts;
  opts.record_timing = false;
  const double zero[] = {0.0};
  const auto sweep = lambda_sweep(d, 0.1, zero, 4, 5, opts);
  const Method cps[] = {Method::kMinCps};
  const auto agg = run_trials(d, cps, 0.1, 0.0, 4, 5, opts).aggregates.front();
  EXPECT_EQ(sweep.front().coverage, agg.coverage_mean);
  EXPECT_EQ(sweep.front().avg_set_size, agg.avg_set_size_mean);
}

TEST(Trials, FailuresAreLabelled) {
  Rng rng(73);
  const auto d = testgen::simplex_dataset(rng, 40, 4);
  const Method cps[] = {Method::kMinCps};
  EXPECT_THROW(run_trials(d, cps, 1.5, 0.0, 1, 1), CalibrationError);
  EXPECT_THROW(run_trials(d, cps, 0.1, 0.0, 0, 1), std::invalid_argument);
}

TEST(Curve, Examples) {
  const auto d = testgen::copies(testgen::kBell, 2, 19);
  const double grid[] = {0.3, 0.5};
  const auto curve = tau_curve(d, grid, 0.0);
  EXPECT_EQ(curve[0].coverage, 0.0);
  EXPECT_EQ(curve[1].coverage, 1.0);
  const double full[] = {1.0};
  EXPECT_EQ(tau_curve(d, full, 0.0)[0].coverage, 1.0);
  const double unsorted[] = {0.5, 0.3};
  EXPECT_THROW(tau_curve(d, unsorted, 0.0), std::invalid_argument);
  const double zero[] = {0.0, 0.5};
  EXPECT_THROW(tau_curve(d, zero, 0.0), std::invalid_argument);
}

TEST(Curve, LinearGrid) {
  const auto g = linear_tau_grid(0.01, 1.0, 200);
  ASSERT_EQ(g.size(), 200u);
  EXPECT_EQ(g.front(), 0.01);
  EXPECT_EQ(g.back(), 1.0);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_GT(g[i], g[i - 1]);
}

TEST(Sweep, DefaultGrid) {
  const std::vector<double> expected{0.0,   0.001, 0.003, 0.005, 0.007, 0.009,
                                     0.011, 0.013, 0.015, 0.017, 0.019};
  EXPECT_EQ(default_lambda_grid(), expected);
}

}  // namespace
}  // namespace ordcp
