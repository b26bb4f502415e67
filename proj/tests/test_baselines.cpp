#include <vector>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "ordcp/baselines.hpp"
#include "ordcp/covering.hpp"

namespace ordcp {
namespace {

using testgen::kBell;

TEST(ApsExpand, BellTrace) {
  const auto trace = ordinal_aps_expand(ProbVector(kBell));
  const std::vector<PredictionInterval> intervals{{3, 3}, {2, 3}, {2, 4}, {1, 4}, {1, 5}};
  const double masses[] = {0.4, 0.6, 0.8, 0.9, 1.0};
  ASSERT_EQ(trace.size(), 5u);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    EXPECT_EQ(trace[i].interval, intervals[i]);
    EXPECT_NEAR(trace[i].mass, masses[i], 1e-12);
  }
}

TEST(ApsExpand, EdgeShapes) {
  const auto one = ordinal_aps_expand(ProbVector({1.0}));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].interval, (PredictionInterval{1, 1}));
  EXPECT_EQ(one[0].mass, 1.0);

  const auto dec = ordinal_aps_expand(ProbVector({0.5, 0.3, 0.2}));
  ASSERT_EQ(dec.size(), 3u);
  EXPECT_EQ(dec[1].interval, (PredictionInterval{1, 2}));
  EXPECT_NEAR(dec[1].mass, 0.8, 1e-15);
  EXPECT_EQ(dec[2].interval, (PredictionInterval{1, 3}));
}

TEST(ApsExpand, MatchesGreedyOnRadialRows) {
  Rng rng(41);
  for (int t = 0; t < 300; ++t) {
    const auto p = testgen::radial_monotone(rng, 1 + static_cast<int>(rng.below(30)));
    const auto trace = ordinal_aps_expand(p);
    for (Label len = 0; len < p.num_classes(); ++len) {
      EXPECT_EQ(trace[static_cast<std::size_t>(len)].interval, greedy_max_mass_interval(p, len));
    }
  }
}

TEST(ApsScore, Examples) {
  const ProbVector p(kBell);
  EXPECT_NEAR(ordinal_aps_score(p, 3), 0.4, 1e-15);
  EXPECT_NEAR(ordinal_aps_score(p, 4), 0.8, 1e-12);
  EXPECT_NEAR(ordinal_aps_score(p, 5), 1.0, 1e-12);
  EXPECT_THROW(ordinal_aps_score(p, 6), std::out_of_range);
}

TEST(ApsCalibrate, Examples) {
  const auto a = ordinal_aps_calibrate(testgen::copies(kBell, 4, 19), 0.1);
  EXPECT_NEAR(a.q_hat, 0.8, 1e-12);
  EXPECT_TRUE(a.warnings.empty());

  const auto b = ordinal_aps_calibrate(testgen::copies({1.0}, 1, 19), 0.1);
  EXPECT_EQ(b.q_hat, 1.0);

  std::vector<ProbVector> rows(19, ProbVector(kBell));
  std::vector<Label> labels(19, 3);
  for (int i = 9; i < 19; ++i) labels[static_cast<std::size_t>(i)] = 4;
  const auto c = ordinal_aps_calibrate(Dataset(rows, labels), 0.1);
  EXPECT_NEAR(c.q_hat, 0.8, 1e-12);

  const auto d = ordinal_aps_calibrate(testgen::copies(kBell, 4, 5), 0.1);
  EXPECT_FALSE(d.warnings.empty());
  EXPECT_THROW(ordinal_aps_calibrate(Dataset(), 0.1), std::invalid_argument);
}

TEST(ApsPredict, Examples) {
  const ProbVector p(kBell);
  EXPECT_EQ(ordinal_aps_predict(p, {0.5}), (PredictionInterval{2, 3}));
  EXPECT_EQ(ordinal_aps_predict(p, {1.0}), (PredictionInterval{1, 5}));
  EXPECT_EQ(ordinal_aps_predict(p, {0.4}), (PredictionInterval{3, 3}));
  EXPECT_EQ(ordinal_aps_predict(p, {0.1}), (PredictionInterval{3, 3}));
}

TEST(ApsPredict, NestedInThreshold) {
  Rng rng(42);
  for (int t = 0; t < 300; ++t) {
    const auto p = testgen::random_simplex(rng, 1 + static_cast<int>(rng.below(30)), 0.2);
    double q1 = rng.uniform01(), q2 = rng.uniform01();
    if (q1 > q2) std::swap(q1, q2);
    EXPECT_TRUE(ordinal_aps_predict(p, {q2}).contains(ordinal_aps_predict(p, {q1})));
  }
}

TEST(NaiveCdf, Examples) {
  const ProbVector p(kBell);
  EXPECT_EQ(naive_cdf_interval(p, 0.1), (PredictionInterval{1, 5}));
  EXPECT_EQ(naive_cdf_interval(p, 0.4), (PredictionInterval{2, 4}));
  EXPECT_EQ(naive_cdf_interval(ProbVector({0.0, 0.0, 1.0, 0.0}), 0.3), (PredictionInterval{3, 3}));
}

TEST(NaiveCdf, ValidByConstruction) {
  Rng rng(43);
  for (int t = 0; t < 1000; ++t) {
    const auto p = testgen::random_simplex(rng, 1 + static_cast<int>(rng.below(40)), 0.3);
    const double alpha = rng.uniform(0.01, 0.99);
    const auto iv = naive_cdf_interval(p, alpha);
    ASSERT_LE(iv.lower, iv.upper);
    double mass = 0.0;
    for (Label k = iv.lower; k <= iv.upper; ++k) mass += p.prob(k);
    EXPECT_GE(mass, 1.0 - alpha - 1e-9);
  }
}

TEST(Dominance, MinCpsNeverLongerAtSameThreshold) {
  Rng rng(44);
  for (int t = 0; t < 1000; ++t) {
    const auto p = testgen::radial_monotone(rng, 2 + static_cast<int>(rng.below(40)));
    const double q = 1.0 - rng.uniform01();
    EXPECT_LE(min_length_interval(p, q).interval.length(), ordinal_aps_predict(p, {q}).length());
  }
}

}  // namespace
}  // namespace ordcp
