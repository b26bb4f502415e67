#include <vector>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "ordcp/covering.hpp"

namespace ordcp {
namespace {

using testgen::kBell;

PredictionInterval iv(Label l, Label u) { return {l, u}; }

TEST(MinLengthInterval, Examples) {
  const ProbVector p(kBell);
  const auto a = min_length_interval(p, 0.5);
  EXPECT_EQ(a.interval, iv(2, 3));
  EXPECT_TRUE(a.feasible);
  EXPECT_NEAR(a.adjusted_mass, 0.6, 1e-12);
  EXPECT_EQ(min_length_interval(p, 0.3).interval, iv(3, 3));
  EXPECT_EQ(min_length_interval(p, 1.0).interval, iv(1, 5));
}

TEST(MinLengthInterval, RejectsBadTau) {
  const ProbVector p(kBell);
  EXPECT_THROW(min_length_interval(p, 0.0), std::invalid_argument);
  EXPECT_THROW(min_length_interval(p, 1.5), std::invalid_argument);
  EXPECT_THROW(min_length_interval_regularized(p, 0.5, -0.1), std::invalid_argument);
}

TEST(MinLengthInterval, PrefersHeavierOfEqualLength) {
  // [2,3] and [3,4] both reach 0.6; [3,4] carries 0.7.
  const ProbVector p({0.05, 0.25, 0.4, 0.3});
  EXPECT_EQ(min_length_interval(p, 0.6).interval, iv(3, 4));
  EXPECT_EQ(brute_force_min_interval(p, 0.6, 0.0).interval, iv(3, 4));
}

TEST(MinLengthInterval, SingleClass) {
  const ProbVector p({1.0});
  EXPECT_EQ(min_length_interval(p, 1.0).interval, iv(1, 1));
}

TEST(MinLengthInterval, PointerStepsBounded) {
  Rng rng(21);
  for (int t = 0; t < 2000; ++t) {
    const int k = 1 + static_cast<int>(rng.below(200));
    const auto p = testgen::random_simplex(rng, k, 0.2);
    ScanCounters c;
    min_length_interval(p, 1.0 - rng.uniform01(), c);
    ASSERT_LE(c.total(), static_cast<std::size_t>(2 * k));
  }
}

TEST(Regularized, Examples) {
  const ProbVector p(kBell);
  EXPECT_EQ(min_length_interval_regularized(p, 0.5, 0.0).interval, iv(2, 3));
  const auto b = min_length_interval_regularized(p, 0.55, 0.05);
  EXPECT_EQ(b.interval, iv(2, 3));
  EXPECT_TRUE(b.feasible);

  const auto c = min_length_interval_regularized(ProbVector({0.5, 0.5}), 1.0, 0.1);
  EXPECT_EQ(c.interval, iv(1, 2));
  EXPECT_FALSE(c.feasible);
}

TEST(Regularized, ZeroLambdaIsIdentical) {
  Rng rng(22);
  for (int t = 0; t < 2000; ++t) {
    const auto p = testgen::random_simplex(rng, 1 + static_cast<int>(rng.below(50)), 0.2);
    const double tau = 1.0 - rng.uniform01();
    ASSERT_EQ(min_length_interval_regularized(p, tau, 0.0), min_length_interval(p, tau));
  }
}

TEST(BruteForce, Examples) {
  const ProbVector p(kBell);
  EXPECT_EQ(brute_force_min_interval(p, 0.5, 0.0).interval, iv(2, 3));
  EXPECT_EQ(brute_force_min_interval(p, 1.0, 0.0).interval, iv(1, 5));
  const auto c = brute_force_min_interval(ProbVector({0.2, 0.6, 0.2}), 0.8, 0.3);
  EXPECT_EQ(c.interval, iv(1, 3));
  EXPECT_FALSE(c.feasible);
}

TEST(Greedy, Examples) {
  const ProbVector p(kBell);
  EXPECT_EQ(greedy_max_mass_interval(p, 0), iv(3, 3));
  EXPECT_EQ(greedy_max_mass_interval(p, 1), iv(2, 3));
  EXPECT_EQ(greedy_max_mass_interval(p, 2), iv(2, 4));
  EXPECT_EQ(greedy_max_mass_interval(p, 3), iv(1, 4));
  EXPECT_EQ(greedy_max_mass_interval(p, 4), iv(1, 5));
  EXPECT_THROW(greedy_max_mass_interval(p, 5), std::out_of_range);
  EXPECT_THROW(greedy_max_mass_interval(p, -1), std::out_of_range);
}

TEST(CriticalScore, Examples) {
  const ProbVector p(kBell);
  EXPECT_EQ(critical_score(p, 3, 0.0), 0.0);
  EXPECT_NEAR(critical_score(p, 2, 0.0), 0.4, 1e-15);
  EXPECT_NEAR(critical_score(p, 5, 0.0), 0.9, 1e-12);
  EXPECT_THROW(critical_score(p, 0, 0.0), std::out_of_range);
  EXPECT_THROW(critical_score(p, 6, 0.0), std::out_of_range);
}

TEST(CriticalScore, ContainmentFlipsOnGrid) {
  const ProbVector p(kBell);
  for (Label y = 1; y <= 5; ++y) {
    const double s = critical_score(p, y, 0.0);
    for (int i = 1; i <= 100; ++i) {
      const double tau = i / 100.0;
      EXPECT_EQ(min_length_interval(p, tau).interval.contains(y), tau > s)
          << "y=" << y << " tau=" << tau;
    }
  }
}

}  // namespace
}  // namespace ordcp
