// Randomized checks of the covering and calibration invariants against
// exhaustive oracles.

#include <algorithm>
#include <vector>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "ordcp/calibrate.hpp"
#include "ordcp/covering.hpp"
#include "ordcp/harness.hpp"

namespace ordcp {
namespace {

double max_anchored_mass(const ProbVector& p, Label len) {
  const Label k = p.num_classes();
  const Label m = argmax_mode(p);
  double best = -1.0;
  for (Label l = std::max<Label>(1, m - len); l <= m && l + len <= k; ++l) {
    double mass = 0.0;
    for (Label j = l; j <= l + len; ++j) mass += p.prob(j);
    best = std::max(best, mass);
  }
  return best;
}

TEST(Oracle, SweepMatchesBruteForce) {
  Rng rng(51);
  for (int t = 0; t < 5000; ++t) {
    const int k = 1 + static_cast<int>(rng.below(50));
    const auto p = testgen::random_simplex(rng, k, t % 3 == 0 ? 0.3 : 0.0);
    const double tau = 1.0 - rng.uniform01();
    const auto fast = min_length_interval(p, tau);
    const auto slow = brute_force_min_interval(p, tau, 0.0);
    ASSERT_EQ(fast.interval, slow.interval) << "t=" << t << " k=" << k << " tau=" << tau;
    ASSERT_TRUE(fast.feasible);
  }
}

TEST(Oracle, RegularizedAgreementOnRadialRows) {
  Rng rng(52);
  const auto grid = default_lambda_grid();
  int trials = 0, equal = 0;
  for (int t = 0; t < 5000; ++t) {
    const auto p = testgen::radial_monotone(rng, 1 + static_cast<int>(rng.below(50)));
    const double tau = 1.0 - rng.uniform01();
    const double lambda = grid[rng.below(grid.size())];
    const auto fast = min_length_interval_regularized(p, tau, lambda);
    const auto slow = brute_force_min_interval(p, tau, lambda);
    ++trials;
    if (fast.interval.length() == slow.interval.length() && fast.feasible == slow.feasible) ++equal;
  }
  EXPECT_GE(static_cast<double>(equal) / trials, 0.999) << equal << " of " << trials;
}

TEST(Oracle, RegularizedSweepIsExact) {
  Rng rng(58);
  for (int t = 0; t < 5000; ++t) {
    const int k = 1 + static_cast<int>(rng.below(50));
    const auto p = testgen::random_simplex(rng, k, t % 3 == 0 ? 0.3 : 0.0);
    const double tau = 1.0 - rng.uniform01();
    const double lambda = rng.uniform(0.0, 0.05);
    const auto fast = min_length_interval_regularized(p, tau, lambda);
    const auto slow = brute_force_min_interval(p, tau, lambda);
    ASSERT_EQ(fast.interval, slow.interval) << "t=" << t << " lambda=" << lambda;
    ASSERT_EQ(fast.feasible, slow.feasible);
  }
}

TEST(Nestedness, IntervalsGrowWithTau) {
  Rng rng(53);
  for (int t = 0; t < 3000; ++t) {
    const auto p = testgen::radial_monotone(rng, 1 + static_cast<int>(rng.below(40)));
    double t1 = 1.0 - rng.uniform01(), t2 = 1.0 - rng.uniform01();
    if (t1 > t2) std::swap(t1, t2);
    const auto a = min_length_interval(p, t1).interval;
    const auto b = min_length_interval(p, t2).interval;
    ASSERT_TRUE(b.contains(a)) << "t=" << t;
  }
}

TEST(Nestedness, HoldsWithTiedSymmetricTails) {
  Rng rng(54);
  for (int t = 0; t < 1000; ++t) {
    const auto p = testgen::radial_monotone(rng, 2 + static_cast<int>(rng.below(30)), true);
    std::vector<PredictionInterval> seq;
    for (int i = 1; i <= 100; ++i) seq.push_back(min_length_interval(p, i / 100.0).interval);
    for (std::size_t i = 1; i < seq.size(); ++i) ASSERT_TRUE(seq[i].contains(seq[i - 1]));
  }
}

TEST(Greedy, MaximalMassForEveryLength) {
  Rng rng(55);
  for (int t = 0; t < 500; ++t) {
    const auto p = testgen::radial_monotone(rng, 1 + static_cast<int>(rng.below(30)), t % 3 == 0);
    const Label m = argmax_mode(p);
    const auto ps = prefix_sums(p);
    for (Label len = 0; len < p.num_classes(); ++len) {
      const auto g = greedy_max_mass_interval(p, len);
      ASSERT_EQ(g.length(), len);
      ASSERT_TRUE(g.contains(m));
      EXPECT_NEAR(interval_mass(ps, g.lower, g.upper), max_anchored_mass(p, len), 1e-12);
    }
  }
}

TEST(CriticalScore, ContractOnRandomRadialRows) {
  Rng rng(56);
  for (int t = 0; t < 300; ++t) {
    const auto p = testgen::radial_monotone(rng, 1 + static_cast<int>(rng.below(25)));
    const double lambda = t % 2 == 0 ? 0.0 : 0.003;
    for (Label y = 1; y <= p.num_classes(); ++y) {
      const double s = critical_score(p, y, lambda);
      for (int i = 1; i <= 200; ++i) {
        const double tau = i / 200.0;
        ASSERT_EQ(min_length_interval_regularized(p, tau, lambda).interval.contains(y), tau > s)
            << "t=" << t << " y=" << y << " tau=" << tau << " s=" << s;
      }
      if (s < 1.0) {
        EXPECT_TRUE(min_length_interval_regularized(p, s + 1e-12, lambda).interval.contains(y));
      }
      if (s > 0.0) {
        EXPECT_FALSE(min_length_interval_regularized(p, s, lambda).interval.contains(y));
      }
    }
  }
}

TEST(Coverage, NonDecreasingOverTau) {
  Rng rng(57);
  const auto grid = linear_tau_grid(0.005, 1.0, 200);
  for (int t = 0; t < 10; ++t) {
    const auto d = testgen::radial_dataset(rng, 200, 20);
    const auto curve = tau_curve(d, grid, 0.0);
    for (std::size_t i = 1; i < curve.size(); ++i) {
      ASSERT_GE(curve[i].coverage, curve[i - 1].coverage);
    }
    EXPECT_EQ(curve.back().coverage, 1.0);
  }
}

}  // namespace
}  // namespace ordcp
