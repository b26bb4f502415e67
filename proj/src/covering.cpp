#include "ordcp/covering.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace ordcp {
namespace {

void require_tau(double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) {
    throw std::invalid_argument("tau must lie in (0, 1], got " + std::to_string(tau));
  }
}

void require_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("lambda must be a finite value >= 0, got " +
                                std::to_string(lambda));
  }
}

void require_label(Label y, Label k) {
  if (y < 1 || y > k) {
    throw std::out_of_range("label " + std::to_string(y) + " outside [1, " + std::to_string(k) +
                            "]");
  }
}

CoveringResult fallback(const PrefixSums& ps, double lambda) {
  const Label k = ps.num_classes();
  return {{1, k}, false, ps.mass(1, k) - lambda * static_cast<double>(k - 1)};
}

// Ascending u from the mode with a lower pointer that only moves right.
// The lower pointer visits the left ends l <= mode whose offset
// P_{l-1} - lambda * (l - 1) is strictly below that of every larger left end;
// any other l is beaten by a shorter interval with the same u. For lambda = 0
// these are the usual left ends, and for lambda > 0 the scan stays exact even
// though trimming an entry lighter than lambda raises the penalized mass.
CoveringResult sweep(const PrefixSums& ps, Label mode, double tau, double lambda,
                     ScanCounters* counters) {
  const Label k = ps.num_classes();
  std::vector<Label> lefts;
  lefts.reserve(static_cast<std::size_t>(mode));
  double lowest = std::numeric_limits<double>::infinity();
  for (Label l = mode; l >= 1; --l) {
    const double offset = ps.at(l - 1) - lambda * static_cast<double>(l - 1);
    if (offset < lowest) {
      lefts.push_back(l);
      lowest = offset;
    }
  }

  bool found = false;
  CoveringResult best{{1, k}, false, -std::numeric_limits<double>::infinity()};
  for (Label u = mode; u <= k && !lefts.empty(); ++u) {
    if (counters != nullptr) ++counters->upper_steps;
    while (!lefts.empty()) {
      const Label l = lefts.back();
      const double a = ps.mass(l, u) - lambda * static_cast<double>(u - l);
      if (!(a >= tau)) break;
      const Label len = u - l;
      if (!found || len < best.interval.length() ||
          (len == best.interval.length() && a > best.adjusted_mass + kMassTieTolerance)) {
        best = {{l, u}, true, a};
        found = true;
      }
      lefts.pop_back();
      if (counters != nullptr) ++counters->lower_steps;
    }
  }
  return best;
}

}  // namespace

CoveringResult min_length_interval(const ProbVector& p, double tau) {
  require_tau(tau);
  const PrefixSums ps(p);
  auto result = sweep(ps, argmax_mode(p), tau, 0.0, nullptr);
  return result.feasible ? result : fallback(ps, 0.0);
}

CoveringResult min_length_interval(const ProbVector& p, double tau, ScanCounters& counters) {
  require_tau(tau);
  const PrefixSums ps(p);
  auto result = sweep(ps, argmax_mode(p), tau, 0.0, &counters);
  return result.feasible ? result : fallback(ps, 0.0);
}

CoveringResult min_length_interval_regularized(const PrefixSums& ps, Label mode, double tau,
                                               double lambda) {
  require_tau(tau);
  require_lambda(lambda);
  auto result = sweep(ps, mode, tau, lambda, nullptr);
  return result.feasible ? result : fallback(ps, lambda);
}

CoveringResult min_length_interval_regularized(const ProbVector& p, double tau, double lambda) {
  return min_length_interval_regularized(PrefixSums(p), argmax_mode(p), tau, lambda);
}

CoveringResult brute_force_min_interval(const ProbVector& p, double tau, double lambda) {
  require_tau(tau);
  require_lambda(lambda);
  const Label k = p.num_classes();
  const Label mode = argmax_mode(p);
  for (Label len = 0; len < k; ++len) {
    bool found = false;
    CoveringResult best;
    for (Label u = std::max(mode, len + 1); u <= std::min(k, mode + len); ++u) {
      const Label l = u - len;
      double mass = 0.0;
      for (Label j = l; j <= u; ++j) mass += p.prob(j);
      const double a = mass - lambda * static_cast<double>(len);
      if (a >= tau && (!found || a > best.adjusted_mass + kMassTieTolerance)) {
        best = {{l, u}, true, a};
        found = true;
      }
    }
    if (found) return best;
  }
  double total = 0.0;
  for (Label j = 1; j <= k; ++j) total += p.prob(j);
  return {{1, k}, false, total - lambda * static_cast<double>(k - 1)};
}

PredictionInterval greedy_max_mass_interval(const ProbVector& p, Label length) {
  const Label k = p.num_classes();
  if (length < 0 || length > k - 1) {
    throw std::out_of_range("length " + std::to_string(length) + " outside [0, " +
                            std::to_string(k - 1) + "]");
  }
  const Label mode = argmax_mode(p);
  PredictionInterval iv{mode, mode};
  for (Label step = 0; step < length; ++step) {
    const bool can_left = iv.lower > 1;
    const bool can_right = iv.upper < k;
    if (can_left && (!can_right || p.prob(iv.lower - 1) >= p.prob(iv.upper + 1))) {
      --iv.lower;
    } else {
      ++iv.upper;
    }
  }
  return iv;
}

double critical_score(const ProbVector& p, Label y, double lambda) {
  const Label k = p.num_classes();
  require_label(y, k);
  require_lambda(lambda);
  const PrefixSums ps(p);
  const Label mode = argmax_mode(p);
  PredictionInterval iv{mode, mode};
  // Largest adjusted mass over the greedy intervals that still exclude y.
  double score = 0.0;
  while (!iv.contains(y)) {
    const double adjusted =
        ps.mass(iv.lower, iv.upper) - lambda * static_cast<double>(iv.length());
    score = std::max(score, adjusted);
    const bool can_left = iv.lower > 1;
    const bool can_right = iv.upper < k;
    if (can_left && (!can_right || p.prob(iv.lower - 1) >= p.prob(iv.upper + 1))) {
      --iv.lower;
    } else {
      ++iv.upper;
    }
  }
  return score;
}

}  // namespace ordcp
