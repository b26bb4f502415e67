#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ordcp/harness.hpp"
#include "ordcp/rng.hpp"

namespace ordcp {

void SynthSpec::validate() const {
  if (num_classes < 2) throw std::invalid_argument("K must be >= 2 for the generator");
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(sigma_min > 0.0) || !std::isfinite(sigma_min)) {
    throw std::invalid_argument("sigma_min must be > 0");
  }
  if (!(sigma_max >= sigma_min) || !std::isfinite(sigma_max)) {
    throw std::invalid_argument("sigma_max must be finite and >= sigma_min");
  }
  if (!(miscal_temp > 0.0) || !std::isfinite(miscal_temp)) {
    throw std::invalid_argument("miscal_temp must be > 0");
  }
}

Dataset synth_generate(const SynthSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const auto k = static_cast<std::size_t>(spec.num_classes);
  std::vector<double> log_score(k), base(k);
  std::vector<ProbVector> rows;
  std::vector<Label> labels;
  rows.reserve(static_cast<std::size_t>(spec.n));
  labels.reserve(static_cast<std::size_t>(spec.n));

  for (std::int64_t i = 0; i < spec.n; ++i) {
    const double centre = rng.uniform(1.0, static_cast<double>(spec.num_classes));
    const double sigma = rng.uniform(spec.sigma_min, spec.sigma_max);

    double peak = -INFINITY;
    for (std::size_t j = 0; j < k; ++j) {
      const double dist = static_cast<double>(j + 1) - centre;
      log_score[j] = -dist * dist / (2.0 * sigma * sigma);
      peak = std::max(peak, log_score[j]);
    }
    double total = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      base[j] = std::exp(log_score[j] - peak);
      total += base[j];
    }

    // Inverse-CDF draw from the calibrated scores.
    const double draw = rng.uniform01() * total;
    double running = 0.0;
    std::size_t label = k - 1;
    for (std::size_t j = 0; j < k; ++j) {
      running += base[j];
      if (draw < running) {
        label = j;
        break;
      }
    }
    while (base[label] == 0.0 && label > 0) --label;

    std::vector<double> emitted(k);
    double emitted_total = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      emitted[j] = std::exp((log_score[j] - peak) / spec.miscal_temp);
      emitted_total += emitted[j];
    }
    for (double& v : emitted) v /= emitted_total;

    rows.emplace_back(std::move(emitted));
    labels.push_back(static_cast<Label>(label + 1));
  }
  return Dataset(std::move(rows), std::move(labels));
}

}  // namespace ordcp
