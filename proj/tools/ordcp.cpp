// ordcp command-line tool: generate data, calibrate, predict, evaluate and
// run comparison experiments.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ordcp/baselines.hpp"
#include "ordcp/calibrate.hpp"
#include "ordcp/harness.hpp"
#include "ordcp/io.hpp"

namespace {

using ordcp::Method;
using Json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = 42;
  bool quiet = false;
  std::string out;
};

struct GenerateArgs {
  int k = 0;
  std::int64_t n = 0;
  double sigma_min = 1.0;
  double sigma_max = 5.0;
  double miscal_temp = 1.0;
};

struct CalibrateArgs {
  std::string data;
  double alpha = 0.1;
  std::string method = "min-cps";
  std::optional<double> lambda;
  bool exact = false;
};

struct ModelArgs {
  std::string model;
  std::string data;
};

struct CompareArgs {
  std::string data;
  double alpha = 0.1;
  double lambda = 0.003;
  int trials = 10;
  bool no_timing = false;
};

struct CurveArgs {
  std::string data;
  double lambda = 0.0;
  double tau_min = 0.005;
  double tau_max = 1.0;
  int points = 200;
};

struct SweepArgs {
  std::string data;
  double alpha = 0.1;
  std::vector<double> lambdas = ordcp::default_lambda_grid();
  int trials = 10;
  bool no_timing = false;
};

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("--alpha must lie strictly between 0 and 1");
}

void require_out(const Globals& g) {
  if (g.out.empty()) throw UsageError("--out is required");
}

void info(const Globals& g, const std::string& line) {
  if (!g.quiet) std::cout << line << '\n';
}

void warn(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "WARNING: " << w << '\n';
}

std::string echo(const Globals& g, const std::string& command, Json flags) {
  Json config;
  config["command"] = command;
  config["seed"] = g.seed;
  for (auto& [key, value] : flags.items()) config[key] = value;
  const std::string text = config.dump();
  info(g, "config: " + text);
  return text;
}

ordcp::Dataset load_data(const std::string& path) { return ordcp::io::load_dataset_csv({path}); }

int run_generate(const Globals& g, const GenerateArgs& a) {
  require_out(g);
  if (a.k < 2) throw UsageError("--k must be >= 2 for the generator");
  if (a.n < 1) throw UsageError("--n must be >= 1");
  ordcp::SynthSpec spec;
  spec.num_classes = a.k;
  spec.n = a.n;
  spec.sigma_min = a.sigma_min;
  spec.sigma_max = a.sigma_max;
  spec.miscal_temp = a.miscal_temp;
  spec.seed = g.seed;
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto config = echo(g, "generate",
                           {{"k", a.k},
                            {"n", a.n},
                            {"sigma_min", a.sigma_min},
                            {"sigma_max", a.sigma_max},
                            {"miscal_temp", a.miscal_temp}});
  ordcp::io::save_dataset_csv(ordcp::synth_generate(spec), g.out, config);
  info(g, "wrote " + std::to_string(a.n) + " rows to " + g.out);
  return 0;
}

int run_calibrate(const Globals& g, const CalibrateArgs& a) {
  require_out(g);
  check_alpha(a.alpha);
  Method method;
  try {
    method = ordcp::parse_method(a.method);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (a.lambda && method != Method::kMinRcps) {
    throw UsageError("--lambda is only valid with --method min-rcps");
  }
  const bool covering = method == Method::kMinCps || method == Method::kMinRcps;
  if (a.exact && !covering) throw UsageError("--exact requires --method min-cps or min-rcps");
  const double lambda = method == Method::kMinRcps ? a.lambda.value_or(0.003) : 0.0;
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw UsageError("--lambda must be >= 0");

  echo(g, "calibrate",
       {{"data", a.data},
        {"alpha", a.alpha},
        {"method", a.method},
        {"lambda", lambda},
        {"exact", a.exact}});
  const auto data = load_data(a.data);

  ordcp::CalibratedPredictor pred;
  if (covering) {
    pred = a.exact ? ordcp::calibrate_exact(data, a.alpha, lambda)
                   : ordcp::calibrate_binary_search(data, a.alpha, lambda);
    pred.method = method;
  } else {
    pred = ordcp::fit_predictor(method, data, a.alpha, lambda);
  }
  warn(pred.warnings);
  ordcp::io::save_predictor(pred, g.out);

  const char* label = method == Method::kOrdinalAps ? "q_hat" : "tau_hat";
  info(g, std::string(label) + ": " + ordcp::io::format_double(pred.tau_hat));
  info(g, "calibration coverage count: " +
              std::to_string(pred.diagnostics.calibration_coverage_count) + " of " +
              std::to_string(pred.n_cal) + " (target " +
              std::to_string(ordcp::target_count(a.alpha, pred.n_cal)) + ")");
  info(g, "radially monotone fraction: " +
              ordcp::io::format_double(pred.diagnostics.radial_monotone_fraction));
  return 0;
}

std::pair<ordcp::CalibratedPredictor, ordcp::Dataset> load_model_and_data(const ModelArgs& a) {
  auto pred = ordcp::io::load_predictor(a.model);
  auto data = load_data(a.data);
  if (data.num_classes() != pred.num_classes) {
    throw std::invalid_argument("model has K = " + std::to_string(pred.num_classes) +
                                " but data has K = " + std::to_string(data.num_classes()));
  }
  return {std::move(pred), std::move(data)};
}

int run_predict(const Globals& g, const ModelArgs& a) {
  require_out(g);
  const auto config = echo(g, "predict", {{"model", a.model}, {"data", a.data}});
  const auto [pred, data] = load_model_and_data(a);
  ordcp::IntervalBatch batch;
  for (const auto& row : data.rows()) batch.push_back(ordcp::apply_predictor(pred, row));
  ordcp::io::write_text_file(g.out, ordcp::io::intervals_to_csv(batch, config));
  info(g, "wrote " + std::to_string(batch.size()) + " intervals to " + g.out);
  return 0;
}

int run_evaluate(const Globals& g, const ModelArgs& a) {
  const auto config = echo(g, "evaluate", {{"model", a.model}, {"data", a.data}});
  const auto [pred, data] = load_model_and_data(a);
  const auto m = ordcp::evaluate_predictor(pred, data);
  info(g, "coverage: " + ordcp::io::format_double(m.coverage));
  info(g, "avg_set_size: " + ordcp::io::format_double(m.avg_set_size));
  if (!g.out.empty()) ordcp::io::write_text_file(g.out, ordcp::io::metrics_to_csv(m, config));
  return 0;
}

void print_table(const Globals& g, const ordcp::TrialReport& report) {
  if (g.quiet) return;
  std::printf("%-12s %-22s %-22s %s\n", "method", "coverage", "avg_set_size", "runtime_ms");
  for (const auto& a : report.aggregates) {
    const std::string name(ordcp::method_name(a.method));
    std::printf("%-12s %.4f +/- %-11.4f %.3f +/- %-11.3f %.3f\n", name.c_str(), a.coverage_mean,
                a.coverage_std, a.avg_set_size_mean, a.avg_set_size_std, a.runtime_ms_mean);
  }
}

int run_compare(const Globals& g, const CompareArgs& a) {
  check_alpha(a.alpha);
  if (!(a.lambda >= 0.0)) throw UsageError("--lambda must be >= 0");
  if (a.trials < 1) throw UsageError("--trials must be >= 1");
  const auto config = echo(g, "compare",
                           {{"data", a.data},
                            {"alpha", a.alpha},
                            {"lambda", a.lambda},
                            {"trials", a.trials},
                            {"timing", !a.no_timing}});
  const auto data = load_data(a.data);
  const Method methods[] = {Method::kNaiveCdf, Method::kOrdinalAps, Method::kMinCps,
                            Method::kMinRcps};
  ordcp::TrialOptions opts;
  opts.record_timing = !a.no_timing;
  const auto report = ordcp::run_trials(data, methods, a.alpha, a.lambda, a.trials, g.seed, opts);
  print_table(g, report);
  if (!g.out.empty()) {
    ordcp::io::write_report(report, g.out, ordcp::io::report_format_for(g.out), config);
  }
  return 0;
}

int run_curve(const Globals& g, const CurveArgs& a) {
  require_out(g);
  if (a.points < 1) throw UsageError("--points must be >= 1");
  if (!(a.tau_min > 0.0 && a.tau_min <= a.tau_max && a.tau_max <= 1.0)) {
    throw UsageError("need 0 < --tau-min <= --tau-max <= 1");
  }
  if (a.points > 1 && a.tau_min == a.tau_max) {
    throw UsageError("--tau-min equals --tau-max with more than one point");
  }
  if (!(a.lambda >= 0.0)) throw UsageError("--lambda must be >= 0");
  const auto config = echo(g, "curve",
                           {{"data", a.data},
                            {"lambda", a.lambda},
                            {"tau_min", a.tau_min},
                            {"tau_max", a.tau_max},
                            {"points", a.points}});
  const auto data = load_data(a.data);
  const auto grid = ordcp::linear_tau_grid(a.tau_min, a.tau_max, a.points);
  const auto curve = ordcp::tau_curve(data, grid, a.lambda);
  ordcp::io::write_text_file(g.out, ordcp::io::curve_to_csv(curve, config));
  return 0;
}

int run_sweep(const Globals& g, const SweepArgs& a) {
  require_out(g);
  check_alpha(a.alpha);
  if (a.trials < 1) throw UsageError("--trials must be >= 1");
  if (a.lambdas.empty()) throw UsageError("--lambdas must not be empty");
  for (double l : a.lambdas) {
    if (!(l >= 0.0)) throw UsageError("--lambdas values must be >= 0");
  }
  const auto config = echo(g, "sweep",
                           {{"data", a.data},
                            {"alpha", a.alpha},
                            {"lambdas", a.lambdas},
                            {"trials", a.trials},
                            {"timing", !a.no_timing}});
  const auto data = load_data(a.data);
  ordcp::TrialOptions opts;
  opts.record_timing = !a.no_timing;
  const auto sweep = ordcp::lambda_sweep(data, a.alpha, a.lambdas, a.trials, g.seed, opts);
  ordcp::io::write_text_file(g.out, ordcp::io::sweep_to_csv(sweep, config));
  if (!g.quiet) {
    for (const auto& p : sweep) {
      std::printf("lambda %-8g coverage %.4f  avg_set_size %.3f\n", p.lambda, p.coverage,
                  p.avg_set_size);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum-length conformal prediction intervals for ordinal classification"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_flag("--quiet", g.quiet, "Suppress informational output");
  app.add_option("--out", g.out, "Output path");

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a synthetic ordinal dataset");
  generate->add_option("--k", gen.k, "Number of classes")->required();
  generate->add_option("--n", gen.n, "Number of rows")->required();
  generate->add_option("--sigma-min", gen.sigma_min)->capture_default_str();
  generate->add_option("--sigma-max", gen.sigma_max)->capture_default_str();
  generate->add_option("--miscal-temp", gen.miscal_temp)->capture_default_str();

  CalibrateArgs cal;
  auto* calibrate = app.add_subcommand("calibrate", "Calibrate a predictor on a dataset");
  calibrate->add_option("--data", cal.data)->required();
  calibrate->add_option("--alpha", cal.alpha)->capture_default_str();
  calibrate->add_option("--method", cal.method, "min-cps, min-rcps, ordinal-aps or naive-cdf")
      ->capture_default_str();
  calibrate->add_option("--lambda", cal.lambda, "Length penalty (min-rcps only, default 0.003)");
  calibrate->add_flag("--exact", cal.exact, "Closed-form calibration via critical scores");

  ModelArgs pred_args;
  auto* predict = app.add_subcommand("predict", "Write prediction intervals for a dataset");
  predict->add_option("--model", pred_args.model)->required();
  predict->add_option("--data", pred_args.data)->required();

  ModelArgs eval_args;
  auto* evaluate = app.add_subcommand("evaluate", "Coverage and set size on a dataset");
  evaluate->add_option("--model", eval_args.model)->required();
  evaluate->add_option("--data", eval_args.data)->required();

  CompareArgs cmp;
  auto* compare = app.add_subcommand("compare", "Repeated-split comparison of all methods");
  compare->add_option("--data", cmp.data)->required();
  compare->add_option("--alpha", cmp.alpha)->capture_default_str();
  compare->add_option("--lambda", cmp.lambda)->capture_default_str();
  compare->add_option("--trials", cmp.trials)->capture_default_str();
  compare->add_flag("--no-timing", cmp.no_timing, "Record runtime_ms as 0");

  CurveArgs crv;
  auto* curve = app.add_subcommand("curve", "Empirical coverage over a threshold grid");
  curve->add_option("--data", crv.data)->required();
  curve->add_option("--lambda", crv.lambda)->capture_default_str();
  curve->add_option("--tau-min", crv.tau_min)->capture_default_str();
  curve->add_option("--tau-max", crv.tau_max)->capture_default_str();
  curve->add_option("--points", crv.points)->capture_default_str();

  SweepArgs swp;
  auto* sweep = app.add_subcommand("sweep", "min-rcps over a grid of length penalties");
  sweep->add_option("--data", swp.data)->required();
  sweep->add_option("--alpha", swp.alpha)->capture_default_str();
  sweep->add_option("--lambdas", swp.lambdas)->delimiter(',')->capture_default_str();
  sweep->add_option("--trials", swp.trials)->capture_default_str();
  sweep->add_flag("--no-timing", swp.no_timing, "Record runtime_ms as 0");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "ERROR: " << e.what() << '\n';
    return e.get_exit_code() != 0 ? e.get_exit_code() : 2;
  }

  try {
    if (*generate) return run_generate(g, gen);
    if (*calibrate) return run_calibrate(g, cal);
    if (*predict) return run_predict(g, pred_args);
    if (*evaluate) return run_evaluate(g, eval_args);
    if (*compare) return run_compare(g, cmp);
    if (*curve) return run_curve(g, crv);
    if (*sweep) return run_sweep(g, swp);
  } catch (const UsageError& e) {
    std::cerr << "ERROR: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "ERROR: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
