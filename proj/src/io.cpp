#include "ordcp/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "ordcp/kernels.hpp"

namespace ordcp::io {
namespace {

using Json = nlohmann::ordered_json;

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string row_error(std::size_t row, const std::string& reason) {
  return reason + ", row " + std::to_string(row);
}

std::string config_line(std::string_view config_json) {
  if (config_json.empty()) return {};
  return "# config: " + std::string(config_json) + "\n";
}

// Iterates non-empty, non-comment lines.
template <class Fn>
void for_each_content_line(std::string_view text, Fn fn) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    if (line.empty() || line.front() == '#') continue;
    fn(line);
  }
}

template <class T>
T require_field(const Json& j, const char* key) {
  if (!j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw FormatError(std::string("field '") + key + "' has the wrong type");
  }
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

void check_version(const Json& j) {
  const auto version = require_field<int>(j, "format_version");
  if (version != kFormatVersion) {
    throw FormatError("unsupported format_version " + std::to_string(version) + " (expected " +
                      std::to_string(kFormatVersion) + ")");
  }
}

constexpr const char* kReportHeader =
    "trial_id,seed,method,alpha,lambda,coverage,avg_set_size,runtime_ms";

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

Dataset parse_dataset_csv(std::string_view text, std::optional<Label> expected_classes,
                          std::optional<bool> has_header) {
  std::vector<ProbVector> rows;
  std::vector<Label> labels;
  std::optional<std::size_t> columns;
  if (expected_classes) columns = static_cast<std::size_t>(*expected_classes) + 1;
  bool first = true;
  std::size_t row = 0;
  std::vector<double> probs;

  for_each_content_line(text, [&](std::string_view line) {
    const auto fields = split_fields(line);
    if (first) {
      first = false;
      double probe = 0.0;
      const bool header = has_header.value_or(!parse_number(fields.front(), probe));
      if (header) {
        if (columns && fields.size() != *columns) {
          throw FormatError("header has " + std::to_string(fields.size()) +
                            " columns but K + 1 = " + std::to_string(*columns));
        }
        for (std::size_t j = 0; j + 1 < fields.size(); ++j) {
          if (trim(fields[j]) != "p_" + std::to_string(j + 1)) {
            throw FormatError("unexpected header field '" + std::string(fields[j]) + "'");
          }
        }
        if (trim(fields.back()) != "label") {
          throw FormatError("last header field must be 'label'");
        }
        columns = fields.size();
        return;
      }
    }

    ++row;
    if (!columns) columns = fields.size();
    if (fields.size() != *columns || fields.size() < 2) {
      throw FormatError(row_error(row, "wrong arity: expected " + std::to_string(*columns) +
                                           " fields, got " + std::to_string(fields.size())));
    }
    probs.assign(fields.size() - 1, 0.0);
    for (std::size_t j = 0; j + 1 < fields.size(); ++j) {
      if (!parse_number(fields[j], probs[j])) {
        throw FormatError(row_error(row, "non-numeric value '" + std::string(trim(fields[j])) +
                                             "' in column " + std::to_string(j + 1)));
      }
    }
    Label y = 0;
    if (!parse_number(fields.back(), y)) {
      throw FormatError(row_error(row, "non-integer label '" + std::string(trim(fields.back())) +
                                           "'"));
    }
    if (y < 1 || static_cast<std::size_t>(y) > probs.size()) {
      throw FormatError(row_error(row, "label out of range"));
    }
    if (!kernels::all_finite_nonnegative(probs)) {
      throw FormatError(row_error(row, "negative or non-finite probability"));
    }
    const double mass = kernels::sum(probs);
    if (std::abs(mass - 1.0) > kMassTolerance) {
      char buf[32];
      const auto res = std::to_chars(buf, buf + sizeof(buf), mass, std::chars_format::general, 6);
      throw FormatError(row_error(row, "mass " + std::string(buf, res.ptr) + " outside tolerance"));
    }
    rows.emplace_back(probs);
    labels.push_back(y);
  });

  if (rows.empty()) throw FormatError("empty file: no data rows");
  return Dataset(std::move(rows), std::move(labels));
}

Dataset load_dataset_csv(const DatasetFileSpec& spec) {
  const std::string text = read_text_file(spec.path);
  try {
    return parse_dataset_csv(text, spec.expected_classes, spec.has_header);
  } catch (const FormatError& e) {
    throw FormatError(spec.path.string() + ": " + e.what());
  }
}

std::string dataset_to_csv(const Dataset& d, std::string_view config_json) {
  std::string out = config_line(config_json);
  for (Label k = 1; k <= d.num_classes(); ++k) out += "p_" + std::to_string(k) + ",";
  out += "label\n";
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (double v : d.row(i).values()) {
      out += format_double(v);
      out += ',';
    }
    out += std::to_string(d.label(i));
    out += '\n';
  }
  return out;
}

void save_dataset_csv(const Dataset& d, const std::filesystem::path& path,
                      std::string_view config_json) {
  write_text_file(path, dataset_to_csv(d, config_json));
}

std::string predictor_to_json(const CalibratedPredictor& pred) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["method"] = std::string(method_name(pred.method));
  j["K"] = pred.num_classes;
  j["alpha"] = pred.alpha;
  j["lambda"] = pred.lambda;
  j["tau_hat"] = pred.tau_hat;
  j["n_cal"] = pred.n_cal;
  j["diagnostics"] = {
      {"radial_monotone_fraction", pred.diagnostics.radial_monotone_fraction},
      {"calibration_coverage_count", pred.diagnostics.calibration_coverage_count},
      {"search_iterations", pred.diagnostics.search_iterations},
  };
  return j.dump(2) + "\n";
}

CalibratedPredictor predictor_from_json(std::string_view text) {
  const Json j = parse_json(text);
  if (!j.is_object()) throw FormatError("predictor document must be a JSON object");
  check_version(j);
  CalibratedPredictor pred;
  try {
    pred.method = parse_method(require_field<std::string>(j, "method"));
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  pred.num_classes = require_field<Label>(j, "K");
  pred.alpha = require_field<double>(j, "alpha");
  pred.lambda = require_field<double>(j, "lambda");
  pred.tau_hat = require_field<double>(j, "tau_hat");
  pred.n_cal = require_field<std::int64_t>(j, "n_cal");
  if (!j.contains("diagnostics") || !j.at("diagnostics").is_object()) {
    throw FormatError("missing object 'diagnostics'");
  }
  const Json& diag = j.at("diagnostics");
  pred.diagnostics.radial_monotone_fraction = require_field<double>(diag, "radial_monotone_fraction");
  pred.diagnostics.calibration_coverage_count =
      require_field<std::int64_t>(diag, "calibration_coverage_count");
  pred.diagnostics.search_iterations = require_field<int>(diag, "search_iterations");

  if (pred.num_classes < 1) throw FormatError("K must be >= 1");
  if (!(pred.alpha > 0.0 && pred.alpha < 1.0)) throw FormatError("alpha must lie in (0, 1)");
  if (!(pred.lambda >= 0.0) || !std::isfinite(pred.lambda)) throw FormatError("lambda must be >= 0");
  if (!(pred.tau_hat >= 0.0 && pred.tau_hat <= 1.0)) throw FormatError("tau_hat must lie in [0, 1]");
  if (pred.n_cal < 0) throw FormatError("n_cal must be >= 0");
  return pred;
}

void save_predictor(const CalibratedPredictor& pred, const std::filesystem::path& path) {
  write_text_file(path, predictor_to_json(pred));
}

CalibratedPredictor load_predictor(const std::filesystem::path& path) {
  try {
    return predictor_from_json(read_text_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

ReportFormat report_format_for(const std::filesystem::path& path) {
  return path.extension() == ".json" ? ReportFormat::kJson : ReportFormat::kCsv;
}

std::string report_to_json(const TrialReport& report) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["std_divisor"] = "n-1";
  Json records = Json::array();
  for (const auto& r : report.records) {
    records.push_back({
        {"trial_id", r.trial_id},
        {"seed", r.seed},
        {"method", std::string(method_name(r.method))},
        {"alpha", r.alpha},
        {"lambda", r.lambda},
        {"coverage", r.coverage},
        {"avg_set_size", r.avg_set_size},
        {"runtime_ms", r.runtime_ms},
    });
  }
  j["records"] = std::move(records);
  Json aggregates = Json::array();
  for (const auto& a : report.aggregates) {
    aggregates.push_back({
        {"method", std::string(method_name(a.method))},
        {"alpha", a.alpha},
        {"lambda", a.lambda},
        {"n_trials", a.n_trials},
        {"coverage_mean", a.coverage_mean},
        {"coverage_std", a.coverage_std},
        {"avg_set_size_mean", a.avg_set_size_mean},
        {"avg_set_size_std", a.avg_set_size_std},
        {"runtime_ms_mean", a.runtime_ms_mean},
    });
  }
  j["aggregates"] = std::move(aggregates);
  return j.dump(2) + "\n";
}

std::string report_to_csv(const TrialReport& report, std::string_view config_json) {
  std::string out = config_line(config_json);
  out += kReportHeader;
  out += '\n';
  for (const auto& r : report.records) {
    out += std::to_string(r.trial_id) + "," + std::to_string(r.seed) + "," +
           std::string(method_name(r.method)) + "," + format_double(r.alpha) + "," +
           format_double(r.lambda) + "," + format_double(r.coverage) + "," +
           format_double(r.avg_set_size) + "," + format_double(r.runtime_ms) + "\n";
  }
  return out;
}

TrialReport report_from_json(std::string_view text) {
  const Json j = parse_json(text);
  if (!j.is_object()) throw FormatError("report document must be a JSON object");
  check_version(j);
  TrialReport report;
  try {
    for (const auto& r : j.at("records")) {
      TrialRecord rec;
      rec.trial_id = require_field<int>(r, "trial_id");
      rec.seed = require_field<std::uint64_t>(r, "seed");
      rec.method = parse_method(require_field<std::string>(r, "method"));
      rec.alpha = require_field<double>(r, "alpha");
      rec.lambda = require_field<double>(r, "lambda");
      rec.coverage = require_field<double>(r, "coverage");
      rec.avg_set_size = require_field<double>(r, "avg_set_size");
      rec.runtime_ms = require_field<double>(r, "runtime_ms");
      report.records.push_back(rec);
    }
    for (const auto& a : j.at("aggregates")) {
      TrialAggregate agg;
      agg.method = parse_method(require_field<std::string>(a, "method"));
      agg.alpha = require_field<double>(a, "alpha");
      agg.lambda = require_field<double>(a, "lambda");
      agg.n_trials = require_field<int>(a, "n_trials");
      agg.coverage_mean = require_field<double>(a, "coverage_mean");
      agg.coverage_std = require_field<double>(a, "coverage_std");
      agg.avg_set_size_mean = require_field<double>(a, "avg_set_size_mean");
      agg.avg_set_size_std = require_field<double>(a, "avg_set_size_std");
      agg.runtime_ms_mean = require_field<double>(a, "runtime_ms_mean");
      report.aggregates.push_back(agg);
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed report: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return report;
}

TrialReport report_from_csv(std::string_view text) {
  TrialReport report;
  bool header_seen = false;
  std::size_t row = 0;
  for_each_content_line(text, [&](std::string_view line) {
    if (!header_seen) {
      if (line != kReportHeader) throw FormatError("unexpected report header");
      header_seen = true;
      return;
    }
    ++row;
    const auto f = split_fields(line);
    if (f.size() != 8) throw FormatError(row_error(row, "wrong arity"));
    TrialRecord rec;
    bool ok = parse_number(f[0], rec.trial_id) && parse_number(f[1], rec.seed) &&
              parse_number(f[3], rec.alpha) && parse_number(f[4], rec.lambda) &&
              parse_number(f[5], rec.coverage) && parse_number(f[6], rec.avg_set_size) &&
              parse_number(f[7], rec.runtime_ms);
    if (!ok) throw FormatError(row_error(row, "non-numeric field"));
    try {
      rec.method = parse_method(trim(f[2]));
    } catch (const std::invalid_argument& e) {
      throw FormatError(row_error(row, e.what()));
    }
    report.records.push_back(rec);
  });
  if (!header_seen) throw FormatError("empty report");
  report.aggregates = aggregate_records(report.records);
  return report;
}

void write_report(const TrialReport& report, const std::filesystem::path& path,
                  ReportFormat format, std::string_view config_json) {
  write_text_file(path, format == ReportFormat::kJson ? report_to_json(report)
                                                      : report_to_csv(report, config_json));
}

TrialReport load_report(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  return report_format_for(path) == ReportFormat::kJson ? report_from_json(text)
                                                        : report_from_csv(text);
}

std::string curve_to_csv(std::span<const TauPoint> points, std::string_view config_json) {
  std::string out = config_line(config_json) + "tau,F\n";
  for (const auto& p : points) out += format_double(p.tau) + "," + format_double(p.coverage) + "\n";
  return out;
}

std::string sweep_to_csv(std::span<const SweepPoint> points, std::string_view config_json) {
  std::string out = config_line(config_json) + "lambda,coverage,avg_set_size\n";
  for (const auto& p : points) {
    out += format_double(p.lambda) + "," + format_double(p.coverage) + "," +
           format_double(p.avg_set_size) + "\n";
  }
  return out;
}

std::string intervals_to_csv(const IntervalBatch& intervals, std::string_view config_json) {
  std::string out = config_line(config_json) + "lower,upper\n";
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    out += std::to_string(intervals.lower[i]) + "," + std::to_string(intervals.upper[i]) + "\n";
  }
  return out;
}

std::string metrics_to_csv(const Metrics& m, std::string_view config_json) {
  return config_line(config_json) + "coverage,avg_set_size\n" + format_double(m.coverage) + "," +
         format_double(m.avg_set_size) + "\n";
}

}  // namespace ordcp::io
