#pragma once

// Text formats: dataset CSV, predictor JSON, trial reports (JSON and CSV),
// and the curve / sweep / interval CSVs written by the CLI.
//
// All output is UTF-8 with LF line endings and '.' decimals regardless of
// locale. Doubles are written as the shortest decimal that parses back to
// the same bits.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "ordcp/calibrate.hpp"
#include "ordcp/core.hpp"
#include "ordcp/harness.hpp"

namespace ordcp::io {

inline constexpr int kFormatVersion = 1;

struct DatasetFileSpec {
  std::filesystem::path path;
  /// When set, the file must have exactly K + 1 columns.
  std::optional<Label> expected_classes;
  /// nullopt: a first line whose first field is not a number is the header.
  std::optional<bool> has_header;
};

/// Rows `p_1,...,p_K,label`; lines starting with '#' are comments. Throws
/// FormatError naming the 1-based data row and the reason.
Dataset load_dataset_csv(const DatasetFileSpec& spec);
Dataset parse_dataset_csv(std::string_view text, std::optional<Label> expected_classes = {},
                          std::optional<bool> has_header = {});

/// Header row plus one line per row. config_json, when non-empty, becomes a
/// leading `# config: ...` line.
std::string dataset_to_csv(const Dataset& d, std::string_view config_json = {});
void save_dataset_csv(const Dataset& d, const std::filesystem::path& path,
                      std::string_view config_json = {});

std::string predictor_to_json(const CalibratedPredictor& pred);
/// Throws FormatError on an unknown format_version or a schema violation.
CalibratedPredictor predictor_from_json(std::string_view text);
void save_predictor(const CalibratedPredictor& pred, const std::filesystem::path& path);
CalibratedPredictor load_predictor(const std::filesystem::path& path);

enum class ReportFormat { kJson, kCsv };

/// `.json` selects JSON, anything else CSV.
ReportFormat report_format_for(const std::filesystem::path& path);

std::string report_to_json(const TrialReport& report);
/// One row per record: trial_id,seed,method,alpha,lambda,coverage,avg_set_size,runtime_ms.
std::string report_to_csv(const TrialReport& report, std::string_view config_json = {});
TrialReport report_from_json(std::string_view text);
/// Aggregates are recomputed from the records.
TrialReport report_from_csv(std::string_view text);
void write_report(const TrialReport& report, const std::filesystem::path& path,
                  ReportFormat format, std::string_view config_json = {});
TrialReport load_report(const std::filesystem::path& path);

std::string curve_to_csv(std::span<const TauPoint> points, std::string_view config_json = {});
std::string sweep_to_csv(std::span<const SweepPoint> points, std::string_view config_json = {});
std::string intervals_to_csv(const IntervalBatch& intervals, std::string_view config_json = {});
std::string metrics_to_csv(const Metrics& m, std::string_view config_json = {});

std::string format_double(double v);

std::string read_text_file(const std::filesystem::path& path);
/// Throws std::runtime_error when the file cannot be written.
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace ordcp::io
