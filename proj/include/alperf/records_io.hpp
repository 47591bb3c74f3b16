#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "alperf/harness.hpp"
#include "alperf/summary.hpp"

namespace alperf {

/// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raw CSV file is structurally invalid.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kRecordsCsvHeader =
    "scenario,repetition,sampler,budget,estimator,estimate_mean,estimate_median,estimate_q25,estimate_q75,"
    "true_baseline,wall_ms";

/// Fixed-point text with six fractional digits; throws std::domain_error for NaN/Inf.
std::string format_fixed6(double value);
/// The value a number takes after a trip through the CSV: parse(format_fixed6(v)).
double csv_quantize(double value);

void write_records_csv(const std::vector<RunRecord>& records, std::ostream& out);
void write_records_csv(const std::vector<RunRecord>& records, const std::filesystem::path& path);
std::vector<RunRecord> read_records_csv(std::istream& in);
std::vector<RunRecord> read_records_csv(const std::filesystem::path& path);

/// Statistics of one (scenario, sampler, budget, estimator) cell, over the
/// per-repetition estimate means and true baselines.
struct GroupSummary {
  std::string scenario;
  std::string sampler;
  std::size_t budget = 0;
  std::string estimator;
  BoxplotStats estimate;
  BoxplotStats true_baseline;
};

/// Groups in first-appearance order. Values are quantized as in the CSV, so
/// the result is identical whether computed from memory or from the file.
std::vector<GroupSummary> group_records(const std::vector<RunRecord>& records);

/// Extra top-level fields for the summary document (config echo, seed, ...).
struct SummaryMetadata {
  std::optional<nlohmann::ordered_json> config;
  std::vector<std::string> defaults_applied;
  std::optional<std::uint64_t> seed;
  std::string source;
};

nlohmann::ordered_json summary_to_json(const std::vector<GroupSummary>& groups, const SummaryMetadata& meta);
void write_summary_json(const std::vector<GroupSummary>& groups, const SummaryMetadata& meta,
                        const std::filesystem::path& path);

std::string tool_version();

}  // namespace alperf
