#include "alperf/records_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

namespace alperf {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

double parse_double(const std::string& text, std::size_t line, const char* column) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value))
    throw FormatError("records CSV line " + std::to_string(line) + ": bad " + column + " '" + text + "'");
  return value;
}

std::size_t parse_size(const std::string& text, std::size_t line, const char* column) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw FormatError("records CSV line " + std::to_string(line) + ": bad " + column + " '" + text + "'");
  return value;
}

void check_label(const std::string& text) {
  if (text.find_first_of(",\n\r\"") != std::string::npos)
    throw std::invalid_argument("records CSV: label '" + text + "' contains a reserved character");
}

nlohmann::ordered_json stats_to_json(const BoxplotStats& s) {
  for (double v : {s.mean, s.median, s.q25, s.q75, s.whisker_low, s.whisker_high})
    if (!std::isfinite(v)) throw std::domain_error("summary: refusing to write a non-finite statistic");
  return {{"mean", s.mean},       {"median", s.median},           {"q25", s.q25},
          {"q75", s.q75},         {"whisker_low", s.whisker_low}, {"whisker_high", s.whisker_high},
          {"n", s.n}};
}

}  // namespace

std::string tool_version() { return "1.0.0"; }

std::string format_fixed6(double value) {
  if (!std::isfinite(value)) throw std::domain_error("refusing to serialize a non-finite value");
  char buffer[64];
  const int written = std::snprintf(buffer, sizeof buffer, "%.6f", value);
  std::string out(buffer, static_cast<std::size_t>(written));
  if (out == "-0.000000") out = "0.000000";
  return out;
}

double csv_quantize(double value) {
  const std::string text = format_fixed6(value);
  double parsed = 0.0;
  std::from_chars(text.data(), text.data() + text.size(), parsed);
  return parsed;
}

void write_records_csv(const std::vector<RunRecord>& records, std::ostream& out) {
  out << kRecordsCsvHeader << '\n';
  for (const auto& r : records) {
    check_label(r.scenario);
    check_label(r.sampler);
    check_label(r.estimator);
    out << r.scenario << ',' << r.repetition << ',' << r.sampler << ',' << r.budget << ',' << r.estimator << ','
        << format_fixed6(r.estimate.mean) << ',' << format_fixed6(r.estimate.median) << ','
        << format_fixed6(r.estimate.q25) << ',' << format_fixed6(r.estimate.q75) << ','
        << format_fixed6(r.true_baseline) << ',' << format_fixed6(r.wall_ms) << '\n';
  }
}

void write_records_csv(const std::vector<RunRecord>& records, const std::filesystem::path& path) {
  // Format into memory first so a NaN aborts before the file is touched.
  std::ostringstream buffer;
  write_records_csv(records, buffer);
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open '" + path.string() + "' for writing");
  file << buffer.str();
  if (!file.flush()) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<RunRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("records CSV: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kRecordsCsvHeader) throw FormatError("records CSV: unexpected header '" + line + "'");

  std::vector<RunRecord> records;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 11)
      throw FormatError("records CSV line " + std::to_string(line_number) + ": expected 11 fields, found " +
                        std::to_string(f.size()));
    RunRecord r;
    r.scenario = f[0];
    r.repetition = parse_size(f[1], line_number, "repetition");
    r.sampler = f[2];
    r.budget = parse_size(f[3], line_number, "budget");
    r.estimator = f[4];
    r.estimate.mean = parse_double(f[5], line_number, "estimate_mean");
    r.estimate.median = parse_double(f[6], line_number, "estimate_median");
    r.estimate.q25 = parse_double(f[7], line_number, "estimate_q25");
    r.estimate.q75 = parse_double(f[8], line_number, "estimate_q75");
    r.true_baseline = parse_double(f[9], line_number, "true_baseline");
    r.wall_ms = parse_double(f[10], line_number, "wall_ms");
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<RunRecord> read_records_csv(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open '" + path.string() + "' for reading");
  return read_records_csv(file);
}

std::vector<GroupSummary> group_records(const std::vector<RunRecord>& records) {
  using Key = std::tuple<std::string, std::string, std::size_t, std::string>;
  std::map<Key, std::size_t> slot;
  std::vector<Key> order;
  std::vector<std::vector<double>> estimates;
  std::vector<std::vector<double>> baselines;
  for (const auto& r : records) {
    Key key{r.scenario, r.sampler, r.budget, r.estimator};
    auto [it, inserted] = slot.try_emplace(key, order.size());
    if (inserted) {
      order.push_back(key);
      estimates.emplace_back();
      baselines.emplace_back();
    }
    estimates[it->second].push_back(csv_quantize(r.estimate.mean));
    baselines[it->second].push_back(csv_quantize(r.true_baseline));
  }

  std::vector<GroupSummary> groups;
  for (std::size_t i = 0; i < order.size(); ++i) {
    GroupSummary g;
    std::tie(g.scenario, g.sampler, g.budget, g.estimator) = order[i];
    g.estimate = summarize(estimates[i]);
    g.true_baseline = summarize(baselines[i]);
    groups.push_back(std::move(g));
  }
  return groups;
}

nlohmann::ordered_json summary_to_json(const std::vector<GroupSummary>& groups, const SummaryMetadata& meta) {
  nlohmann::ordered_json doc;
  doc["tool"] = "alperf";
  doc["version"] = tool_version();
  if (!meta.source.empty()) doc["source"] = meta.source;
  if (meta.seed) doc["seed"] = *meta.seed;
  if (meta.config) doc["config"] = *meta.config;
  if (meta.config) doc["defaults_applied"] = meta.defaults_applied;
  doc["groups"] = nlohmann::ordered_json::array();
  for (const auto& g : groups) {
    doc["groups"].push_back({{"scenario", g.scenario},
                             {"sampler", g.sampler},
                             {"budget", g.budget},
                             {"estimator", g.estimator},
                             {"estimate", stats_to_json(g.estimate)},
                             {"true_baseline", stats_to_json(g.true_baseline)}});
  }
  return doc;
}

void write_summary_json(const std::vector<GroupSummary>& groups, const SummaryMetadata& meta,
                        const std::filesystem::path& path) {
  const std::string text = summary_to_json(groups, meta).dump(2) + "\n";
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open '" + path.string() + "' for writing");
  file << text;
  if (!file.flush()) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace alperf
