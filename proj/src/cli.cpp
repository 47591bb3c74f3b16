#include "alperf/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "alperf/config.hpp"
#include "alperf/harness.hpp"
#include "alperf/records_io.hpp"
#include "alperf/svg.hpp"

namespace alperf {

namespace {

namespace fs = std::filesystem;

std::string read_text(const fs::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open '" + path.string() + "' for writing");
  file << text;
  if (!file.flush()) throw IoError("failed writing '" + path.string() + "'");
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");
}

struct RunArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
};

int command_run(const RunArgs& args, std::ostream& out) {
  ParsedConfig parsed = parse_config(read_text(args.config));
  if (args.seed) parsed.spec.master_seed = *args.seed;
  ExperimentSpec& spec = parsed.spec;

  const auto records = run_experiment(spec, RunOptions{args.workers});
  const auto groups = group_records(records);

  const fs::path dir(args.out);
  ensure_directory(dir);
  write_records_csv(records, dir / "raw.csv");
  SummaryMetadata meta;
  meta.config = spec_to_json(spec);
  meta.defaults_applied = parsed.defaults_applied;
  meta.seed = spec.master_seed;
  meta.source = "raw.csv";
  write_summary_json(groups, meta, dir / "summary.json");
  write_text(dir / "boxplots.svg", render_boxplots_svg(groups));

  out << "scenario " << to_string(spec.scenario) << ": " << records.size() << " records, " << groups.size()
      << " groups -> " << dir.string() << '\n';
  return kExitOk;
}

int command_report(const std::string& csv, const std::string& target, std::ostream& out) {
  const auto groups = group_records(read_records_csv(fs::path(csv)));
  SummaryMetadata meta;
  meta.source = fs::path(csv).filename().string();
  write_summary_json(groups, meta, target);
  out << groups.size() << " groups -> " << target << '\n';
  return kExitOk;
}

int command_plot(const std::string& csv, const std::string& target, std::ostream& out) {
  const auto groups = group_records(read_records_csv(fs::path(csv)));
  if (groups.empty()) throw std::invalid_argument("plot: '" + csv + "' holds no records");
  write_text(target, render_boxplots_svg(groups));
  out << "figure -> " << target << '\n';
  return kExitOk;
}

int command_scenarios(const std::string& show, std::ostream& out) {
  if (!show.empty()) {
    out << spec_to_json(builtin_spec(show)).dump(2) << '\n';
    return kExitOk;
  }
  for (const auto& name : builtin_names()) {
    out << name << "  " << to_string(builtin_spec(name).scenario) << "  " << builtin_description(name) << '\n';
  }
  return kExitOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Runtime performance estimators for active learning on synthetic tasks", "alperf"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "run an experiment configuration");
  run->add_option("--config", run_args.config, "experiment configuration (JSON)")->required();
  run->add_option("--out", run_args.out, "output directory")->required();
  run->add_option("--seed", run_args.seed, "override master_seed");
  run->add_option("--workers", run_args.workers, "worker threads")->check(CLI::PositiveNumber);

  std::string report_csv;
  std::string report_out;
  auto* report = app.add_subcommand("report", "summarize a raw records CSV to JSON");
  report->add_option("raw", report_csv, "raw records CSV")->required();
  report->add_option("--out", report_out, "summary JSON path")->required();

  std::string plot_csv;
  std::string plot_out;
  auto* plot = app.add_subcommand("plot", "render boxplots of a raw records CSV as SVG");
  plot->add_option("raw", plot_csv, "raw records CSV")->required();
  plot->add_option("--out", plot_out, "SVG path")->required();

  std::string show;
  auto* scenarios = app.add_subcommand("scenarios", "list built-in replication scenarios");
  scenarios->add_option("--show", show, "print the configuration of one built-in")
      ->check(CLI::IsMember(builtin_names()));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitValidation;
  }

  try {
    if (run->parsed()) return command_run(run_args, out);
    if (report->parsed()) return command_report(report_csv, report_out, out);
    if (plot->parsed()) return command_plot(plot_csv, plot_out, out);
    if (scenarios->parsed()) return command_scenarios(show, out);
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace alperf
