#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "seekbench/core/errors.hpp"
#include "seekbench/harness/experiment.hpp"
#include "seekbench/harness/metrics.hpp"
#include "seekbench/harness/replay.hpp"

namespace fs = std::filesystem;
using namespace seekbench;

namespace {

void print_table(const harness::RateTable& table) {
  fmt::print("{:<26} {:<22} {:>6} {:>6} {:>7} {:>7} {:>7}\n", "task", "method", "K_max", "N_max", "trials", "errored",
             "rate");
  for (const auto& row : table.rows) {
    fmt::print("{:<26} {:<22} {:>6} {:>6} {:>7} {:>7} {:>7}{}\n", row.group[0], row.group[1], row.group[2],
               row.group[3] == "0" ? "-" : row.group[3], row.trials, row.errored, harness::format_rate(row.rate),
               row.flagged ? "  [flagged: errors]" : "");
  }
  for (const auto& w : table.warnings) fmt::print(stderr, "warning: {}\n", w);
}

int cmd_run(const std::string& config_path, const std::string& output, bool fresh, bool quiet) {
  auto config = harness::ExperimentConfig::load(config_path);
  if (!output.empty()) config.output_dir = output;
  const auto total = harness::plan_trials(config).size();
  std::size_t done = 0;
  harness::RunOptions options;
  options.resume = !fresh;
  options.on_record = [&](const harness::RunRecord& r) {
    ++done;
    if (!quiet) {
      fmt::print(stderr, "[{}/{}] {} {}{}\n", done, total, r.id, r.errored ? "errored" : (r.success ? "ok" : "fail"),
                 r.errored ? ": " + r.error : "");
    }
  };
  const auto records = harness::run_experiment(config, options);
  const auto files = harness::write_report(config.output_dir);
  print_table(files.table);
  fmt::print("{} records in {}\n", records.size(), config.output_dir.string());
  return 0;
}

int cmd_report(const std::string& dir, bool as_json) {
  const auto files = harness::write_report(dir);
  if (as_json) {
    std::ifstream in(files.summary);
    std::cout << in.rdbuf();
  } else {
    print_table(files.table);
    fmt::print("wrote {}, {}, {}\n", files.metrics.string(), files.curves.string(), files.summary.string());
  }
  return 0;
}

int cmd_replay(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::cout << harness::replay_transcript(buf.str());
  return 0;
}

int cmd_validate(const std::string& config_path) {
  const auto config = harness::ExperimentConfig::load(config_path);
  fmt::print("ok: {} tasks x {} methods, {} trials\n", config.expanded_tasks().size(), config.methods.size(),
             harness::plan_trials(config).size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seekbench: partially observable text tasks and planning-agent harness"};
  app.require_subcommand(1);

  std::string config_path, output, dir, transcript;
  bool fresh = false, quiet = false, as_json = false;

  auto* run = app.add_subcommand("run", "Run an experiment and write records, transcripts and metrics");
  run->add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--output", output, "Override the output directory");
  run->add_flag("--fresh", fresh, "Discard existing records instead of resuming");
  run->add_flag("-q,--quiet", quiet, "No per-trial progress");

  auto* report = app.add_subcommand("report", "Recompute metrics.csv, curves.csv and report.json");
  report->add_option("dir", dir, "Experiment output directory")->required();
  report->add_flag("--json", as_json, "Print report.json instead of the table");

  auto* replay = app.add_subcommand("replay", "Pretty-print a transcript file");
  replay->add_option("transcript", transcript, "transcripts/<id>.jsonl")->required();

  auto* validate = app.add_subcommand("validate", "Check an experiment config without running it");
  validate->add_option("config", config_path, "Experiment config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*run) return cmd_run(config_path, output, fresh, quiet);
    if (*report) return cmd_report(dir, as_json);
    if (*replay) return cmd_replay(transcript);
    if (*validate) return cmd_validate(config_path);
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 2;
}
