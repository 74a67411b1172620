#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "seekbench/harness/experiment.hpp"

namespace seekbench::harness {

enum class GroupKey { task, method, step_budget, max_attempts };
enum class Axis { steps, attempts };

/// Throws UsageError for names other than "steps" and "attempts".
Axis parse_axis(std::string_view name);
std::string_view to_string(Axis a);

struct RateRow {
  std::vector<std::string> group;  // values of the requested keys, in order
  int trials = 0;
  int successes = 0;
  int failures = 0;
  int errored = 0;
  double rate = 0.0;     // successes / (trials - errored) * 100
  bool flagged = false;  // at least half the trials errored
};

struct RateTable {
  std::vector<GroupKey> keys;
  std::vector<RateRow> rows;  // sorted by group
  std::vector<std::string> warnings;
};

/// Groups whose trials all errored are omitted with a warning.
RateTable success_rate(const std::vector<RunRecord>& records, const std::vector<GroupKey>& keys);

struct CurvePoint {
  std::string task;
  std::string method;
  int budget = 0;
  std::optional<double> rate;  // absent when every run at this budget errored
  int trials = 0;
};

/// Success rate per (task, method) at each budget value, read from the
/// records' step_budget (steps axis) or max_attempts (attempts axis).
std::vector<CurvePoint> curve(const std::vector<RunRecord>& records, Axis axis, const std::vector<int>& budgets);

std::string format_rate(double rate);

/// task,method,step_budget,max_attempts,trials,successes,failures,errored,rate,flagged
std::string metrics_csv(const std::vector<RunRecord>& records);
/// axis,task,method,budget,trials,rate
std::string curves_csv(const std::vector<RunRecord>& records);

struct ReportFiles {
  std::filesystem::path metrics;
  std::filesystem::path curves;
  std::filesystem::path summary;
  RateTable table;
};

/// Writes metrics.csv, curves.csv and report.json into `dir`. Throws
/// UsageError when the directory holds no records.
ReportFiles write_report(const std::filesystem::path& dir);

}  // namespace seekbench::harness
