#include "seekbench/harness/metrics.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include <fmt/format.h>

#include "seekbench/core/errors.hpp"

namespace seekbench::harness {

namespace fs = std::filesystem;

namespace {

// Column order of the task table, unknown ids last.
int task_rank(const std::string& id) {
  const auto& tasks = all_tasks();
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (tasks[i].id() == id) return static_cast<int>(i);
  }
  return static_cast<int>(tasks.size());
}

struct SortKey {
  std::vector<std::pair<long long, std::string>> parts;
  bool operator<(const SortKey& o) const { return parts < o.parts; }
};

SortKey sort_key(const RunRecord& r, const std::vector<GroupKey>& keys) {
  SortKey k;
  for (const auto key : keys) {
    switch (key) {
      case GroupKey::task: k.parts.push_back({task_rank(r.task), r.task}); break;
      case GroupKey::method: k.parts.push_back({0, r.method}); break;
      case GroupKey::step_budget: k.parts.push_back({r.step_budget, {}}); break;
      case GroupKey::max_attempts: k.parts.push_back({r.max_attempts, {}}); break;
    }
  }
  return k;
}

std::vector<std::string> group_values(const RunRecord& r, const std::vector<GroupKey>& keys) {
  std::vector<std::string> out;
  for (const auto key : keys) {
    switch (key) {
      case GroupKey::task: out.push_back(r.task); break;
      case GroupKey::method: out.push_back(r.method); break;
      case GroupKey::step_budget: out.push_back(std::to_string(r.step_budget)); break;
      case GroupKey::max_attempts: out.push_back(std::to_string(r.max_attempts)); break;
    }
  }
  return out;
}

}  // namespace

Axis parse_axis(std::string_view name) {
  if (name == "steps") return Axis::steps;
  if (name == "attempts") return Axis::attempts;
  throw UsageError(fmt::format("unknown curve axis '{}' (expected steps or attempts)", name));
}

std::string_view to_string(Axis a) { return a == Axis::steps ? "steps" : "attempts"; }

std::string format_rate(double rate) { return fmt::format("{:.1f}", rate); }

RateTable success_rate(const std::vector<RunRecord>& records, const std::vector<GroupKey>& keys) {
  RateTable table;
  table.keys = keys;
  std::map<SortKey, RateRow> groups;
  for (const auto& r : records) {
    auto& row = groups[sort_key(r, keys)];
    if (row.trials == 0) row.group = group_values(r, keys);
    ++row.trials;
    if (r.errored) {
      ++row.errored;
    } else if (r.success) {
      ++row.successes;
    } else {
      ++row.failures;
    }
  }
  for (auto& [_, row] : groups) {
    const int valid = row.trials - row.errored;
    if (valid == 0) {
      std::string name;
      for (const auto& g : row.group) name += (name.empty() ? "" : ", ") + g;
      table.warnings.push_back(fmt::format("group ({}) omitted: all {} trials errored", name, row.trials));
      continue;
    }
    row.rate = 100.0 * row.successes / valid;
    row.flagged = 2 * row.errored >= row.trials;
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<CurvePoint> curve(const std::vector<RunRecord>& records, Axis axis, const std::vector<int>& budgets) {
  const auto table = success_rate(records, {GroupKey::task, GroupKey::method,
                                            axis == Axis::steps ? GroupKey::step_budget : GroupKey::max_attempts});
  std::map<std::pair<int, std::string>, std::string> series;  // (task rank, method) -> task
  std::map<std::tuple<std::string, std::string, int>, int> trials;
  for (const auto& r : records) {
    const int budget = axis == Axis::steps ? r.step_budget : r.max_attempts;
    if (axis == Axis::attempts && budget == 0) continue;
    series[{task_rank(r.task), r.method}] = r.task;
    ++trials[{r.task, r.method, budget}];
  }
  std::vector<CurvePoint> out;
  for (const auto& [key, task] : series) {
    const auto& method = key.second;
    for (const int b : budgets) {
      CurvePoint p{task, method, b, std::nullopt, 0};
      if (auto it = trials.find({task, method, b}); it != trials.end()) p.trials = it->second;
      for (const auto& row : table.rows) {
        if (row.group[0] == task && row.group[1] == method && row.group[2] == std::to_string(b)) p.rate = row.rate;
      }
      out.push_back(p);
    }
  }
  return out;
}

std::string metrics_csv(const std::vector<RunRecord>& records) {
  const auto table =
      success_rate(records, {GroupKey::task, GroupKey::method, GroupKey::step_budget, GroupKey::max_attempts});
  std::string out = "task,method,step_budget,max_attempts,trials,successes,failures,errored,rate,flagged\n";
  for (const auto& row : table.rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", row.group[0], row.group[1], row.group[2], row.group[3],
                       row.trials, row.successes, row.failures, row.errored, format_rate(row.rate),
                       row.flagged ? 1 : 0);
  }
  return out;
}

std::string curves_csv(const std::vector<RunRecord>& records) {
  std::string out = "axis,task,method,budget,trials,rate\n";
  for (const auto axis : {Axis::steps, Axis::attempts}) {
    std::set<int> values;
    for (const auto& r : records) {
      const int v = axis == Axis::steps ? r.step_budget : r.max_attempts;
      if (v > 0) values.insert(v);
    }
    for (const auto& p : curve(records, axis, {values.begin(), values.end()})) {
      if (p.trials == 0) continue;
      out += fmt::format("{},{},{},{},{},{}\n", to_string(axis), p.task, p.method, p.budget, p.trials,
                         p.rate ? format_rate(*p.rate) : "");
    }
  }
  return out;
}

ReportFiles write_report(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw UsageError("no such directory: " + dir.string());
  const auto records = load_records(dir);
  if (records.empty()) throw UsageError("no run records in " + dir.string());
  ReportFiles files{dir / "metrics.csv", dir / "curves.csv", dir / "report.json", {}};
  files.table = success_rate(records, {GroupKey::task, GroupKey::method, GroupKey::step_budget, GroupKey::max_attempts});
  const std::string metrics = metrics_csv(records);
  const std::string curves = curves_csv(records);
  std::ofstream(files.metrics, std::ios::binary | std::ios::trunc) << metrics;
  std::ofstream(files.curves, std::ios::binary | std::ios::trunc) << curves;

  nlohmann::ordered_json summary;
  summary["records"] = records.size();
  summary["rows"] = nlohmann::json::array();
  for (const auto& row : files.table.rows) {
    summary["rows"].push_back({{"task", row.group[0]},
                               {"method", row.group[1]},
                               {"step_budget", std::stoi(row.group[2])},
                               {"max_attempts", std::stoi(row.group[3])},
                               {"trials", row.trials},
                               {"successes", row.successes},
                               {"failures", row.failures},
                               {"errored", row.errored},
                               {"rate", row.rate},
                               {"flagged", row.flagged}});
  }
  std::map<std::string, int> categories;
  for (const auto& r : records) {
    if (r.failure_category) ++categories[std::string(to_string(*r.failure_category))];
  }
  summary["failure_categories"] = categories;
  summary["warnings"] = files.table.warnings;
  std::ofstream(files.summary, std::ios::binary | std::ios::trunc) << summary.dump(2) << '\n';
  return files;
}

}  // namespace seekbench::harness
