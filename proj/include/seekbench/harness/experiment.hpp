#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "seekbench/agent/backend.hpp"
#include "seekbench/agent/loop.hpp"
#include "seekbench/core/task_spec.hpp"
#include "seekbench/policies/policies.hpp"

namespace seekbench::harness {

enum class MethodKind { agent, policy };
enum class BackendKind { scripted, chat, rule };

std::string_view to_string(BackendKind b);

/// One column of the method grid.
///
/// JSON: {"id", "kind": "agent"|"policy", "policy": "naive"|"seeker",
///        "agent": {AgentConfig}, "backend": "scripted"|"chat"|"rule",
///        "script": [replies], "chat": {ChatConfig}, "rule": "naive"|"seeker",
///        "prompts_dir": path}
struct MethodSpec {
  std::string id;
  MethodKind kind = MethodKind::agent;
  policies::Kind policy = policies::Kind::seeker;  // policy runs and the rule backend
  agent::AgentConfig agent;
  BackendKind backend = BackendKind::scripted;
  std::vector<std::string> script;
  std::optional<agent::ChatConfig> chat;
  std::string prompts_dir;

  nlohmann::ordered_json to_json() const;
};

enum class FailureCategory { information_seeking, information_extraction, instruction_understanding, long_horizon };

std::string_view to_string(FailureCategory c);
std::optional<FailureCategory> parse_failure_category(std::string_view name);

/// Experiment file, JSON:
/// {"tasks": ["arm/perturbed", "nav/*", "*/basic", "all"], "methods": [...],
///  "trials_per_cell": 50, "base_seed": 0, "step_budget": 100,
///  "budget_sweep": [10, 25], "attempt_sweep": [5, 10], "output_dir": "out",
///  "parallelism": 1, "wall_clock_ms": 60000, "classify_failures": false,
///  "task_params": {"arm/perturbed": {...}}}
struct ExperimentConfig {
  std::vector<std::string> tasks;
  std::vector<MethodSpec> methods;
  int trials_per_cell = 50;
  std::uint64_t base_seed = 0;
  int step_budget = 100;
  std::optional<std::vector<int>> budget_sweep;
  std::optional<std::vector<int>> attempt_sweep;
  std::filesystem::path output_dir = "results";
  int parallelism = 1;
  std::optional<int> wall_clock_ms;
  bool classify_failures = false;
  nlohmann::json task_params = nlohmann::json::object();

  /// Relative output_dir and prompts_dir are resolved against `base_dir`.
  /// Throws UsageError on schema violations.
  static ExperimentConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
  static ExperimentConfig load(const std::filesystem::path& file);
  void validate() const;
  nlohmann::ordered_json to_json() const;

  /// Task patterns expanded against the eleven tasks, in column order.
  std::vector<TaskSpec> expanded_tasks() const;
  std::vector<int> budgets() const;
  /// N_max values for agent methods; policies run once per budget.
  std::vector<int> attempt_values(const MethodSpec& m) const;
};

struct AttemptRecord {
  int attempt = 0;
  int seek_steps = 0;
  int plan_steps = 0;
  int plan_length = 0;
  std::string information;
};

struct RunRecord {
  std::string id;
  std::string task;
  std::string method;
  std::uint64_t seed = 0;
  int trial = 0;
  int step_budget = 100;
  int max_attempts = 0;  // 0 for policy runs
  bool success = false;
  bool errored = false;
  std::string error;
  bool deadline_hit = false;
  int steps_used = 0;
  int attempts_used = 0;
  double wall_ms = 0.0;
  std::vector<AttemptRecord> attempts;
  std::optional<FailureCategory> failure_category;
  bool classification_flagged = false;
  std::string transcript_path;  // relative to the output dir
  std::string log_path;
  nlohmann::json backend_info;

  nlohmann::ordered_json to_json() const;
  static RunRecord from_json(const nlohmann::json& j);
};

/// Reads records.jsonl; missing file gives an empty list.
std::vector<RunRecord> load_records(const std::filesystem::path& dir);

/// One planned trial.
struct TrialPlan {
  TaskSpec task;  // seed and budget already applied
  const MethodSpec* method = nullptr;
  int trial = 0;
  int max_attempts = 0;
  std::string id;
};

std::vector<TrialPlan> plan_trials(const ExperimentConfig& config);

struct RunOptions {
  bool resume = true;  // skip trials already in records.jsonl
  std::function<void(const RunRecord&)> on_record;
};

/// Runs every planned trial, appending each record to
/// <output_dir>/records.jsonl as it completes and writing
/// transcripts/<id>.jsonl and logs/<id>.jsonl. Returns all records of the
/// experiment (resumed ones included) in plan order.
std::vector<RunRecord> run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Runs one trial without touching the file system.
struct TrialResult {
  RunRecord record;
  std::string transcript_jsonl;
  std::string log_jsonl;
};
TrialResult run_trial(const ExperimentConfig& config, const TrialPlan& plan);

}  // namespace seekbench::harness
