#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "seekbench/agent/backend.hpp"
#include "seekbench/agent/prompts.hpp"
#include "seekbench/core/environment.hpp"

namespace seekbench::agent {

enum class Method { infoseeker, vanilla, llm3_fs, llm3_bt, react, icl };

std::string_view to_string(Method m);
/// Throws UsageError for unknown names.
Method parse_method(std::string_view name);

struct AgentConfig {
  Method method = Method::infoseeker;
  int max_attempts = 10;  // N_max
  int step_budget = 100;  // K_max
  bool seek_enabled = true;
  bool extract_enabled = true;
  int trace_window = 5;
  bool uncertainty_prompt = false;  // prepend the uncertainty preamble to every prompt
  int react_call_limit = 0;         // model calls per react episode; 0 means 2 * K_max + 10
  std::optional<std::chrono::milliseconds> deadline;  // wall-clock limit per trial

  /// Throws UsageError on N_max < 1, K_max < 1, trace_window < 1 or a
  /// negative call limit.
  void validate() const;
  static AgentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct Exchange {
  int attempt = 0;
  std::string phase;  // seek, extract, plan, react
  std::string prompt;
  std::string response;
  bool malformed = false;
};

struct AttemptStats {
  int attempt = 0;
  int seek_steps = 0;
  int plan_steps = 0;  // executed prefix of the task plan
  int plan_length = 0;
  bool seek_malformed = false;
  bool plan_malformed = false;
  std::string information;
};

struct AgentRun {
  bool success = false;
  bool errored = false;  // transport failure: the trial does not count
  std::string error;
  bool deadline_hit = false;
  int steps_used = 0;
  int attempts_used = 0;
  std::vector<AttemptStats> attempts;
  std::vector<Exchange> exchanges;
  std::vector<HistoryItem> history;  // one item per environment step, aligned with the transcript
  nlohmann::json backend_info;
};

/// Algorithm 1: seek, extract, plan, reset the history, execute; repeated
/// until success, N_max attempts or K_max steps.
AgentRun run_infoseeker(Environment& env, const PromptSet& prompts, const AgentConfig& config, Backend& backend);

/// vanilla, llm3_fs, llm3_bt, icl and react.
AgentRun run_baseline(Environment& env, const PromptSet& prompts, const AgentConfig& config, Backend& backend);

/// Dispatches on config.method.
AgentRun run_agent(Environment& env, const PromptSet& prompts, const AgentConfig& config, Backend& backend);

}  // namespace seekbench::agent
