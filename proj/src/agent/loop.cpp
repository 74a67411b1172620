#include "seekbench/agent/loop.hpp"

#include <array>

#include <fmt/format.h>

#include "seekbench/agent/response.hpp"
#include "seekbench/core/errors.hpp"
#include "seekbench/core/text.hpp"

namespace seekbench::agent {

namespace {

constexpr std::array<std::pair<Method, std::string_view>, 6> kMethods{{
    {Method::infoseeker, "infoseeker"},
    {Method::vanilla, "vanilla"},
    {Method::llm3_fs, "llm3_fs"},
    {Method::llm3_bt, "llm3_bt"},
    {Method::react, "react"},
    {Method::icl, "icl"},
}};

constexpr std::string_view kNoInformation = "None";
constexpr std::string_view kThinkAck = "OK.";

class Session {
 public:
  Session(Environment& env, const PromptSet& prompts, const AgentConfig& config, Backend& backend)
      : env_(env),
        prompts_(prompts),
        config_(config),
        backend_(backend),
        k_max_(std::min(config.step_budget, env.step_budget())),
        start_(std::chrono::steady_clock::now()) {
    run_.backend_info = backend.info();
  }

  Environment& env() { return env_; }
  const PromptSet& prompts() const { return prompts_; }
  const AgentConfig& config() const { return config_; }
  AgentRun& run() { return run_; }

  bool can_step() {
    if (env_.done() || env_.steps_used() >= k_max_) return false;
    if (config_.deadline && std::chrono::steady_clock::now() - start_ >= *config_.deadline) {
      run_.deadline_hit = true;
      return false;
    }
    return true;
  }

  void execute(const std::string& action, int attempt, std::string_view phase, const std::string& goal) {
    const auto out = env_.step(action);
    run_.history.push_back({attempt, std::string(phase), goal, action, out.observation});
  }

  // Entries after the most recent history marker.
  std::span<const HistoryItem> since_marker() const {
    return std::span<const HistoryItem>(run_.history).subspan(env_.transcript().marker_offset());
  }

  std::string ask(std::string prompt, int attempt, std::string_view phase) {
    if (config_.uncertainty_prompt) prompt = prompts_.uncertainty_preamble + "\n" + prompt;
    auto response = backend_.complete({{"user", prompt}});
    run_.exchanges.push_back({attempt, std::string(phase), std::move(prompt), response, false});
    return response;
  }

  // One reprompt on a malformed reply, then give up on this phase.
  std::optional<PlanResponse> ask_plan(const std::string& prompt, PlanShape shape, int attempt,
                                       std::string_view phase) {
    std::string current = prompt;
    for (int tries = 0; tries < 2; ++tries) {
      const auto reply = ask(current, attempt, phase);
      try {
        return parse_plan_response(reply, shape);
      } catch (const MalformedResponse& e) {
        run_.exchanges.back().malformed = true;
        current = fmt::format(
            "{}\n\nYour previous reply could not be used ({}). Reply again with only the JSON object in the "
            "requested format.",
            prompt, e.what());
      }
    }
    return std::nullopt;
  }

  // Runs actions until one ends the episode or the budget; returns how many ran.
  int execute_all(const std::vector<std::string>& actions, int attempt, std::string_view phase,
                  const std::string& goal) {
    int n = 0;
    for (const auto& a : actions) {
      if (!can_step()) break;
      execute(a, attempt, phase, goal);
      ++n;
    }
    return n;
  }

  AgentRun finish() {
    run_.success = env_.success();
    run_.steps_used = env_.steps_used();
    return std::move(run_);
  }

 private:
  Environment& env_;
  const PromptSet& prompts_;
  const AgentConfig& config_;
  Backend& backend_;
  int k_max_;
  std::chrono::steady_clock::time_point start_;
  AgentRun run_;
};

template <typename Body>
AgentRun guarded(Session& s, Body body) {
  try {
    body();
  } catch (const TransportError& e) {
    s.run().errored = true;
    s.run().error = e.what();
  } catch (const ScriptedUnderflow& e) {
    s.run().errored = true;
    s.run().error = e.what();
  }
  return s.finish();
}

void infoseeker_loop(Session& s, bool seek, bool extract) {
  const auto& p = s.prompts();
  const std::string domain = s.env().describe();
  for (int n = 1; n <= s.config().max_attempts; ++n) {
    if (!s.can_step()) break;
    s.run().attempts_used = n;
    AttemptStats st;
    st.attempt = n;

    if (seek) {
      const auto history = s.since_marker();
      const std::string prompt =
          history.empty() ? render_prompt(p.seek_initial, {{"domain_desc", domain}})
                          : render_prompt(p.seek_with_history,
                                          {{"domain_desc", domain}, {"interaction_history", render_history(history)}});
      if (const auto plan = s.ask_plan(prompt, PlanShape::steps, n, "seek")) {
        for (const auto& step : plan->steps) st.seek_steps += s.execute_all(step.actions, n, "seek", step.goal);
      } else {
        st.seek_malformed = true;
      }
      if (s.env().success()) {
        s.run().attempts.push_back(st);
        break;
      }
    }

    std::string information(kNoInformation);
    if (extract) {
      const auto reply = s.ask(render_prompt(p.extract, {{"domain_desc", domain},
                                                         {"interaction_history", render_history(s.since_marker())}}),
                               n, "extract");
      const auto trimmed = text::trim(reply);
      if (!trimmed.empty()) information = std::string(trimmed);
    }
    st.information = information;

    const auto plan = s.ask_plan(render_prompt(p.plan, {{"domain_desc", domain},
                                                        {"interaction_history", render_history(s.since_marker())},
                                                        {"information", information}}),
                                 PlanShape::solution_plan, n, "plan");
    s.env().mark_history();
    if (plan) {
      const auto actions = plan->actions();
      st.plan_length = static_cast<int>(actions.size());
      st.plan_steps = s.execute_all(actions, n, "plan", "");
    } else {
      st.plan_malformed = true;
    }
    s.run().attempts.push_back(st);
    if (s.env().success()) break;
  }
}

// Plan-trace baselines: every attempt sees the last `trace_window` executed plans.
void trace_loop(Session& s, const std::string& tmpl) {
  const std::string domain = s.env().describe();
  const int window = s.config().trace_window;
  for (int n = 1; n <= s.config().max_attempts; ++n) {
    if (!s.can_step()) break;
    s.run().attempts_used = n;
    const std::span<const HistoryItem> all(s.run().history);
    std::size_t first = 0;
    while (first < all.size() && all[first].attempt <= n - 1 - window) ++first;
    const auto traces = all.subspan(first);
    const auto plan = s.ask_plan(render_prompt(tmpl, {{"domain_desc", domain}, {"interaction_history", render_history(traces)}}),
                                 PlanShape::full_plan, n, "plan");
    AttemptStats st;
    st.attempt = n;
    if (plan) {
      const auto actions = plan->actions();
      st.plan_length = static_cast<int>(actions.size());
      st.plan_steps = s.execute_all(actions, n, "plan", "");
    } else {
      st.plan_malformed = true;
    }
    s.run().attempts.push_back(st);
    if (s.env().success()) break;
  }
}

std::string first_line(std::string_view reply) {
  std::size_t pos = 0;
  while (pos < reply.size()) {
    auto end = reply.find('\n', pos);
    if (end == std::string_view::npos) end = reply.size();
    auto line = text::trim(reply.substr(pos, end - pos));
    pos = end + 1;
    if (line.starts_with('>')) line = text::trim(line.substr(1));
    if (!line.empty()) return std::string(line);
  }
  return {};
}

void react_loop(Session& s) {
  const std::string domain = s.env().describe();
  const int limit = s.config().react_call_limit > 0 ? s.config().react_call_limit : 2 * s.config().step_budget + 10;
  std::vector<HistoryItem> lines;  // think lines interleaved with environment steps
  s.run().attempts_used = 1;
  AttemptStats st;
  st.attempt = 1;
  for (int call = 0; call < limit && s.can_step(); ++call) {
    const auto reply = s.ask(render_prompt(s.prompts().react_fewshot,
                                           {{"domain_desc", domain}, {"interaction_history", render_react_history(lines)}}),
                             1, "react");
    const auto line = first_line(reply);
    if (line.empty()) {
      s.run().exchanges.back().malformed = true;
      continue;
    }
    if (text::istarts_with(line, "think:")) {
      lines.push_back({1, "think", "", line, std::string(kThinkAck)});
      continue;
    }
    if (text::iequals(line, "end")) break;
    s.execute(line, 1, "react", "");
    lines.push_back(s.run().history.back());
    ++st.plan_steps;
  }
  st.plan_length = st.plan_steps;
  s.run().attempts.push_back(st);
}

}  // namespace

std::string_view to_string(Method m) {
  for (const auto& [key, name] : kMethods) {
    if (key == m) return name;
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (const auto& [key, n] : kMethods) {
    if (n == name) return key;
  }
  throw UsageError(fmt::format("unknown method '{}'", name));
}

void AgentConfig::validate() const {
  if (max_attempts < 1) throw UsageError("max_attempts must be >= 1");
  if (step_budget < 1) throw UsageError("step_budget must be >= 1");
  if (trace_window < 1) throw UsageError("trace_window must be >= 1");
  if (react_call_limit < 0) throw UsageError("react_call_limit must be >= 0");
  if (deadline && deadline->count() <= 0) throw UsageError("wall_clock_ms must be positive");
}

AgentConfig AgentConfig::from_json(const nlohmann::json& j) {
  AgentConfig c;
  if (!j.is_object()) throw UsageError("agent config must be an object");
  try {
    c.method = parse_method(j.value("method", std::string(to_string(c.method))));
    c.max_attempts = j.value("max_attempts", c.max_attempts);
    c.step_budget = j.value("step_budget", c.step_budget);
    c.seek_enabled = j.value("seek", c.seek_enabled);
    c.extract_enabled = j.value("extract", c.extract_enabled);
    c.trace_window = j.value("trace_window", c.trace_window);
    c.uncertainty_prompt = j.value("uncertainty_prompt", c.uncertainty_prompt);
    c.react_call_limit = j.value("react_call_limit", c.react_call_limit);
    if (j.contains("wall_clock_ms")) c.deadline = std::chrono::milliseconds(j.at("wall_clock_ms").get<long long>());
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("agent config: ") + e.what());
  }
  c.validate();
  return c;
}

nlohmann::json AgentConfig::to_json() const {
  nlohmann::ordered_json j;
  j["method"] = to_string(method);
  j["max_attempts"] = max_attempts;
  j["step_budget"] = step_budget;
  j["seek"] = seek_enabled;
  j["extract"] = extract_enabled;
  j["trace_window"] = trace_window;
  j["uncertainty_prompt"] = uncertainty_prompt;
  j["react_call_limit"] = react_call_limit;
  if (deadline) j["wall_clock_ms"] = deadline->count();
  return j;
}

AgentRun run_infoseeker(Environment& env, const PromptSet& prompts, const AgentConfig& config, Backend& backend) {
  config.validate();
  Session s(env, prompts, config, backend);
  return guarded(s, [&] { infoseeker_loop(s, config.seek_enabled, config.extract_enabled); });
}

AgentRun run_baseline(Environment& env, const PromptSet& prompts, const AgentConfig& config, Backend& backend) {
  config.validate();
  Session s(env, prompts, config, backend);
  return guarded(s, [&] {
    switch (config.method) {
      case Method::vanilla:
        infoseeker_loop(s, false, false);
        break;
      case Method::llm3_fs:
        trace_loop(s, prompts.llm3_from_scratch);
        break;
      case Method::llm3_bt:
        trace_loop(s, prompts.llm3_backtrack);
        break;
      case Method::icl:
        trace_loop(s, prompts.icl);
        break;
      case Method::react:
        react_loop(s);
        break;
      case Method::infoseeker:
        throw UsageError("run_baseline does not run infoseeker");
    }
  });
}

AgentRun run_agent(Environment& env, const PromptSet& prompts, const AgentConfig& config, Backend& backend) {
  return config.method == Method::infoseeker ? run_infoseeker(env, prompts, config, backend)
                                             : run_baseline(env, prompts, config, backend);
}

}  // namespace seekbench::agent
