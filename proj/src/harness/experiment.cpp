#include "seekbench/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <mutex>
#include <regex>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include <fmt/format.h>

#include "seekbench/core/environment.hpp"
#include "seekbench/core/errors.hpp"
#include "seekbench/envs/arm.hpp"
#include "seekbench/harness/classify.hpp"

namespace seekbench::harness {

namespace fs = std::filesystem;
using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

constexpr std::string_view kRecordsFile = "records.jsonl";

ojson ordered(const json& j) { return ojson::parse(j.dump()); }

std::string_view to_string(MethodKind k) { return k == MethodKind::agent ? "agent" : "policy"; }

BackendKind parse_backend(std::string_view name) {
  if (name == "scripted") return BackendKind::scripted;
  if (name == "chat") return BackendKind::chat;
  if (name == "rule") return BackendKind::rule;
  throw UsageError(fmt::format("unknown backend '{}' (expected scripted, chat or rule)", name));
}

MethodKind parse_method_kind(std::string_view name) {
  if (name == "agent") return MethodKind::agent;
  if (name == "policy") return MethodKind::policy;
  throw UsageError(fmt::format("unknown method kind '{}' (expected agent or policy)", name));
}

std::vector<int> int_list(const json& j, const char* what) {
  if (!j.is_array()) throw UsageError(fmt::format("'{}' must be a list of integers", what));
  std::vector<int> out;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw UsageError(fmt::format("'{}' must be a list of integers", what));
    out.push_back(v.get<int>());
  }
  return out;
}

MethodSpec method_from_json(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw UsageError("each method must be an object");
  MethodSpec m;
  m.id = j.value("id", std::string());
  m.kind = parse_method_kind(j.value("kind", std::string("agent")));
  if (m.kind == MethodKind::policy) {
    m.policy = policies::parse_kind(j.value("policy", std::string("seeker")));
  } else {
    m.agent = agent::AgentConfig::from_json(j.value("agent", json::object()));
    m.backend = parse_backend(j.value("backend", std::string("scripted")));
    if (j.contains("script")) {
      if (!j["script"].is_array()) throw UsageError("'script' must be a list of replies");
      for (const auto& r : j["script"]) {
        if (!r.is_string()) throw UsageError("'script' must be a list of replies");
        m.script.push_back(r.get<std::string>());
      }
    }
    if (j.contains("chat")) m.chat = agent::ChatConfig::from_json(j["chat"]);
    if (j.contains("rule")) m.policy = policies::parse_kind(j["rule"].get<std::string>());
    if (j.contains("prompts_dir")) {
      fs::path p = j["prompts_dir"].get<std::string>();
      m.prompts_dir = (p.is_relative() && !base_dir.empty() ? base_dir / p : p).string();
    }
  }
  if (m.id.empty()) {
    m.id = m.kind == MethodKind::policy ? fmt::format("policy-{}", policies::to_string(m.policy))
                                        : std::string(agent::to_string(m.agent.method));
  }
  return m;
}

std::string file_safe(std::string s) {
  std::replace(s.begin(), s.end(), '/', '-');
  return s;
}

std::unique_ptr<agent::Backend> make_backend(const MethodSpec& m, const Environment& env) {
  switch (m.backend) {
    case BackendKind::scripted:
      return std::make_unique<agent::ScriptedBackend>(m.script);
    case BackendKind::chat:
      return std::make_unique<agent::ChatCompletionsClient>(*m.chat);
    case BackendKind::rule: {
      const auto* arm_env = dynamic_cast<const arm::ArmEnv*>(&env);
      if (!arm_env) throw UsageError("the rule backend only plays arm tasks");
      return policies::make_arm_rule_backend(m.policy, arm_env->public_task());
    }
  }
  return nullptr;
}

ojson transcript_lines(const Environment& env, const agent::AgentRun* run) {
  ojson lines = ojson::array();
  const auto entries = env.transcript().entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    nlohmann::ordered_json line;
    line["i"] = i;
    line["a"] = entries[i].action;
    line["o"] = entries[i].observation;
    line["marker"] = env.transcript().marker_before(i);
    if (run && i < run->history.size()) {
      const auto& h = run->history[i];
      line["attempt"] = h.attempt;
      line["phase"] = h.phase;
      if (!h.goal.empty()) line["goal"] = h.goal;
    }
    lines.push_back(line);
  }
  return lines;
}

std::string to_jsonl(const ojson& lines) {
  std::string out;
  for (const auto& l : lines) out += l.dump() + '\n';
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

// Keeps complete lines only, so an interrupted append does not poison the file.
void repair_records(const fs::path& file) {
  if (!fs::exists(file)) return;
  std::ifstream in(file, std::ios::binary);
  std::string content((std::istreambuf_iterator<char>(in)), {});
  if (content.empty() || content.back() == '\n') return;
  content.erase(content.rfind('\n') == std::string::npos ? 0 : content.rfind('\n') + 1);
  write_file(file, content);
}

}  // namespace

std::string_view to_string(BackendKind b) {
  switch (b) {
    case BackendKind::scripted: return "scripted";
    case BackendKind::chat: return "chat";
    case BackendKind::rule: return "rule";
  }
  return "?";
}

std::string_view to_string(FailureCategory c) {
  switch (c) {
    case FailureCategory::information_seeking: return "InformationSeeking";
    case FailureCategory::information_extraction: return "InformationExtraction";
    case FailureCategory::instruction_understanding: return "InstructionUnderstanding";
    case FailureCategory::long_horizon: return "LongHorizonPlanning";
  }
  return "?";
}

std::optional<FailureCategory> parse_failure_category(std::string_view name) {
  for (const auto c : {FailureCategory::information_seeking, FailureCategory::information_extraction,
                       FailureCategory::instruction_understanding, FailureCategory::long_horizon}) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

ojson MethodSpec::to_json() const {
  nlohmann::ordered_json j;
  j["id"] = id;
  j["kind"] = to_string(kind);
  if (kind == MethodKind::policy) {
    j["policy"] = policies::to_string(policy);
    return j;
  }
  j["agent"] = ordered(agent.to_json());
  j["backend"] = to_string(backend);
  if (backend == BackendKind::scripted) j["script"] = script;
  if (backend == BackendKind::rule) j["rule"] = policies::to_string(policy);
  if (chat) {
    j["chat"] = {{"base_url", chat->base_url},
                 {"model", chat->model},
                 {"api_key_env", chat->api_key_env},
                 {"timeout_ms", chat->timeout.count()},
                 {"max_retries", chat->max_retries},
                 {"retry_backoff_ms", chat->retry_backoff.count()},
                 {"params", ordered(chat->extra)}};
  }
  if (!prompts_dir.empty()) j["prompts_dir"] = prompts_dir;
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw UsageError("experiment config must be a JSON object");
  static const std::set<std::string> known{"tasks",        "methods",       "trials_per_cell", "base_seed",
                                           "step_budget",  "budget_sweep",  "attempt_sweep",   "output_dir",
                                           "parallelism",  "wall_clock_ms", "classify_failures", "task_params"};
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw UsageError(fmt::format("unknown config key '{}'", key));
  }
  ExperimentConfig c;
  try {
    if (!j.contains("tasks") || !j["tasks"].is_array()) throw UsageError("'tasks' must be a list of task patterns");
    for (const auto& t : j["tasks"]) c.tasks.push_back(t.get<std::string>());
    if (!j.contains("methods") || !j["methods"].is_array()) throw UsageError("'methods' must be a list");
    for (const auto& m : j["methods"]) c.methods.push_back(method_from_json(m, base_dir));
    c.trials_per_cell = j.value("trials_per_cell", c.trials_per_cell);
    c.base_seed = j.value("base_seed", c.base_seed);
    c.step_budget = j.value("step_budget", c.step_budget);
    if (j.contains("budget_sweep")) c.budget_sweep = int_list(j["budget_sweep"], "budget_sweep");
    if (j.contains("attempt_sweep")) c.attempt_sweep = int_list(j["attempt_sweep"], "attempt_sweep");
    if (j.contains("output_dir")) {
      fs::path p = j["output_dir"].get<std::string>();
      c.output_dir = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    }
    c.parallelism = j.value("parallelism", c.parallelism);
    if (j.contains("wall_clock_ms")) c.wall_clock_ms = j["wall_clock_ms"].get<int>();
    c.classify_failures = j.value("classify_failures", c.classify_failures);
    if (j.contains("task_params")) c.task_params = j["task_params"];
  } catch (const json::exception& e) {
    throw UsageError(std::string("experiment config: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw UsageError("cannot open config " + file.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError(fmt::format("{}: {}", file.string(), e.what()));
  }
  return from_json(j, file.parent_path());
}

void ExperimentConfig::validate() const {
  if (tasks.empty()) throw UsageError("'tasks' must name at least one task");
  if (methods.empty()) throw UsageError("'methods' must list at least one method");
  if (trials_per_cell < 1) throw UsageError("trials_per_cell must be >= 1");
  if (step_budget < 1) throw UsageError("step_budget must be >= 1");
  if (parallelism < 1) throw UsageError("parallelism must be >= 1");
  if (wall_clock_ms && *wall_clock_ms <= 0) throw UsageError("wall_clock_ms must be positive");
  for (const auto* sweep : {&budget_sweep, &attempt_sweep}) {
    if (!*sweep) continue;
    if ((*sweep)->empty()) throw UsageError("sweeps must not be empty");
    for (int v : **sweep) {
      if (v < 1) throw UsageError("sweep values must be >= 1");
    }
  }
  if (!task_params.is_object()) throw UsageError("'task_params' must map task ids to objects");
  for (const auto& [id, params] : task_params.items()) {
    TaskSpec::parse(id);
    if (!params.is_object()) throw UsageError(fmt::format("task_params['{}'] must be an object", id));
  }
  const auto expanded = expanded_tasks();
  static const std::regex safe("[A-Za-z0-9_.+-]+");
  std::set<std::string> ids;
  for (const auto& m : methods) {
    if (!std::regex_match(m.id, safe)) throw UsageError(fmt::format("method id '{}' must be [A-Za-z0-9_.+-]+", m.id));
    if (!ids.insert(m.id).second) throw UsageError(fmt::format("duplicate method id '{}'", m.id));
    if (m.kind != MethodKind::agent) continue;
    if (m.backend == BackendKind::chat && (!m.chat || m.chat->model.empty())) {
      throw UsageError(fmt::format("method '{}' needs a chat config with a model", m.id));
    }
    if (m.backend == BackendKind::rule) {
      for (const auto& t : expanded) {
        if (t.family != Family::arm) throw UsageError(fmt::format("method '{}': the rule backend only plays arm tasks", m.id));
      }
    }
  }
}

ojson ExperimentConfig::to_json() const {
  nlohmann::ordered_json j;
  j["tasks"] = tasks;
  j["methods"] = ojson::array();
  for (const auto& m : methods) j["methods"].push_back(m.to_json());
  j["trials_per_cell"] = trials_per_cell;
  j["base_seed"] = base_seed;
  j["step_budget"] = step_budget;
  if (budget_sweep) j["budget_sweep"] = *budget_sweep;
  if (attempt_sweep) j["attempt_sweep"] = *attempt_sweep;
  j["output_dir"] = output_dir.string();
  j["parallelism"] = parallelism;
  if (wall_clock_ms) j["wall_clock_ms"] = *wall_clock_ms;
  j["classify_failures"] = classify_failures;
  j["task_params"] = ordered(task_params);
  return j;
}

std::vector<TaskSpec> ExperimentConfig::expanded_tasks() const {
  std::vector<bool> chosen(all_tasks().size(), false);
  for (const auto& pattern : tasks) {
    bool matched = false;
    const auto slash = pattern.find('/');
    const std::string fam = slash == std::string::npos ? pattern : pattern.substr(0, slash);
    const std::string var = slash == std::string::npos ? "*" : pattern.substr(slash + 1);
    for (std::size_t i = 0; i < all_tasks().size(); ++i) {
      const auto& t = all_tasks()[i];
      const bool all = pattern == "all" || pattern == "*";
      if (all || ((fam == "*" || fam == to_string(t.family)) && (var == "*" || var == to_string(t.variant)))) {
        chosen[i] = true;
        matched = true;
      }
    }
    if (!matched) throw UsageError(fmt::format("task pattern '{}' matches no task", pattern));
  }
  std::vector<TaskSpec> out;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    if (chosen[i]) out.push_back(all_tasks()[i]);
  }
  return out;
}

std::vector<int> ExperimentConfig::budgets() const { return budget_sweep ? *budget_sweep : std::vector<int>{step_budget}; }

std::vector<int> ExperimentConfig::attempt_values(const MethodSpec& m) const {
  if (m.kind == MethodKind::policy) return {0};
  return attempt_sweep ? *attempt_sweep : std::vector<int>{m.agent.max_attempts};
}

ojson RunRecord::to_json() const {
  nlohmann::ordered_json j;
  j["id"] = id;
  j["task"] = task;
  j["method"] = method;
  j["seed"] = seed;
  j["trial"] = trial;
  j["step_budget"] = step_budget;
  j["max_attempts"] = max_attempts;
  j["success"] = success;
  j["errored"] = errored;
  if (!error.empty()) j["error"] = error;
  j["deadline_hit"] = deadline_hit;
  j["steps_used"] = steps_used;
  j["attempts_used"] = attempts_used;
  j["wall_ms"] = wall_ms;
  j["attempts"] = ojson::array();
  for (const auto& a : attempts) {
    j["attempts"].push_back({{"attempt", a.attempt},
                             {"seek_steps", a.seek_steps},
                             {"plan_steps", a.plan_steps},
                             {"plan_length", a.plan_length},
                             {"information", a.information}});
  }
  if (failure_category) j["failure_category"] = to_string(*failure_category);
  if (classification_flagged) j["classification_flagged"] = true;
  j["transcript"] = transcript_path;
  j["log"] = log_path;
  j["backend"] = ordered(backend_info);
  return j;
}

RunRecord RunRecord::from_json(const json& j) {
  RunRecord r;
  r.id = j.at("id").get<std::string>();
  r.task = j.at("task").get<std::string>();
  r.method = j.at("method").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.trial = j.value("trial", 0);
  r.step_budget = j.at("step_budget").get<int>();
  r.max_attempts = j.value("max_attempts", 0);
  r.success = j.at("success").get<bool>();
  r.errored = j.value("errored", false);
  r.error = j.value("error", std::string());
  r.deadline_hit = j.value("deadline_hit", false);
  r.steps_used = j.at("steps_used").get<int>();
  r.attempts_used = j.value("attempts_used", 0);
  r.wall_ms = j.value("wall_ms", 0.0);
  for (const auto& a : j.value("attempts", json::array())) {
    r.attempts.push_back({a.value("attempt", 0), a.value("seek_steps", 0), a.value("plan_steps", 0),
                          a.value("plan_length", 0), a.value("information", std::string())});
  }
  if (j.contains("failure_category")) {
    r.failure_category = parse_failure_category(j["failure_category"].get<std::string>());
    if (!r.failure_category) throw std::invalid_argument("unknown failure category in record " + r.id);
  }
  r.classification_flagged = j.value("classification_flagged", false);
  r.transcript_path = j.value("transcript", std::string());
  r.log_path = j.value("log", std::string());
  r.backend_info = j.value("backend", json());
  return r;
}

std::vector<RunRecord> load_records(const fs::path& dir) {
  std::vector<RunRecord> out;
  std::ifstream in(dir / kRecordsFile);
  if (!in) return out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception&) {
      if (in.peek() == std::char_traits<char>::eof()) break;  // torn final line
      throw;
    }
    out.push_back(RunRecord::from_json(j));
  }
  return out;
}

std::vector<TrialPlan> plan_trials(const ExperimentConfig& config) {
  std::vector<TrialPlan> out;
  for (const auto& base : config.expanded_tasks()) {
    for (const auto& method : config.methods) {
      for (const int budget : config.budgets()) {
        for (const int attempts : config.attempt_values(method)) {
          for (int trial = 0; trial < config.trials_per_cell; ++trial) {
            TrialPlan p;
            p.task = base;
            p.task.seed = config.base_seed + static_cast<std::uint64_t>(trial);
            p.task.step_budget = budget;
            if (config.task_params.contains(base.id())) p.task.params = config.task_params[base.id()];
            p.method = &method;
            p.trial = trial;
            p.max_attempts = attempts;
            p.id = fmt::format("{}_{}_b{}_n{}_t{}", file_safe(base.id()), method.id, budget, attempts, trial);
            out.push_back(std::move(p));
          }
        }
      }
    }
  }
  return out;
}

TrialResult run_trial(const ExperimentConfig& config, const TrialPlan& plan) {
  const MethodSpec& m = *plan.method;
  TrialResult result;
  RunRecord& r = result.record;
  r.id = plan.id;
  r.task = plan.task.id();
  r.method = m.id;
  r.seed = plan.task.seed;
  r.trial = plan.trial;
  r.step_budget = plan.task.step_budget;
  r.max_attempts = plan.max_attempts;
  r.transcript_path = "transcripts/" + plan.id + ".jsonl";
  r.log_path = "logs/" + plan.id + ".jsonl";

  const auto start = std::chrono::steady_clock::now();
  auto env = make_env(plan.task);
  std::optional<agent::AgentRun> run;
  if (m.kind == MethodKind::policy) {
    auto policy = policies::make_policy(m.policy, *env);
    const auto outcome = policies::run_policy(*env, *policy);
    r.success = outcome.success;
    r.steps_used = outcome.steps_used;
    r.backend_info = {{"policy", policies::to_string(m.policy)}};
  } else {
    const auto prompts = m.prompts_dir.empty() ? agent::PromptSet::builtin() : agent::PromptSet::load(m.prompts_dir);
    auto cfg = m.agent;
    cfg.step_budget = plan.task.step_budget;
    cfg.max_attempts = plan.max_attempts;
    if (config.wall_clock_ms) cfg.deadline = std::chrono::milliseconds(*config.wall_clock_ms);
    auto backend = make_backend(m, *env);
    run = agent::run_agent(*env, prompts, cfg, *backend);
    r.success = run->success;
    r.errored = run->errored;
    r.error = run->error;
    r.deadline_hit = run->deadline_hit;
    r.steps_used = run->steps_used;
    r.attempts_used = run->attempts_used;
    r.backend_info = run->backend_info;
    for (const auto& a : run->attempts) {
      r.attempts.push_back({a.attempt, a.seek_steps, a.plan_steps, a.plan_length, a.information});
    }
    if (config.classify_failures && !r.success && !r.errored) {
      agent::Backend* classifier = m.backend == BackendKind::scripted ? nullptr : backend.get();
      try {
        classify_failure(r, *run, cfg, prompts, env->describe(), classifier);
      } catch (const std::exception&) {
        r.classification_flagged = true;
      }
    }
    ojson log = ojson::array();
    for (const auto& e : run->exchanges) {
      nlohmann::ordered_json line;
      line["attempt"] = e.attempt;
      line["phase"] = e.phase;
      line["prompt"] = e.prompt;
      line["response"] = e.response;
      line["malformed"] = e.malformed;
      log.push_back(line);
    }
    result.log_jsonl = to_jsonl(log);
  }
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  result.transcript_jsonl = to_jsonl(transcript_lines(*env, run ? &*run : nullptr));
  return result;
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  const fs::path dir = config.output_dir;
  fs::create_directories(dir / "transcripts");
  fs::create_directories(dir / "logs");
  {
    std::ofstream cfg(dir / "config.json", std::ios::trunc);
    cfg << config.to_json().dump(2) << '\n';
  }
  const fs::path records_file = dir / kRecordsFile;
  if (!options.resume) fs::remove(records_file);
  repair_records(records_file);

  std::set<std::string> done;
  for (const auto& r : load_records(dir)) done.insert(r.id);
  const auto plans = plan_trials(config);
  std::vector<const TrialPlan*> pending;
  for (const auto& p : plans) {
    if (!done.count(p.id)) pending.push_back(&p);
  }

  std::mutex io;
  std::ofstream records(records_file, std::ios::app | std::ios::binary);
  if (!records) throw std::runtime_error("cannot open " + records_file.string());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < pending.size(); i = next++) {
      const TrialPlan& plan = *pending[i];
      TrialResult result;
      try {
        result = run_trial(config, plan);
      } catch (const std::exception& e) {
        result.record.id = plan.id;
        result.record.task = plan.task.id();
        result.record.method = plan.method->id;
        result.record.seed = plan.task.seed;
        result.record.trial = plan.trial;
        result.record.step_budget = plan.task.step_budget;
        result.record.max_attempts = plan.max_attempts;
        result.record.errored = true;
        result.record.error = e.what();
      }
      if (!result.record.transcript_path.empty()) {
        write_file(dir / result.record.transcript_path, result.transcript_jsonl);
      }
      if (!result.record.log_path.empty()) write_file(dir / result.record.log_path, result.log_jsonl);
      const std::string line = result.record.to_json().dump() + '\n';
      std::lock_guard lock(io);
      records << line;
      records.flush();
      if (options.on_record) options.on_record(result.record);
    }
  };
  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(config.parallelism), pending.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  records.close();

  std::unordered_map<std::string, RunRecord> by_id;
  for (auto& r : load_records(dir)) by_id.insert_or_assign(r.id, std::move(r));
  std::vector<RunRecord> out;
  for (const auto& p : plans) {
    if (auto it = by_id.find(p.id); it != by_id.end()) out.push_back(it->second);
  }
  return out;
}

}  // namespace seekbench::harness
