#include <catch_amalgamated.hpp>

#include <filesystem>
#include <regex>
#include <thread>

#include "agent_fixtures.hpp"
#include "seekbench/agent/prompts.hpp"
#include "seekbench/core/errors.hpp"
#include "test_support.hpp"

using namespace seekbench;
using namespace seekbench::agent;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::StartsWith;

namespace {

const PromptSet& prompts() {
  static const PromptSet p = PromptSet::builtin();
  return p;
}

AgentConfig config(Method m, int n_max = 10, int k_max = 100) {
  AgentConfig c;
  c.method = m;
  c.max_attempts = n_max;
  c.step_budget = k_max;
  return c;
}

std::vector<std::string> prompt_texts(const AgentRun& run) {
  std::vector<std::string> out;
  for (const auto& e : run.exchanges) out.push_back(e.prompt);
  return out;
}

int decomposed_steps(const AgentRun& run) {
  int k = 0;
  for (const auto& a : run.attempts) k += a.seek_steps + a.plan_steps;
  return k;
}

}  // namespace

TEST_CASE("method names and config") {
  for (const auto m : {Method::infoseeker, Method::vanilla, Method::llm3_fs, Method::llm3_bt, Method::react, Method::icl}) {
    CHECK(parse_method(to_string(m)) == m);
  }
  CHECK_THROWS_AS(parse_method("adaplanner"), UsageError);
  const auto c = AgentConfig::from_json({{"method", "llm3_bt"}, {"max_attempts", 3}, {"seek", false}, {"wall_clock_ms", 500}});
  CHECK(c.method == Method::llm3_bt);
  CHECK(c.max_attempts == 3);
  CHECK_FALSE(c.seek_enabled);
  CHECK(c.deadline == std::chrono::milliseconds(500));
  CHECK(AgentConfig::from_json(c.to_json()).to_json() == c.to_json());
  CHECK_THROWS_AS(AgentConfig::from_json({{"max_attempts", 0}}), UsageError);
  CHECK_THROWS_AS(AgentConfig::from_json({{"trace_window", 0}}), UsageError);
}

TEST_CASE("probe, measure, compensate succeeds in one attempt") {
  auto env = fixtures::open_arm();
  ScriptedBackend backend(fixtures::probe_then_compensate());
  const auto run = run_infoseeker(*env, prompts(), config(Method::infoseeker), backend);
  CHECK(run.success);
  CHECK_FALSE(run.errored);
  CHECK(run.attempts_used == 1);
  CHECK(run.steps_used == 3);  // probe, check, compensated move; the trailing checks never run
  REQUIRE(run.attempts.size() == 1);
  CHECK(run.attempts[0].seek_steps == 2);
  CHECK(run.attempts[0].plan_steps == 1);
  CHECK(run.attempts[0].plan_length == 3);
  CHECK(run.attempts[0].information == "Moves land 1.0 to the right of the commanded point.");

  REQUIRE(run.exchanges.size() == 3);
  CHECK(run.exchanges[0].phase == "seek");
  CHECK(run.exchanges[0].prompt == render_prompt(prompts().seek_initial, {{"domain_desc", env->describe()}}));
  CHECK(run.exchanges[1].phase == "extract");
  CHECK_THAT(run.exchanges[1].prompt, ContainsSubstring("- Act: Move 1.0 0.0\n- Obs: Success!"));
  CHECK(run.exchanges[2].phase == "plan");
  CHECK_THAT(run.exchanges[2].prompt,
             ContainsSubstring("# Information\nMoves land 1.0 to the right of the commanded point."));
  CHECK_THAT(run.exchanges[2].prompt, ContainsSubstring("'Gripper': [2.00, 0.00]"));

  // The marker sits between the seek actions and the plan.
  CHECK(env->transcript().markers() == std::vector<std::size_t>{2});
  REQUIRE(run.history.size() == 3);
  CHECK(run.history[0].phase == "seek");
  CHECK(run.history[0].goal == "Probe a move");
  CHECK(run.history[2].phase == "plan");
}

TEST_CASE("malformed replies spend attempts without steps") {
  auto env = fixtures::open_arm();
  PolicyBackend backend("garbage", [](const std::vector<Message>&) { return std::string("no idea"); });
  const auto run = run_infoseeker(*env, prompts(), config(Method::infoseeker, 4), backend);
  CHECK_FALSE(run.success);
  CHECK_FALSE(run.errored);
  CHECK(run.attempts_used == 4);
  CHECK(run.steps_used == 0);
  CHECK(run.exchanges.size() == 4 * 5);  // seek twice, extract once, plan twice
  for (const auto& a : run.attempts) {
    CHECK(a.seek_malformed);
    CHECK(a.plan_malformed);
  }
  // The reprompt repeats the request with an error note.
  CHECK_THAT(run.exchanges[1].prompt, StartsWith(run.exchanges[0].prompt));
  CHECK_THAT(run.exchanges[1].prompt, ContainsSubstring("could not be used"));
  CHECK(run.exchanges[0].malformed);
}

TEST_CASE("one malformed reply is forgiven") {
  auto env = fixtures::open_arm();
  auto script = fixtures::probe_then_compensate();
  script.insert(script.begin(), "not json");
  ScriptedBackend backend(script);
  const auto run = run_infoseeker(*env, prompts(), config(Method::infoseeker), backend);
  CHECK(run.success);
  CHECK(run.exchanges.size() == 4);
}

TEST_CASE("scripted underflow marks the run errored") {
  auto env = fixtures::open_arm();
  ScriptedBackend backend({fixtures::probe_then_compensate()[0]});
  const auto run = run_infoseeker(*env, prompts(), config(Method::infoseeker), backend);
  CHECK(run.errored);
  CHECK_FALSE(run.success);
  CHECK(run.steps_used == 2);
  CHECK_THAT(run.error, ContainsSubstring("no replies left"));
}

TEST_CASE("budget stops a plan midway") {
  auto env = fixtures::open_arm();
  const std::vector<std::string> script{
      fixtures::steps_reply({{"Check", "Check", "Check"}}),
      "nothing learned",
      fixtures::plan_reply({"Check", "Check", "Check", "Check"}),
  };
  ScriptedBackend backend(script);
  const auto run = run_infoseeker(*env, prompts(), config(Method::infoseeker, 10, 5), backend);
  CHECK(run.steps_used == 5);
  CHECK(run.attempts_used == 1);
  CHECK(run.attempts[0].plan_steps == 2);
  CHECK(run.attempts[0].plan_length == 4);
  CHECK(decomposed_steps(run) == 5);
}

TEST_CASE("later attempts see the last plan through the history prompt") {
  auto env = fixtures::open_arm();
  const std::vector<std::string> script{
      fixtures::steps_reply({{"Check"}}),
      "info one",
      fixtures::plan_reply({"Move 1.0 2.0"}),  // lands on (2, 2): wrong
      fixtures::steps_reply({{"Check"}}),
      "info two",
      fixtures::plan_reply({"Move 0.0 2.0"}),
  };
  ScriptedBackend backend(script);
  const auto run = run_infoseeker(*env, prompts(), config(Method::infoseeker), backend);
  CHECK(run.success);
  CHECK(run.attempts_used == 2);
  const auto& second_seek = run.exchanges[3].prompt;
  CHECK_THAT(second_seek, StartsWith(prompts().seek_with_history.substr(0, 60)));
  CHECK_THAT(second_seek, ContainsSubstring("## Attempt 1, plan execution\n- Act: Move 1.0 2.0"));
  // Attempt 1's seek step happened before the reset and is gone from the prompt.
  CHECK_THAT(second_seek, !ContainsSubstring("exploration step"));
  CHECK(run.attempts[1].information == "info two");
}

TEST_CASE("extraction off passes None") {
  auto env = fixtures::open_arm();
  auto cfg = config(Method::infoseeker);
  cfg.extract_enabled = false;
  const std::vector<std::string> script{fixtures::probe_then_compensate()[0], fixtures::probe_then_compensate()[2]};
  ScriptedBackend backend(script);
  const auto run = run_infoseeker(*env, prompts(), cfg, backend);
  CHECK(run.success);
  REQUIRE(run.exchanges.size() == 2);
  CHECK_THAT(run.exchanges[1].prompt, ContainsSubstring("# Information\nNone\n"));
}

TEST_CASE("both toggles off is the vanilla loop") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto cfg = config(Method::infoseeker, 4, 30);
    cfg.seek_enabled = false;
    cfg.extract_enabled = false;
    auto env_a = fixtures::open_arm();
    auto env_b = fixtures::open_arm();
    PolicyBackend model_a("random", fixtures::RandomModel(seed));
    PolicyBackend model_b("random", fixtures::RandomModel(seed));
    const auto a = run_infoseeker(*env_a, prompts(), cfg, model_a);
    cfg.method = Method::vanilla;
    const auto b = run_agent(*env_b, prompts(), cfg, model_b);
    CHECK(prompt_texts(a) == prompt_texts(b));
    CHECK(env_a->transcript() == env_b->transcript());
    CHECK(a.steps_used == b.steps_used);
  }
}

TEST_CASE("accounting holds for random conversations") {
  Rng pick(99);
  for (std::uint64_t i = 0; i < 300; ++i) {
    auto spec = all_tasks()[pick.index(all_tasks().size())];
    spec.seed = i;
    auto env = make_env(spec);
    static const Method methods[] = {Method::infoseeker, Method::vanilla, Method::llm3_fs,
                                     Method::llm3_bt,   Method::react,   Method::icl};
    auto cfg = config(methods[pick.index(6)], 1 + static_cast<int>(pick.index(5)), 1 + static_cast<int>(pick.index(40)));
    cfg.seek_enabled = pick.index(2) == 0;
    cfg.extract_enabled = pick.index(2) == 0;
    PolicyBackend model("random", fixtures::RandomModel(i));
    const auto run = run_agent(*env, prompts(), cfg, model);
    INFO("conversation " << i << " method " << to_string(cfg.method));
    CHECK(run.steps_used <= cfg.step_budget);
    CHECK(run.steps_used == env->steps_used());
    CHECK(run.history.size() == static_cast<std::size_t>(run.steps_used));
    CHECK(decomposed_steps(run) == run.steps_used);
    CHECK(run.attempts_used <= cfg.max_attempts);
    if (cfg.method == Method::infoseeker && !cfg.seek_enabled) {
      for (const auto& a : run.attempts) CHECK(a.seek_steps == 0);
    }
  }
}

TEST_CASE("identical scripted runs are identical") {
  auto run_once = [] {
    auto env = fixtures::open_arm();
    PolicyBackend model("random", fixtures::RandomModel(7));
    auto run = run_infoseeker(*env, prompts(), config(Method::infoseeker, 5, 50), model);
    return std::make_pair(prompt_texts(run), env->transcript().to_jsonl());
  };
  CHECK(run_once() == run_once());
}

TEST_CASE("react lines") {
  SECTION("think lines are free and echoed") {
    auto env = fixtures::open_arm("arm/basic");
    ScriptedBackend backend({"think: go straight to the target", "> Move 1.0 2.0"});
    const auto run = run_agent(*env, prompts(), config(Method::react), backend);
    CHECK(run.success);
    CHECK(run.steps_used == 1);
    REQUIRE(run.exchanges.size() == 2);
    CHECK_THAT(run.exchanges[1].prompt, ContainsSubstring("> think: go straight to the target\nOK."));
    CHECK_THAT(run.exchanges[0].prompt, ContainsSubstring("# Now it's your turn\n" + env->describe()));
  }
  SECTION("End stops the episode") {
    auto env = fixtures::open_arm("arm/basic");
    ScriptedBackend backend({"Check", "End", "Check"});
    const auto run = run_agent(*env, prompts(), config(Method::react), backend);
    CHECK(run.steps_used == 1);
    CHECK(run.exchanges.size() == 2);
    CHECK_THAT(run.exchanges[1].prompt, ContainsSubstring("> Check\nJoint positions:"));
  }
  SECTION("call limit") {
    auto env = fixtures::open_arm("arm/basic");
    auto cfg = config(Method::react);
    cfg.react_call_limit = 3;
    PolicyBackend backend("thinker", [](const std::vector<Message>&) { return std::string("think: hmm"); });
    const auto run = run_agent(*env, prompts(), cfg, backend);
    CHECK(run.steps_used == 0);
    CHECK(run.exchanges.size() == 3);
  }
}

TEST_CASE("trace baselines") {
  SECTION("from scratch starts with no previous plan") {
    auto env = fixtures::open_arm();
    ScriptedBackend backend({fixtures::plan_reply({"Move 1.0 2.0"}, "Full Plan")});
    auto cfg = config(Method::llm3_fs, 1);
    const auto run = run_agent(*env, prompts(), cfg, backend);
    REQUIRE(run.exchanges.size() == 1);
    CHECK_THAT(run.exchanges[0].prompt, ContainsSubstring("The trace is: \nNo previous plan"));
    CHECK(run.steps_used == 1);
  }
  SECTION("backtrack asks about reversing") {
    auto env = fixtures::open_arm();
    ScriptedBackend backend({fixtures::plan_reply({"Check"}, "Full Plan")});
    const auto run = run_agent(*env, prompts(), config(Method::llm3_bt, 1), backend);
    CHECK_THAT(run.exchanges[0].prompt,
               ContainsSubstring("(iii) do we need to reverse one or more succeeded actions"));
  }
  SECTION("window keeps the last traces") {
    auto env = fixtures::open_arm();
    auto cfg = config(Method::llm3_fs, 3);
    cfg.trace_window = 1;
    PolicyBackend backend("checker", [](const std::vector<Message>&) {
      return fixtures::plan_reply({"Check"}, "Full Plan");
    });
    const auto run = run_agent(*env, prompts(), cfg, backend);
    REQUIRE(run.exchanges.size() == 3);
    CHECK_THAT(run.exchanges[2].prompt, ContainsSubstring("## Attempt 2, plan execution"));
    CHECK_THAT(run.exchanges[2].prompt, !ContainsSubstring("## Attempt 1,"));
    CHECK(run.steps_used == 3);
  }
  SECTION("icl carries the demonstrations") {
    auto env = make_env(TaskSpec::parse("color/wronglabel"));
    ScriptedBackend backend({fixtures::plan_reply({"Check A"}, "Full Plan")});
    const auto run = run_agent(*env, prompts(), config(Method::icl, 1), backend);
    CHECK_THAT(run.exchanges[0].prompt, StartsWith(test_support::golden("icl_prefix.txt")));
    CHECK_THAT(run.exchanges[0].prompt, ContainsSubstring(env->describe()));
  }
}

TEST_CASE("uncertainty preamble goes first") {
  auto env = fixtures::open_arm();
  auto cfg = config(Method::infoseeker);
  cfg.uncertainty_prompt = true;
  ScriptedBackend backend(fixtures::probe_then_compensate());
  const auto run = run_infoseeker(*env, prompts(), cfg, backend);
  CHECK(run.success);
  for (const auto& e : run.exchanges) CHECK_THAT(e.prompt, StartsWith(prompts().uncertainty_preamble + "\n"));
}

TEST_CASE("wall-clock deadline stops at a step boundary") {
  auto env = fixtures::open_arm();
  auto cfg = config(Method::infoseeker, 50);
  cfg.deadline = std::chrono::milliseconds(30);
  PolicyBackend slow("slow", [](const std::vector<Message>&) {
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
    return fixtures::steps_reply({{"Check"}});
  });
  const auto run = run_infoseeker(*env, prompts(), cfg, slow);
  CHECK(run.deadline_hit);
  CHECK(run.attempts_used < 50);
}

TEST_CASE("agent code never branches on the task family") {
  const std::filesystem::path src = std::filesystem::path(SEEKBENCH_TEST_DATA).parent_path() / "src" / "agent";
  const std::regex family(R"(seekbench/envs/|Family::|ArmEnv|NavEnv|ColorEnv|BlocksEnv)");
  int files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(src)) {
    const auto text = test_support::read_file(entry.path().string());
    INFO(entry.path().string());
    CHECK_FALSE(std::regex_search(text, family));
    ++files;
  }
  CHECK(files >= 4);
}
