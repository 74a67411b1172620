#include <catch_amalgamated.hpp>

#include "seekbench/core/environment.hpp"
#include "seekbench/core/errors.hpp"
#include "seekbench/core/rng.hpp"
#include "seekbench/core/task_spec.hpp"
#include "seekbench/core/text.hpp"
#include "seekbench/core/transcript.hpp"

using namespace seekbench;

TEST_CASE("task ids cover exactly the eleven tasks") {
  const auto& tasks = all_tasks();
  REQUIRE(tasks.size() == 11);
  int valid = 0;
  for (auto f : {Family::arm, Family::nav, Family::color, Family::blocks_single, Family::blocks_multiple}) {
    for (auto v : {Variant::basic, Variant::perturbed, Variant::contaminated, Variant::wronglabel}) {
      valid += is_valid_pair(f, v);
    }
  }
  CHECK(valid == 11);
  for (const auto& t : tasks) CHECK(TaskSpec::parse(t.id()).id() == t.id());
}

TEST_CASE("invalid pairs are rejected naming the pair") {
  CHECK_THROWS_WITH(TaskSpec::parse("color/perturbed"), Catch::Matchers::ContainsSubstring("(color, perturbed)"));
  CHECK_THROWS_AS(TaskSpec::parse("color/single"), InvalidTask);
  CHECK_THROWS_AS(TaskSpec::parse("arm"), InvalidTask);

  TaskSpec spec;
  spec.family = Family::nav;
  spec.variant = Variant::wronglabel;
  CHECK_THROWS_WITH(make_env(spec), Catch::Matchers::ContainsSubstring("(nav, wronglabel)"));

  spec = TaskSpec::parse("arm/basic");
  spec.step_budget = 0;
  CHECK_THROWS_AS(make_env(spec), InvalidTask);
}

TEST_CASE("action text is one trimmed line") {
  CHECK(ActionText("  Check \t").str() == "Check");
  CHECK_THROWS_AS(ActionText("   "), std::invalid_argument);
  CHECK_THROWS_AS(ActionText("Move 1 2\nCheck"), std::invalid_argument);
}

TEST_CASE("text helpers") {
  CHECK(text::fixed2(-0.001) == "0.00");
  CHECK(text::fixed2(-0.97) == "-0.97");
  CHECK(text::decimal(1.0) == "1.0");
  CHECK(text::decimal(-2.5) == "-2.5");
  CHECK(text::decimal(0.25) == "0.25");
  CHECK(text::parse_double("1.5") == 1.5);
  CHECK_FALSE(text::parse_double("1.5x"));
  CHECK_FALSE(text::parse_double("nan"));
  CHECK(text::parse_int("-3") == -3);
  CHECK(text::iequals("CHECK", "check"));
}

TEST_CASE("rng is reproducible") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.index(7) == b.index(7));
  Rng c(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = c.unit();
    CHECK((u >= 0.0 && u < 1.0));
  }
}

TEST_CASE("step accounting counts every action, parseable or not") {
  for (const auto& base : all_tasks()) {
    auto env = make_env(base);
    const auto out = env->step("frobnicate");
    CHECK(out.observation == kInvalidAction);
    CHECK_FALSE(out.done);
    env->step("Help");
    env->step("   check   ");
    CHECK(env->steps_used() == 3);
    CHECK(env->transcript().steps_used() == 3);
  }
}

TEST_CASE("budget exhaustion ends the episode") {
  auto spec = TaskSpec::parse("nav/basic");
  auto env = make_env(spec);
  StepOutcome out;
  for (int i = 0; i < 99; ++i) {
    out = env->step("Check");
    REQUIRE_FALSE(out.done);
  }
  out = env->step("Check");
  CHECK(out.budget_exhausted);
  CHECK(out.done);
  CHECK_FALSE(out.success);
  CHECK_THROWS_AS(env->step("Check"), UsageError);
  CHECK(env->steps_used() == 100);
}

TEST_CASE("success latches") {
  auto env = make_env(TaskSpec::parse("nav/basic"));
  env->step("Right");
  env->step("Pick");
  const auto out = env->step("Right");
  CHECK(out.success);
  CHECK(out.done);
  CHECK_FALSE(out.budget_exhausted);
  CHECK_THROWS_AS(env->step("Left"), UsageError);
}

TEST_CASE("history markers") {
  auto env = make_env(TaskSpec::parse("arm/basic"));
  env->step("Check");
  const int before = env->steps_used();
  env->mark_history();
  CHECK(env->steps_used() == before);
  CHECK(env->transcript().since_marker().empty());
  for (int i = 0; i < 3; ++i) env->step("Check");
  CHECK(env->transcript().since_marker().size() == 3);
  env->mark_history();
  env->mark_history();
  CHECK(env->transcript().since_marker().empty());
  CHECK(env->transcript().entries().size() == 4);
}

TEST_CASE("transcript JSON lines round-trip") {
  Transcript t;
  t.append("Check", "line one\nline \"two\"");
  t.mark();
  t.append("Move 1 2", "Success!");
  const auto jsonl = t.to_jsonl();
  CHECK(jsonl ==
        "{\"i\":0,\"a\":\"Check\",\"o\":\"line one\\nline \\\"two\\\"\",\"marker\":false}\n"
        "{\"i\":1,\"a\":\"Move 1 2\",\"o\":\"Success!\",\"marker\":true}\n");
  CHECK(Transcript::from_jsonl(jsonl) == t);
}

TEST_CASE("replay determinism across all tasks") {
  const std::vector<std::string> script{"Check", "Move 2.0 0.0", "Right", "Add red to A", "Check A",
                                        "Pick 1", "Place 2", "Stash", "Retrieve", "Inspect",
                                        "Forward", "Clean A", "Pick", "Help"};
  for (auto spec : all_tasks()) {
    spec.seed = 17;
    auto a = make_env(spec);
    auto b = make_env(spec);
    CHECK(a->describe() == b->describe());
    for (const auto& cmd : script) {
      if (a->done()) break;
      CHECK(a->step(cmd).observation == b->step(cmd).observation);
    }
    CHECK(a->transcript().to_jsonl() == b->transcript().to_jsonl());
  }
}

TEST_CASE("perturbed descriptions disclose nothing beyond the basic ones") {
  for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
    for (const char* family : {"arm", "nav", "blocks-single", "blocks-multiple"}) {
      auto basic = TaskSpec::parse(std::string(family) + "/basic");
      auto perturbed = TaskSpec::parse(std::string(family) + "/perturbed");
      basic.seed = perturbed.seed = seed;
      CHECK(make_env(basic)->describe() == make_env(perturbed)->describe());
    }
    for (const char* variant : {"contaminated", "wronglabel"}) {
      auto basic = TaskSpec::parse("color/basic");
      auto perturbed = TaskSpec::parse(std::string("color/") + variant);
      basic.seed = perturbed.seed = seed;
      CHECK(make_env(basic)->describe() == make_env(perturbed)->describe());
    }
  }
}
