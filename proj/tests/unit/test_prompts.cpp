#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "seekbench/agent/prompts.hpp"
#include "test_support.hpp"

using namespace seekbench::agent;
using Catch::Matchers::ContainsSubstring;
using test_support::golden;

namespace {

Bindings bindings_from(const std::string& file) {
  Bindings b;
  const auto j = nlohmann::json::parse(golden(file));
  for (const auto& [k, v] : j.items()) b[k] = v.get<std::string>();
  return b;
}

const Bindings kAll{{"domain_desc", "DOMAIN"}, {"interaction_history", "HISTORY"}, {"information", "INFO"}};

}  // namespace

TEST_CASE("templates match the reference listings byte for byte") {
  const auto p = PromptSet::builtin();
  CHECK(p.seek_initial == golden("seek_initial.txt"));
  CHECK(p.seek_with_history == golden("seek_with_history.txt"));
  CHECK(p.plan == golden("plan.txt"));
  CHECK(p.uncertainty_preamble == golden("uncertainty_preamble.txt"));
  CHECK(p.icl.starts_with(golden("icl_prefix.txt")));
}

TEST_CASE("rendered baseline prompts match goldens") {
  const auto p = PromptSet::builtin();
  CHECK(render_prompt(p.llm3_backtrack, bindings_from("llm3_backtrack.bindings.json")) == golden("llm3_backtrack.txt"));
  CHECK(render_prompt(p.llm3_from_scratch, bindings_from("llm3_from_scratch.bindings.json")) ==
        golden("llm3_from_scratch.txt"));
  CHECK(render_prompt(p.react_fewshot, bindings_from("react_fewshot.bindings.json")) == golden("react_fewshot.txt"));
}

TEST_CASE("seek prompt keeps the urgency line") {
  const auto p = PromptSet::builtin();
  const auto out = render_prompt(p.seek_initial, {{"domain_desc", "D"}});
  CHECK_THAT(out, ContainsSubstring("You have VERY FEW turns left."));
  CHECK_THAT(out, ContainsSubstring("# Domain Description\nD\n"));
}

TEST_CASE("empty history renders the no-plan sentinel") {
  CHECK(render_history({}) == "No previous plan");
  const auto p = PromptSet::builtin();
  const auto out = render_prompt(p.llm3_from_scratch, {{"domain_desc", "D"}, {"interaction_history", render_history({})}});
  CHECK_THAT(out, ContainsSubstring("The trace is: \nNo previous plan"));
}

TEST_CASE("missing bindings are reported by name") {
  const auto p = PromptSet::builtin();
  try {
    render_prompt(p.plan, {{"domain_desc", "D"}, {"interaction_history", "H"}});
    FAIL("expected RenderError");
  } catch (const RenderError& e) {
    CHECK_THAT(std::string(e.what()), ContainsSubstring("{information}"));
  }
}

TEST_CASE("placeholders and residual braces") {
  const auto p = PromptSet::builtin();
  CHECK(placeholders(p.plan) == std::vector<std::string>{"domain_desc", "interaction_history", "information"});
  CHECK(placeholders(p.seek_initial) == std::vector<std::string>{"domain_desc"});
  for (const auto* t : {&p.seek_initial, &p.seek_with_history, &p.extract, &p.plan, &p.llm3_backtrack,
                        &p.llm3_from_scratch, &p.react_fewshot, &p.icl, &p.uncertainty_preamble,
                        &p.failure_classifier}) {
    CHECK(placeholders(render_prompt(*t, kAll)).empty());
  }
  CHECK(render_prompt("a {x} b {x}", {{"x", "1"}}) == "a 1 b 1");
  CHECK(render_prompt("{\n  \"k\": 1\n}", {}) == "{\n  \"k\": 1\n}");
  CHECK(render_prompt("{x}", {{"x", "{y}"}}) == "{y}");
}

TEST_CASE("validate rejects unknown placeholders") {
  auto p = PromptSet::builtin();
  CHECK_NOTHROW(p.validate());
  p.plan += "{goal}";
  CHECK_THROWS_AS(p.validate(), RenderError);
}

TEST_CASE("prompt overrides from a directory") {
  const auto dir = std::filesystem::temp_directory_path() / "seekbench_prompt_override";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "plan.txt") << "PLAN {domain_desc}";
  const auto p = PromptSet::load(dir.string());
  CHECK(p.plan == "PLAN {domain_desc}");
  CHECK(p.seek_initial == PromptSet::builtin().seek_initial);
  std::filesystem::remove_all(dir);
}

TEST_CASE("history rendering") {
  const std::vector<HistoryItem> items{
      {1, "seek", "probe", "Move 2.0 0.0", "Success!"},
      {1, "seek", "probe", "Check", "pose"},
      {1, "seek", "look around", "Help", "menu"},
      {1, "plan", "", "Move 1.0 2.0", "Success!"},
      {2, "seek", "again", "Check", "pose2"},
  };
  CHECK(render_history(items) ==
        "## Attempt 1, exploration step 1: probe\n"
        "- Act: Move 2.0 0.0\n- Obs: Success!\n"
        "- Act: Check\n- Obs: pose\n"
        "\n## Attempt 1, exploration step 2: look around\n"
        "- Act: Help\n- Obs: menu\n"
        "\n## Attempt 1, plan execution\n"
        "- Act: Move 1.0 2.0\n- Obs: Success!\n"
        "\n## Attempt 2, exploration step 1: again\n"
        "- Act: Check\n- Obs: pose2");
  const std::vector<HistoryItem> react{{1, "think", "", "think: go", "OK."}, {1, "react", "", "Check", "pose"}};
  CHECK(render_react_history(react) == "> think: go\nOK.\n> Check\npose");
}
