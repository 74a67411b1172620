#include "seekbench/agent/response.hpp"

#include <fmt/format.h>

#include "seekbench/core/text.hpp"

namespace seekbench::agent {

MalformedResponse::MalformedResponse(const std::string& reason, std::string raw)
    : std::runtime_error(reason), raw_(std::move(raw)) {}

std::vector<std::string> PlanResponse::actions() const {
  std::vector<std::string> out;
  for (const auto& s : steps) out.insert(out.end(), s.actions.begin(), s.actions.end());
  return out;
}

namespace {

// End of the balanced object starting at `open`, honoring JSON strings.
std::optional<std::size_t> matching_brace(std::string_view s, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (c == '\\') ++i;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == '{') ++depth;
    else if (c == '}' && --depth == 0) return i;
  }
  return std::nullopt;
}

const nlohmann::json* find_key(const nlohmann::json& obj, std::string_view key) {
  if (const auto it = obj.find(std::string(key)); it != obj.end()) return &*it;
  for (const auto& [k, v] : obj.items()) {
    if (text::iequals(k, key)) return &v;
  }
  return nullptr;
}

std::vector<std::string> read_actions(const nlohmann::json& list, std::string_view raw) {
  if (!list.is_array()) throw MalformedResponse("action plan is not a list", std::string(raw));
  std::vector<std::string> out;
  for (const auto& a : list) {
    if (!a.is_string()) throw MalformedResponse("action is not a string", std::string(raw));
    const auto s = a.get<std::string>();
    if (s.find_first_of("\r\n") != std::string::npos) {
      throw MalformedResponse("action spans several lines", std::string(raw));
    }
    const auto trimmed = text::trim(s);
    if (!trimmed.empty()) out.emplace_back(trimmed);
  }
  return out;
}

}  // namespace

std::optional<nlohmann::json> first_json_object(std::string_view text) {
  for (std::size_t open = text.find('{'); open != std::string_view::npos; open = text.find('{', open + 1)) {
    const auto close = matching_brace(text, open);
    if (!close) continue;
    auto parsed = nlohmann::json::parse(text.substr(open, *close - open + 1), nullptr, false);
    if (!parsed.is_discarded() && parsed.is_object()) return parsed;
  }
  return std::nullopt;
}

PlanResponse parse_plan_response(std::string_view text, PlanShape shape) {
  const auto obj = first_json_object(text);
  if (!obj) throw MalformedResponse("no JSON object found in the response", std::string(text));

  PlanResponse out;
  if (const auto* r = find_key(*obj, "Reasoning"); r && r->is_string()) out.reasoning = r->get<std::string>();

  if (shape == PlanShape::steps) {
    const auto* steps = find_key(*obj, "Steps");
    if (!steps || !steps->is_array()) throw MalformedResponse("missing \"Steps\" list", std::string(text));
    for (const auto& step : *steps) {
      if (!step.is_object()) throw MalformedResponse("step is not an object", std::string(text));
      PlanStep s;
      if (const auto* g = find_key(step, "Goal"); g && g->is_string()) s.goal = g->get<std::string>();
      const auto* plan = find_key(step, "Action Plan");
      if (!plan) throw MalformedResponse("step without \"Action Plan\"", std::string(text));
      s.actions = read_actions(*plan, text);
      out.steps.push_back(std::move(s));
    }
  } else {
    const std::string_view key = shape == PlanShape::solution_plan ? "Solution Plan" : "Full Plan";
    const auto* plan = find_key(*obj, key);
    if (!plan) throw MalformedResponse(fmt::format("missing \"{}\" list", key), std::string(text));
    out.steps.push_back({"", read_actions(*plan, text)});
  }
  if (out.actions().empty()) throw MalformedResponse("the plan contains no actions", std::string(text));
  return out;
}

}  // namespace seekbench::agent
