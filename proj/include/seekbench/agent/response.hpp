#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace seekbench::agent {

/// Raised when a completion has no usable JSON object or lacks the plan key.
class MalformedResponse : public std::runtime_error {
 public:
  MalformedResponse(const std::string& reason, std::string raw);
  const std::string& raw() const noexcept { return raw_; }

 private:
  std::string raw_;
};

enum class PlanShape {
  steps,          // {"Reasoning", "Steps": [{"Goal", "Action Plan": [...]}]}
  solution_plan,  // {"Reasoning", "Solution Plan": [...]}
  full_plan,      // {"Reasoning", "Full Plan": [...]}
};

struct PlanStep {
  std::string goal;
  std::vector<std::string> actions;
};

struct PlanResponse {
  std::string reasoning;
  std::vector<PlanStep> steps;  // flat plans are a single step with an empty goal

  std::vector<std::string> actions() const;
};

/// The first complete JSON object embedded in `text`, skipping code fences
/// and surrounding prose.
std::optional<nlohmann::json> first_json_object(std::string_view text);

/// Throws MalformedResponse when no object parses, the shape's key is
/// missing, an action is not a single-line string, or the plan is empty.
PlanResponse parse_plan_response(std::string_view text, PlanShape shape);

}  // namespace seekbench::agent
