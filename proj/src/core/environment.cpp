#include "seekbench/core/environment.hpp"

#include "seekbench/core/errors.hpp"
#include "seekbench/core/text.hpp"

namespace seekbench {

Environment::Environment(TaskSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

StepOutcome Environment::step(const ActionText& action) {
  if (done_) {
    throw UsageError("step() called on a finished episode (" + spec_.id() + ")");
  }
  const std::string_view command = action.str();
  std::string observation;
  if (text::iequals(command, "help")) {
    observation = help();
  } else {
    observation = execute(command).value_or(std::string(kInvalidAction));
  }
  transcript_.append(action.str(), observation);

  StepOutcome outcome;
  outcome.observation = std::move(observation);
  success_ = goal_reached();
  outcome.success = success_;
  outcome.budget_exhausted = !success_ && steps_used() >= spec_.step_budget;
  done_ = outcome.success || outcome.budget_exhausted;
  outcome.done = done_;
  return outcome;
}

}  // namespace seekbench
