#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "seekbench/core/task_spec.hpp"
#include "seekbench/core/transcript.hpp"

namespace seekbench {

inline constexpr std::string_view kInvalidAction =
    "Invalid action. Type 'Help' for available actions.";

struct StepOutcome {
  std::string observation;
  bool done = false;
  bool success = false;
  bool budget_exhausted = false;
};

/// Text environment contract shared by every task family.
///
/// Every call to step() costs exactly one unit of the step budget, whether or
/// not the command parses. The episode ends on success or when the budget is
/// spent; afterwards step() throws UsageError.
class Environment {
 public:
  explicit Environment(TaskSpec spec);
  virtual ~Environment() = default;

  Environment(const Environment&) = delete;
  Environment& operator=(const Environment&) = delete;

  const TaskSpec& spec() const noexcept { return spec_; }

  /// Goal statement and action menu; never discloses hidden perturbations.
  virtual std::string describe() const = 0;

  StepOutcome step(const ActionText& action);
  StepOutcome step(std::string_view action) { return step(ActionText(action)); }

  /// Places a history-reset boundary in the transcript.
  void mark_history() { transcript_.mark(); }

  const Transcript& transcript() const noexcept { return transcript_; }
  int steps_used() const noexcept { return static_cast<int>(transcript_.steps_used()); }
  int step_budget() const noexcept { return spec_.step_budget; }
  bool done() const noexcept { return done_; }
  bool success() const noexcept { return success_; }

 protected:
  /// Runs a family command; nullopt when the text is not in the grammar.
  virtual std::optional<std::string> execute(std::string_view command) = 0;
  /// The action menu returned for "Help".
  virtual std::string help() const = 0;
  virtual bool goal_reached() const = 0;

 private:
  TaskSpec spec_;
  Transcript transcript_;
  bool done_ = false;
  bool success_ = false;
};

/// Builds the seeded initial state for any of the eleven tasks.
std::unique_ptr<Environment> make_env(const TaskSpec& spec);

}  // namespace seekbench
