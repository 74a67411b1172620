#include "seekbench/harness/classify.hpp"

#include <fmt/format.h>

#include "seekbench/core/errors.hpp"
#include "seekbench/core/text.hpp"

namespace seekbench::harness {

FailureCategory rule_stub_category(const agent::AgentRun& run, const agent::AgentConfig& config) {
  int seek_steps = 0;
  bool informed = false;
  for (const auto& a : run.attempts) {
    seek_steps += a.seek_steps;
    const auto info = text::trim(a.information);
    if (!info.empty() && info != "None") informed = true;
  }
  if (seek_steps == 0) return FailureCategory::information_seeking;
  if (config.extract_enabled && !informed) return FailureCategory::information_extraction;
  return FailureCategory::long_horizon;
}

std::optional<FailureCategory> parse_category_reply(std::string_view reply) {
  const std::string lower = text::to_lower(reply);
  std::optional<FailureCategory> best;
  std::size_t best_pos = std::string::npos;
  for (const auto c : {FailureCategory::information_seeking, FailureCategory::information_extraction,
                       FailureCategory::instruction_understanding, FailureCategory::long_horizon}) {
    const auto pos = lower.find(text::to_lower(to_string(c)));
    if (pos < best_pos) {
      best_pos = pos;
      best = c;
    }
  }
  return best;
}

std::string classifier_prompt(const agent::PromptSet& prompts, const std::string& domain, const agent::AgentRun& run) {
  std::vector<std::string> info;
  for (const auto& a : run.attempts) {
    if (!a.information.empty()) info.push_back(fmt::format("Attempt {}: {}", a.attempt, a.information));
  }
  return agent::render_prompt(prompts.failure_classifier,
                              {{std::string(agent::kDomainDesc), domain},
                               {std::string(agent::kInteractionHistory), agent::render_history(run.history)},
                               {std::string(agent::kInformation), info.empty() ? "None" : text::join(info, "\n")}});
}

void classify_failure(RunRecord& record, const agent::AgentRun& run, const agent::AgentConfig& config,
                      const agent::PromptSet& prompts, const std::string& domain, agent::Backend* backend) {
  if (record.success) throw UsageError("classify_failure: run " + record.id + " succeeded");
  if (!backend) {
    record.failure_category = rule_stub_category(run, config);
    return;
  }
  const auto reply = backend->complete({{"user", classifier_prompt(prompts, domain, run)}});
  record.failure_category = parse_category_reply(reply);
  record.classification_flagged = !record.failure_category;
}

}  // namespace seekbench::harness
