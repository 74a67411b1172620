#pragma once

#include <optional>
#include <string>

#include "seekbench/agent/backend.hpp"
#include "seekbench/agent/loop.hpp"
#include "seekbench/agent/prompts.hpp"
#include "seekbench/harness/experiment.hpp"

namespace seekbench::harness {

/// Deterministic stand-in used with scripted backends: no exploration at all
/// is InformationSeeking, exploration with an empty summary is
/// InformationExtraction, anything else is LongHorizonPlanning.
FailureCategory rule_stub_category(const agent::AgentRun& run, const agent::AgentConfig& config);

/// First category name found in a model reply (case-insensitive).
std::optional<FailureCategory> parse_category_reply(std::string_view reply);

/// Renders the classifier prompt for a failed run.
std::string classifier_prompt(const agent::PromptSet& prompts, const std::string& domain, const agent::AgentRun& run);

/// Stores a category on `record`, or sets classification_flagged when the
/// reply names none. Throws UsageError on a successful record.
void classify_failure(RunRecord& record, const agent::AgentRun& run, const agent::AgentConfig& config,
                      const agent::PromptSet& prompts, const std::string& domain, agent::Backend* backend);

}  // namespace seekbench::harness
