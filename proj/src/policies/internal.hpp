#pragma once

#include <deque>
#include <memory>
#include <string>

#include "seekbench/envs/arm.hpp"
#include "seekbench/envs/blocks.hpp"
#include "seekbench/envs/color.hpp"
#include "seekbench/envs/nav.hpp"
#include "seekbench/policies/policies.hpp"

namespace seekbench::policies::detail {

/// Emits a precomputed command list, then stops.
class ScriptPolicy : public Policy {
 public:
  explicit ScriptPolicy(std::deque<std::string> commands) : commands_(std::move(commands)) {}
  std::optional<std::string> next(std::string_view) override {
    if (commands_.empty()) return std::nullopt;
    auto c = std::move(commands_.front());
    commands_.pop_front();
    return c;
  }

 private:
  std::deque<std::string> commands_;
};

std::unique_ptr<Policy> arm_policy(Kind kind, const arm::PublicArmTask& task);
std::unique_ptr<Policy> nav_policy(Kind kind, const nav::PublicNavTask& task);
std::unique_ptr<Policy> color_policy(Kind kind, const color::PublicColorTask& task);
std::unique_ptr<Policy> blocks_policy(Kind kind, const blocks::PublicBlocksTask& task);

/// Probe commands tried in order until one commits.
const std::vector<arm::Point>& arm_probes();

/// Rounds to the two decimals shown by Check.
arm::Point round2(const arm::Point& p);

}  // namespace seekbench::policies::detail
