#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seekbench/core/environment.hpp"
#include "seekbench/envs/arm.hpp"
#include "seekbench/envs/blocks.hpp"

namespace seekbench::agent {
class Backend;
}

namespace seekbench::policies {

/// Hand-written controller that reads observations and emits commands.
class Policy {
 public:
  virtual ~Policy() = default;
  /// Next command given the previous observation (empty before the first
  /// step); nullopt ends the episode early.
  virtual std::optional<std::string> next(std::string_view last_observation) = 0;
};

enum class Kind {
  naive,   // trusts the described dynamics, plans once, never looks back
  seeker,  // probes, measures the discrepancy, then plans with the correction
};

std::string_view to_string(Kind k);
/// Throws UsageError for unknown names.
Kind parse_kind(std::string_view name);

/// Builds the policy for env's family from what the agent is allowed to know
/// (each env's public_task()).
std::unique_ptr<Policy> make_policy(Kind kind, const Environment& env);

struct PolicyRun {
  bool success = false;
  int steps_used = 0;
};

/// Steps until success, budget exhaustion or the policy stops.
PolicyRun run_policy(Environment& env, Policy& policy);

// Arm route planning, exposed for tests and the rule backend.

/// Gripper positions (in executed coordinates) that reach `goal` from `start`
/// through at most three intermediate waypoints without a collision. The
/// waypoints sit on odd multiples of 0.25.
std::optional<std::vector<arm::Point>> plan_arm_route(std::span<const arm::Obstacle> obstacles,
                                                      const arm::ArmConfig& start, const arm::Point& goal);

/// "Move x y" with two decimals.
std::string move_command(const arm::Point& commanded);

/// Reads "Joint positions: ..." back into joint and gripper positions.
std::optional<arm::Pose> parse_arm_check(std::string_view observation);

/// Shortest sequence of block moves (Pick/Retrieve followed by Place/Stash)
/// that reaches the goal; nullopt when none exists.
std::optional<std::vector<std::string>> plan_blocks(const std::vector<blocks::Stack>& stacks,
                                                    const std::optional<blocks::Block>& inventory,
                                                    const std::vector<blocks::Stack>& goal);

/// A deterministic stand-in for a model on arm tasks. It answers seek
/// prompts with a probe move and a Check, extraction prompts with the
/// measured offset, and plan prompts with an offset-compensated route
/// (Kind::seeker) or the nominal route (Kind::naive). React prompts get "End".
std::unique_ptr<agent::Backend> make_arm_rule_backend(Kind kind, const arm::PublicArmTask& task);

}  // namespace seekbench::policies
