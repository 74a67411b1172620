#include <algorithm>
#include <cstdlib>
#include <cmath>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "internal.hpp"
#include "seekbench/agent/backend.hpp"
#include "seekbench/core/text.hpp"

namespace seekbench::policies {

namespace {

using arm::ArmConfig;
using arm::Point;

struct Reading {
  int last_attempt = 0;  // highest "## Attempt n" header
  std::optional<Point> offset;
  std::optional<ArmConfig> config;
};

std::optional<Point> parse_move(std::string_view action) {
  const auto tokens = text::split_ws(action);
  if (tokens.size() != 3 || !text::iequals(tokens[0], "move")) return std::nullopt;
  const auto x = text::parse_double(tokens[1]);
  const auto y = text::parse_double(tokens[2]);
  if (!x || !y) return std::nullopt;
  return Point(*x, *y);
}

// Scans "- Act:"/"- Obs:" pairs. A Check right after a successful Move gives
// the offset; the last Check gives the pose.
Reading read_history(std::string_view prompt) {
  Reading r;
  std::optional<Point> last_success;
  std::istringstream in{std::string(prompt)};
  std::string line;
  std::string action;
  while (std::getline(in, line)) {
    if (line.rfind("## Attempt ", 0) == 0) {
      r.last_attempt = std::max(r.last_attempt, std::atoi(line.c_str() + 11));
      continue;
    }
    if (line.rfind("- Act: ", 0) == 0) {
      action = line.substr(7);
      continue;
    }
    if (line.rfind("- Obs: ", 0) != 0) continue;
    const std::string obs = line.substr(7);
    if (const auto move = parse_move(action)) {
      last_success = obs == arm::kMoveSuccess ? move : std::nullopt;
      continue;
    }
    if (const auto pose = parse_arm_check(obs)) {
      if (last_success) r.offset = detail::round2(pose->gripper - *last_success);
      const double shoulder = std::atan2(pose->joint1.y(), pose->joint1.x());
      const Point fore = pose->gripper - pose->joint1;
      ArmConfig estimate{shoulder, arm::wrap_angle(std::atan2(fore.y(), fore.x()) - shoulder)};
      // Snap to the exact configuration when the gripper position is known exactly.
      if (last_success && arm::reachable(*last_success + *r.offset)) {
        estimate = arm::inverse_kinematics(*last_success + *r.offset, estimate);
      }
      r.config = estimate;
    }
    last_success.reset();
  }
  return r;
}

std::string json_reply(const nlohmann::json& j) { return j.dump(4); }

class ArmRuleBackend final : public agent::Backend {
 public:
  ArmRuleBackend(Kind kind, arm::PublicArmTask task) : kind_(kind), task_(std::move(task)) {}

  std::string complete(const std::vector<agent::Message>& messages) override {
    const std::string& prompt = messages.empty() ? empty_ : messages.back().content;
    const Reading seen = read_history(prompt);
    if (prompt.find("\"Steps\"") != std::string::npos) return seek_reply(seen);
    if (prompt.find("Extract the key insights") != std::string::npos) return extract_reply(seen);
    if (prompt.find("Solution Plan") != std::string::npos || prompt.find("Full Plan") != std::string::npos) {
      return plan_reply(seen);
    }
    if (prompt.find("Answer with the category name only") != std::string::npos) {
      return kind_ == Kind::seeker ? "LongHorizonPlanning" : "InformationSeeking";
    }
    return "End";
  }

  nlohmann::json info() const override { return {{"model", fmt::format("rule-{}", to_string(kind_))}}; }

 private:
  // Three probes per attempt, each followed by Check; later attempts move on
  // to the next three.
  std::string seek_reply(const Reading& seen) const {
    nlohmann::json steps = nlohmann::json::array();
    if (kind_ == Kind::seeker && !seen.offset) {
      const auto& probes = detail::arm_probes();
      for (std::size_t k = 0; k < 3; ++k) {
        const Point& p = probes[(3 * static_cast<std::size_t>(seen.last_attempt) + k) % probes.size()];
        steps.push_back({{"Goal", "Compare a commanded move with the reported gripper position"},
                         {"Action Plan", {move_command(p), "Check"}}});
      }
    } else {
      steps.push_back({{"Goal", "Read the arm pose"}, {"Action Plan", {"Check"}}});
    }
    return json_reply({{"Reasoning", "Probe the arm before planning."}, {"Steps", steps}});
  }

  std::string extract_reply(const Reading& seen) const {
    if (kind_ != Kind::seeker || !seen.offset) return "Moves behave as described.";
    return fmt::format("The gripper lands at the commanded point shifted by ({}, {}).",
                       text::fixed2(seen.offset->x()), text::fixed2(seen.offset->y()));
  }

  std::string plan_reply(const Reading& seen) const {
    const Point offset = kind_ == Kind::seeker && seen.offset ? *seen.offset : Point::Zero();
    const ArmConfig start = seen.config.value_or(task_.initial);
    nlohmann::json plan = nlohmann::json::array();
    if (const auto route = plan_arm_route(task_.obstacles, start, task_.target)) {
      for (const auto& w : *route) plan.push_back(move_command(w - offset));
    }
    plan.push_back("Check");
    return json_reply({{"Reasoning", "Route around the obstacles."}, {"Solution Plan", plan}, {"Full Plan", plan}});
  }

  Kind kind_;
  arm::PublicArmTask task_;
  std::string empty_;
};

}  // namespace

std::unique_ptr<agent::Backend> make_arm_rule_backend(Kind kind, const arm::PublicArmTask& task) {
  return std::make_unique<ArmRuleBackend>(kind, task);
}

}  // namespace seekbench::policies
