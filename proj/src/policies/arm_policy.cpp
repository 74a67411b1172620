#include <cmath>
#include <deque>
#include <regex>
#include <set>

#include <fmt/format.h>

#include "internal.hpp"
#include "seekbench/core/text.hpp"

namespace seekbench::policies {

using arm::ArmConfig;
using arm::Point;

namespace {

constexpr int kMaxWaypoints = 3;
constexpr double kGridStep = 0.25;

// Odd multiples of kGridStep strictly inside the reach annulus.
const std::vector<Point>& waypoint_grid() {
  static const std::vector<Point> grid = [] {
    std::vector<Point> out;
    for (int i = -11; i <= 11; i += 2) {
      for (int j = -11; j <= 11; j += 2) {
        const Point p(i * kGridStep, j * kGridStep);
        const double r = p.norm();
        if (r > arm::kInnerReach + 1e-9 && r < arm::kOuterReach - 1e-9) out.push_back(p);
      }
    }
    return out;
  }();
  return grid;
}

bool clear_move(std::span<const arm::Obstacle> obstacles, const ArmConfig& from, const Point& to, ArmConfig& out) {
  if (!arm::reachable(to)) return false;
  out = arm::inverse_kinematics(to, from);
  return arm::path_collision_check(from, out, obstacles) == arm::PathCheck::clear;
}

std::deque<std::string> commands_for(const std::vector<Point>& route, const Point& offset) {
  std::deque<std::string> out;
  for (const auto& w : route) out.push_back(move_command(w - offset));
  return out;
}

class ArmSeeker final : public Policy {
 public:
  explicit ArmSeeker(arm::PublicArmTask task) : task_(std::move(task)) {}

  std::optional<std::string> next(std::string_view obs) override {
    switch (phase_) {
      case Phase::probe:
        phase_ = Phase::await_move;
        return move_command(detail::arm_probes()[probe_]);
      case Phase::await_move:
        if (obs == arm::kMoveSuccess) {
          phase_ = Phase::await_check;
          return "Check";
        }
        if (++probe_ >= detail::arm_probes().size()) return std::nullopt;
        return move_command(detail::arm_probes()[probe_]);
      case Phase::await_check: {
        const auto pose = parse_arm_check(obs);
        if (!pose) return std::nullopt;
        const Point& probe = detail::arm_probes()[probe_];
        const Point offset = detail::round2(pose->gripper - probe);
        const ArmConfig here = arm::inverse_kinematics(probe + offset, task_.initial);
        const auto route = plan_arm_route(task_.obstacles, here, task_.target);
        if (!route) return std::nullopt;
        queue_ = commands_for(*route, offset);
        phase_ = Phase::execute;
        [[fallthrough]];
      }
      case Phase::execute:
        if (queue_.empty()) return std::nullopt;
        auto c = std::move(queue_.front());
        queue_.pop_front();
        return c;
    }
    return std::nullopt;
  }

 private:
  enum class Phase { probe, await_move, await_check, execute };
  arm::PublicArmTask task_;
  Phase phase_ = Phase::probe;
  std::size_t probe_ = 0;
  std::deque<std::string> queue_;
};

}  // namespace

namespace detail {

const std::vector<Point>& arm_probes() {
  // Together these clear the start pose for any offset in [-1, 1] x [-1, 1].
  static const std::vector<Point> probes{{2.25, 0.0}, {2.0, -0.75}, {2.0, 0.75},   {3.0, -0.5},  {3.0, 0.5},
                                         {1.75, -0.25}, {0.75, 0.75}, {0.5, -1.0}, {2.25, -1.0}, {2.25, 1.0}};
  return probes;
}

Point round2(const Point& p) { return {std::round(p.x() * 100.0) / 100.0, std::round(p.y() * 100.0) / 100.0}; }

std::unique_ptr<Policy> arm_policy(Kind kind, const arm::PublicArmTask& task) {
  if (kind == Kind::seeker) return std::make_unique<ArmSeeker>(task);
  const auto route = plan_arm_route(task.obstacles, task.initial, task.target);
  return std::make_unique<ScriptPolicy>(route ? commands_for(*route, Point::Zero()) : std::deque<std::string>{});
}

}  // namespace detail

std::string move_command(const Point& commanded) {
  return fmt::format("Move {} {}", text::fixed2(commanded.x()), text::fixed2(commanded.y()));
}

std::optional<arm::Pose> parse_arm_check(std::string_view observation) {
  static const std::regex pattern(
      R"('Joint 1': \[(-?[0-9.]+), (-?[0-9.]+)\] 'Gripper': \[(-?[0-9.]+), (-?[0-9.]+)\])");
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_search(observation.begin(), observation.end(), m, pattern)) return std::nullopt;
  double v[4];
  for (int i = 0; i < 4; ++i) {
    const auto parsed = text::parse_double(std::string_view(&*m[i + 1].first, static_cast<std::size_t>(m[i + 1].length())));
    if (!parsed) return std::nullopt;
    v[i] = *parsed;
  }
  return arm::Pose{{v[0], v[1]}, {v[2], v[3]}};
}

std::optional<std::vector<Point>> plan_arm_route(std::span<const arm::Obstacle> obstacles, const ArmConfig& start,
                                                 const Point& goal) {
  if (!arm::reachable(goal)) return std::nullopt;
  struct Node {
    ArmConfig config;
    std::vector<Point> route;
  };
  const auto& grid = waypoint_grid();
  std::deque<Node> frontier{{start, {}}};
  std::set<std::pair<std::size_t, bool>> seen;  // (waypoint, elbow >= 0)
  while (!frontier.empty()) {
    Node node = std::move(frontier.front());
    frontier.pop_front();
    ArmConfig reached;
    if (clear_move(obstacles, node.config, goal, reached)) {
      node.route.push_back(goal);
      return node.route;
    }
    if (static_cast<int>(node.route.size()) >= kMaxWaypoints) continue;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      ArmConfig next;
      if (!clear_move(obstacles, node.config, grid[i], next)) continue;
      if (!seen.insert({i, next.elbow >= 0.0}).second) continue;
      auto route = node.route;
      route.push_back(grid[i]);
      frontier.push_back({next, std::move(route)});
    }
  }
  return std::nullopt;
}

}  // namespace seekbench::policies
