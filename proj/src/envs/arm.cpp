#include "seekbench/envs/arm.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "seekbench/core/errors.hpp"
#include "seekbench/core/rng.hpp"
#include "seekbench/core/text.hpp"

namespace seekbench::arm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBranchTie = 1e-12;

Point read_point(const nlohmann::json& j, std::string_view what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw InvalidTask(fmt::format("arm param '{}' must be [x, y]", what));
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

std::string format_point(const Point& p) {
  return fmt::format("[{}, {}]", text::decimal(p.x()), text::decimal(p.y()));
}

}  // namespace

double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * kPi);  // [-pi, pi]
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

Pose forward_kinematics(double shoulder, double elbow) {
  const Point joint1 = kUpperLink * Point(std::cos(shoulder), std::sin(shoulder));
  const double reach = shoulder + elbow;
  return {joint1, joint1 + kForearm * Point(std::cos(reach), std::sin(reach))};
}

Point ArmConfig::joint1() const { return forward_kinematics(shoulder, elbow).joint1; }
Point ArmConfig::gripper() const { return forward_kinematics(shoulder, elbow).gripper; }

Unreachable::Unreachable(double distance, double inner, double outer)
    : std::runtime_error(fmt::format("target at distance {:.4f} is outside the reach annulus [{}, {}]",
                                     distance, inner, outer)),
      distance_(distance),
      inner_(inner),
      outer_(outer) {}

bool reachable(const Point& target) {
  const double r = target.norm();
  return r >= kInnerReach && r <= kOuterReach;
}

ArmConfig inverse_kinematics(const Point& target, const ArmConfig& current) {
  if (!reachable(target)) throw Unreachable(target.norm(), kInnerReach, kOuterReach);

  const double r2 = target.squaredNorm();
  const double c = std::clamp((r2 - kUpperLink * kUpperLink - kForearm * kForearm) /
                                  (2.0 * kUpperLink * kForearm),
                              -1.0, 1.0);
  const double bearing = std::atan2(target.y(), target.x());

  std::array<ArmConfig, 2> branches;
  for (int i = 0; i < 2; ++i) {
    const double elbow = (i == 0 ? 1.0 : -1.0) * std::acos(c);
    const double shoulder =
        bearing - std::atan2(kForearm * std::sin(elbow), kUpperLink + kForearm * std::cos(elbow));
    branches[i] = {wrap_angle(shoulder), wrap_angle(elbow)};
  }
  auto cost = [&](const ArmConfig& q) {
    return std::abs(wrap_angle(q.shoulder - current.shoulder)) + std::abs(wrap_angle(q.elbow - current.elbow));
  };
  // branches[0] has elbow >= 0 and wins ties
  return cost(branches[1]) < cost(branches[0]) - kBranchTie ? branches[1] : branches[0];
}

double segment_circle_min_distance(const Point& p, const Point& q, const Obstacle& c) {
  const Point d = q - p;
  const double len2 = d.squaredNorm();
  const double t = len2 == 0.0 ? 0.0 : std::clamp((c.center - p).dot(d) / len2, 0.0, 1.0);
  return (p + t * d - c.center).norm();
}

PathCheck path_collision_check(const ArmConfig& from, const ArmConfig& to, std::span<const Obstacle> obstacles) {
  const double d_shoulder = wrap_angle(to.shoulder - from.shoulder);
  const double d_elbow = wrap_angle(to.elbow - from.elbow);
  for (int k = 0; k <= kPathSegments; ++k) {
    const double s = static_cast<double>(k) / kPathSegments;
    const Pose pose = forward_kinematics(from.shoulder + s * d_shoulder, from.elbow + s * d_elbow);
    for (const auto& o : obstacles) {
      if (segment_circle_min_distance(Point::Zero(), pose.joint1, o) < o.radius ||
          segment_circle_min_distance(pose.joint1, pose.gripper, o) < o.radius) {
        return PathCheck::colliding;
      }
    }
  }
  return PathCheck::clear;
}

std::string format_check(const ArmConfig& config) {
  const Pose pose = forward_kinematics(config.shoulder, config.elbow);
  return fmt::format("Joint positions: 'Joint 0': [{}, {}] 'Joint 1': [{}, {}] 'Gripper': [{}, {}]",
                     text::fixed2(0.0), text::fixed2(0.0), text::fixed2(pose.joint1.x()),
                     text::fixed2(pose.joint1.y()), text::fixed2(pose.gripper.x()), text::fixed2(pose.gripper.y()));
}

std::vector<Obstacle> obstacle_ring() {
  return {
      {{0.0, 3.0}, 0.5},  {{2.0, 2.0}, 0.5},   {{-2.0, 2.0}, 0.5},  {{2.5, 1.0}, 0.5},   {{-2.5, 1.0}, 0.5},
      {{0.0, -3.0}, 0.5}, {{2.0, -2.0}, 0.5},  {{-2.0, -2.0}, 0.5}, {{2.5, -1.0}, 0.5},  {{-2.5, -1.0}, 0.5},
  };
}

ArmEnv::ArmEnv(TaskSpec spec) : Environment(std::move(spec)) {
  const auto& s = this->spec();
  if (s.family != Family::arm) throw InvalidTask("ArmEnv requires an arm task, got " + s.id());
  const auto& params = s.params;

  task_.obstacles = obstacle_ring();
  if (s.variant == Variant::perturbed) {
    static constexpr std::array<double, 6> kMagnitudes{-1.0, -0.5, -0.1, 0.1, 0.5, 1.0};
    Rng rng(s.seed);
    const double dx = kMagnitudes[rng.index(kMagnitudes.size())];
    const double dy = kMagnitudes[rng.index(kMagnitudes.size())];
    task_.offset = {dx, dy};
  }

  if (params.contains("target")) task_.target = read_point(params["target"], "target");
  if (params.contains("obstacles")) {
    task_.obstacles.clear();
    for (const auto& o : params["obstacles"]) {
      if (!o.is_array() || o.size() != 3) throw InvalidTask("arm param 'obstacles' entries must be [x, y, r]");
      const Obstacle obstacle{{o[0].get<double>(), o[1].get<double>()}, o[2].get<double>()};
      if (!(obstacle.radius > 0.0)) throw InvalidTask("arm obstacle radius must be positive");
      task_.obstacles.push_back(obstacle);
    }
  }
  if (params.contains("offset")) task_.offset = read_point(params["offset"], "offset");

  if (s.variant == Variant::basic && !task_.offset.isZero(0.0)) {
    throw InvalidTask("arm/basic must not carry an actuation offset");
  }
  if (!reachable(task_.target)) {
    throw InvalidTask(fmt::format("arm target {} is outside the reach annulus", format_point(task_.target)));
  }
}

std::string ArmEnv::describe() const {
  std::string obstacles;
  for (std::size_t i = 0; i < task_.obstacles.size(); ++i) {
    obstacles += fmt::format("{} {} radius {}", i ? "," : "", format_point(task_.obstacles[i].center),
                             text::decimal(task_.obstacles[i].radius));
  }
  return fmt::format(
      "The tabletop environment has a robot arm, several obstacles and a goal location.\n"
      "The robot arm has two joints and a gripper, the goal is to move the gripper to {}, while avoid "
      "collision with the obstacles at,{} .\n"
      "\n"
      "The robot arm has the following primitive actions:\n"
      "{}\n"
      "\n"
      "The initial environment state is:\n"
      "{}",
      format_point(task_.target), obstacles, help(), format_check(ArmConfig{}));
}

std::string ArmEnv::help() const {
  return "1) Move x y: Move the gripper to (x, y). The rotation of the joints will be calculated by inverse "
         "kinematics\n"
         "2) Check: Check Robot arm joint positions\n"
         "3) Help: View the available action options.";
}

std::string ArmEnv::apply_move(double commanded_x, double commanded_y) {
  const Point executed = Point(commanded_x, commanded_y) + task_.offset;
  if (!reachable(executed)) return std::string(kMoveOutOfReach);
  const ArmConfig next = inverse_kinematics(executed, config_);
  if (path_collision_check(config_, next, task_.obstacles) == PathCheck::colliding) {
    return std::string(kMoveCollision);
  }
  config_ = next;
  reached_ = (config_.gripper() - task_.target).norm() <= task_.reach_tolerance;
  return std::string(kMoveSuccess);
}

std::optional<std::string> ArmEnv::execute(std::string_view command) {
  const auto tokens = text::split_ws(command);
  if (tokens.size() == 1 && text::iequals(tokens[0], "check")) return check();
  if (tokens.size() == 3 && text::iequals(tokens[0], "move")) {
    const auto x = text::parse_double(tokens[1]);
    const auto y = text::parse_double(tokens[2]);
    if (x && y) return apply_move(*x, *y);
  }
  return std::nullopt;
}

bool ArmEnv::goal_reached() const { return reached_; }

}  // namespace seekbench::arm
