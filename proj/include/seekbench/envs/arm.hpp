#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "seekbench/core/environment.hpp"

namespace seekbench::arm {

using Point = Eigen::Vector2d;

inline constexpr double kUpperLink = 2.0;
inline constexpr double kForearm = 1.0;
inline constexpr double kInnerReach = kUpperLink - kForearm;
inline constexpr double kOuterReach = kUpperLink + kForearm;
inline constexpr int kPathSegments = 64;
inline constexpr double kReachTolerance = 0.05;

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

/// Joint angles of the planar arm; link positions are derived.
struct ArmConfig {
  double shoulder = 0.0;  // angle of the upper link from +x
  double elbow = 0.0;     // angle of the forearm relative to the upper link

  Point joint0() const { return Point::Zero(); }
  Point joint1() const;
  Point gripper() const;

  bool operator==(const ArmConfig&) const = default;
};

struct Pose {
  Point joint1;
  Point gripper;
};

Pose forward_kinematics(double shoulder, double elbow);

class Unreachable : public std::runtime_error {
 public:
  Unreachable(double distance, double inner, double outer);
  double distance() const noexcept { return distance_; }
  double inner() const noexcept { return inner_; }
  double outer() const noexcept { return outer_; }

 private:
  double distance_;
  double inner_;
  double outer_;
};

bool reachable(const Point& target);

/// Closed-form two-link solution for `target`.
///
/// Of the two elbow branches, returns the one closest to `current` in joint
/// space (sum of wrapped angle differences). On an exact tie the branch with
/// a non-negative elbow angle is chosen, which from the straight pose puts
/// joint 1 below the shoulder-to-target line. Throws Unreachable outside the
/// annulus kInnerReach <= |target| <= kOuterReach.
ArmConfig inverse_kinematics(const Point& target, const ArmConfig& current);

struct Obstacle {
  Point center;
  double radius = 0.5;
};

/// Distance from segment pq to `c`'s center; the link collides iff the
/// result is below c.radius.
double segment_circle_min_distance(const Point& p, const Point& q, const Obstacle& c);

enum class PathCheck { clear, colliding };

/// Samples kPathSegments + 1 configurations along the shortest joint-space
/// interpolation and tests both links against every obstacle.
PathCheck path_collision_check(const ArmConfig& from, const ArmConfig& to,
                               std::span<const Obstacle> obstacles);

/// "Joint positions: 'Joint 0': [x, y] 'Joint 1': [x, y] 'Gripper': [x, y]"
std::string format_check(const ArmConfig& config);

struct ArmTask {
  Point target{1.0, 2.0};
  std::vector<Obstacle> obstacles;
  Point offset = Point::Zero();
  double reach_tolerance = kReachTolerance;
};

/// The ten-obstacle ring used by the default instances.
std::vector<Obstacle> obstacle_ring();

/// What the agent is told: the goal and the obstacles, never the offset.
struct PublicArmTask {
  Point target;
  std::vector<Obstacle> obstacles;
  ArmConfig initial;
};

inline constexpr std::string_view kMoveSuccess = "Success!";
inline constexpr std::string_view kMoveOutOfReach = "Failed! Target is out of reach. Move aborted.";
inline constexpr std::string_view kMoveCollision = "Failed! Collision detected along the path. Move aborted.";

class ArmEnv final : public Environment {
 public:
  /// Seeded default instance, adjusted by spec.params:
  /// {"target": [x, y], "obstacles": [[x, y, r], ...], "offset": [dx, dy]}.
  explicit ArmEnv(TaskSpec spec);

  std::string describe() const override;

  std::string apply_move(double commanded_x, double commanded_y);
  std::string check() const { return format_check(config_); }

  const ArmConfig& config() const noexcept { return config_; }
  const ArmTask& task() const noexcept { return task_; }
  PublicArmTask public_task() const { return {task_.target, task_.obstacles, ArmConfig{}}; }

 protected:
  std::optional<std::string> execute(std::string_view command) override;
  std::string help() const override;
  bool goal_reached() const override;

 private:
  ArmTask task_;
  ArmConfig config_;
  bool reached_ = false;
};

}  // namespace seekbench::arm
