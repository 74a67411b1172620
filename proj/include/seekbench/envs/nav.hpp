#pragma once

#include <array>
#include <optional>
#include <string>

#include "seekbench/core/environment.hpp"

namespace seekbench::nav {

struct Cell {
  int x = 0;
  int y = 0;

  Cell operator+(const Cell& o) const { return {x + o.x, y + o.y}; }
  Cell operator-() const { return {-x, -y}; }
  bool operator==(const Cell&) const = default;
};

enum class Direction { forward, backward, left, right };
inline constexpr std::array<Direction, 4> kDirections{Direction::forward, Direction::backward, Direction::left,
                                                      Direction::right};
std::string_view to_string(Direction d);

/// Displacement produced by each directional command.
struct ActionMap {
  std::array<Cell, 4> displacement;

  Cell operator[](Direction d) const { return displacement[static_cast<std::size_t>(d)]; }
  bool operator==(const ActionMap&) const = default;

  static ActionMap nominal();
  /// Every command produces the opposite displacement.
  ActionMap inverted() const;
};

inline constexpr int kBound = 4;  // grid is [-kBound, kBound] on both axes

struct NavState {
  Cell robot;
  std::optional<Cell> ball;  // nullopt while held
  Cell goal;
};

struct PublicNavTask {
  Cell robot;
  Cell ball;
  Cell goal;
};

std::string format_cell(const Cell& c);

class NavEnv final : public Environment {
 public:
  /// Default layout robot (0, 0), ball (1, 0), goal (2, 0). spec.params may set
  /// "robot", "ball", "goal" as [x, y], or "randomize": true to draw a seeded layout.
  explicit NavEnv(TaskSpec spec);

  std::string describe() const override;

  std::string move(Direction d);
  std::string pick();
  std::string check() const;

  const NavState& state() const noexcept { return state_; }
  const ActionMap& action_map() const noexcept { return map_; }
  PublicNavTask public_task() const { return initial_; }

 protected:
  std::optional<std::string> execute(std::string_view command) override;
  std::string help() const override;
  bool goal_reached() const override;

 private:
  NavState state_;
  PublicNavTask initial_;
  ActionMap map_;
};

}  // namespace seekbench::nav
