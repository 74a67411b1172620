#include <array>
#include <regex>

#include "internal.hpp"

namespace seekbench::policies::detail {

namespace {

using nav::Cell;
using nav::Direction;

std::string command_for(Direction d) {
  std::string s(nav::to_string(d));
  s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

Direction opposite(Direction d) {
  switch (d) {
    case Direction::forward: return Direction::backward;
    case Direction::backward: return Direction::forward;
    case Direction::left: return Direction::right;
    case Direction::right: return Direction::left;
  }
  return d;
}

std::optional<Cell> parse_position(std::string_view obs) {
  static const std::regex pattern(R"(Current position: \((-?\d+), (-?\d+)\))");
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_search(obs.begin(), obs.end(), m, pattern)) return std::nullopt;
  return Cell{std::stoi(m[1].str()), std::stoi(m[2].str())};
}

// Unit step toward `to`, x first.
Cell unit_toward(const Cell& from, const Cell& to) {
  if (to.x != from.x) return {to.x > from.x ? 1 : -1, 0};
  if (to.y != from.y) return {0, to.y > from.y ? 1 : -1};
  return {0, 0};
}

std::deque<std::string> walk(Cell from, const Cell& to) {
  std::deque<std::string> out;
  const auto nominal = nav::ActionMap::nominal();
  while (!(from == to)) {
    const Cell u = unit_toward(from, to);
    for (const auto d : nav::kDirections) {
      if (nominal[d] == u) {
        out.push_back(command_for(d));
        break;
      }
    }
    from = from + u;
  }
  return out;
}

// Learns what each command does from the reported positions, assuming only
// that opposite commands undo each other.
class NavSeeker final : public Policy {
 public:
  explicit NavSeeker(const nav::PublicNavTask& task) : task_(task), position_(task.robot) {}

  std::optional<std::string> next(std::string_view obs) override {
    if (pending_) {
      const Direction d = *pending_;
      pending_.reset();
      if (const auto pos = parse_position(obs)) {
        const Cell delta{pos->x - position_.x, pos->y - position_.y};
        if (!(delta == Cell{0, 0})) {
          learn(d, delta);
        } else {
          blocked_[index(d)] = true;
        }
        position_ = *pos;
      }
    }
    if (picking_) {
      picking_ = false;
      if (obs == "You picked up the ball.") holding_ = true;
    }
    const Cell target = holding_ ? task_.goal : task_.ball;
    if (position_ == target) {
      if (holding_) return std::nullopt;
      picking_ = true;
      return std::string("Pick");
    }
    const Cell want = unit_toward(position_, target);
    for (const auto d : nav::kDirections) {
      if (known_[index(d)] && learned_[index(d)] == want) return issue(d);
    }
    // Try an untested command, nominal first.
    const auto nominal = nav::ActionMap::nominal();
    for (const auto d : nav::kDirections) {
      if (!known_[index(d)] && !blocked_[index(d)] && nominal[d] == want) return issue(d);
    }
    for (const auto d : nav::kDirections) {
      if (!known_[index(d)] && !blocked_[index(d)]) return issue(d);
    }
    // Everything tested or blocked: move along the other axis to leave the wall.
    blocked_.fill(false);
    for (const auto d : nav::kDirections) {
      if (!known_[index(d)]) return issue(d);
    }
    return std::nullopt;
  }

 private:
  static std::size_t index(Direction d) { return static_cast<std::size_t>(d); }

  void learn(Direction d, const Cell& delta) {
    known_[index(d)] = true;
    learned_[index(d)] = delta;
    known_[index(opposite(d))] = true;
    learned_[index(opposite(d))] = -delta;
  }

  std::string issue(Direction d) {
    pending_ = d;
    return command_for(d);
  }

  nav::PublicNavTask task_;
  Cell position_;
  bool holding_ = false;
  bool picking_ = false;
  std::optional<Direction> pending_;
  std::array<bool, 4> known_{};
  std::array<bool, 4> blocked_{};
  std::array<Cell, 4> learned_{};
};

}  // namespace

std::unique_ptr<Policy> nav_policy(Kind kind, const nav::PublicNavTask& task) {
  if (kind == Kind::seeker) return std::make_unique<NavSeeker>(task);
  auto commands = walk(task.robot, task.ball);
  commands.push_back("Pick");
  for (auto& c : walk(task.ball, task.goal)) commands.push_back(std::move(c));
  return std::make_unique<ScriptPolicy>(std::move(commands));
}

}  // namespace seekbench::policies::detail
