#include "seekbench/envs/nav.hpp"

#include <cstdlib>

#include <fmt/format.h>

#include "seekbench/core/errors.hpp"
#include "seekbench/core/rng.hpp"
#include "seekbench/core/text.hpp"

namespace seekbench::nav {

namespace {

bool in_bounds(const Cell& c) { return std::abs(c.x) <= kBound && std::abs(c.y) <= kBound; }

Cell read_cell(const nlohmann::json& j, std::string_view what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw InvalidTask(fmt::format("nav param '{}' must be [x, y] integers", what));
  }
  const Cell c{j[0].get<int>(), j[1].get<int>()};
  if (!in_bounds(c)) throw InvalidTask(fmt::format("nav param '{}' lies outside the grid", what));
  return c;
}

Cell random_cell(Rng& rng) {
  constexpr std::size_t kSide = 2 * kBound + 1;
  return {static_cast<int>(rng.index(kSide)) - kBound, static_cast<int>(rng.index(kSide)) - kBound};
}

}  // namespace

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::forward: return "forward";
    case Direction::backward: return "backward";
    case Direction::left: return "left";
    case Direction::right: return "right";
  }
  return "?";
}

ActionMap ActionMap::nominal() { return {{Cell{0, 1}, Cell{0, -1}, Cell{-1, 0}, Cell{1, 0}}}; }

ActionMap ActionMap::inverted() const {
  ActionMap out = *this;
  for (auto& d : out.displacement) d = -d;
  return out;
}

std::string format_cell(const Cell& c) { return fmt::format("({}, {})", c.x, c.y); }

NavEnv::NavEnv(TaskSpec spec) : Environment(std::move(spec)) {
  const auto& s = this->spec();
  if (s.family != Family::nav) throw InvalidTask("NavEnv requires a nav task, got " + s.id());
  const auto& params = s.params;

  initial_ = {{0, 0}, {1, 0}, {2, 0}};
  if (params.value("randomize", false)) {
    Rng rng(s.seed);
    initial_.robot = random_cell(rng);
    initial_.ball = random_cell(rng);
    do {
      initial_.goal = random_cell(rng);
    } while (initial_.goal == initial_.robot);
  }
  if (params.contains("robot")) initial_.robot = read_cell(params["robot"], "robot");
  if (params.contains("ball")) initial_.ball = read_cell(params["ball"], "ball");
  if (params.contains("goal")) initial_.goal = read_cell(params["goal"], "goal");
  if (initial_.goal == initial_.robot) throw InvalidTask("nav goal must differ from the robot's start cell");

  state_ = {initial_.robot, initial_.ball, initial_.goal};
  map_ = s.variant == Variant::perturbed ? ActionMap::nominal().inverted() : ActionMap::nominal();
}

std::string NavEnv::describe() const {
  return fmt::format(
      "A mobile robot moves on a grid of cells whose coordinates range from -{0} to {0} on both axes.\n"
      "The goal is to move the robot to the ball at {1}, pick it up, and carry it to the goal location at {2}.\n"
      "\n"
      "The robot has the following primitive actions:\n"
      "{3}\n"
      "\n"
      "The initial environment state is:\n"
      "Robot at {4}. Ball: {1}. Goal at {2}.",
      kBound, format_cell(initial_.ball), format_cell(initial_.goal), help(), format_cell(initial_.robot));
}

std::string NavEnv::help() const {
  return "1) Forward: Move the robot one cell forward (y + 1).\n"
         "2) Backward: Move the robot one cell backward (y - 1).\n"
         "3) Left: Move the robot one cell to the left (x - 1).\n"
         "4) Right: Move the robot one cell to the right (x + 1).\n"
         "5) Pick: Pick up the ball if it is in the robot's cell.\n"
         "6) Check: Check the positions of the robot, the ball and the goal.\n"
         "7) Help: View the available action options.";
}

std::string NavEnv::move(Direction d) {
  const Cell next = state_.robot + map_[d];
  if (!in_bounds(next)) {
    return fmt::format("You bumped into the wall. Current position: {}.", format_cell(state_.robot));
  }
  state_.robot = next;
  return fmt::format("You moved. Current position: {}.", format_cell(state_.robot));
}

std::string NavEnv::pick() {
  if (state_.ball && *state_.ball == state_.robot) {
    state_.ball.reset();
    return "You picked up the ball.";
  }
  return "There is no ball here.";
}

std::string NavEnv::check() const {
  return fmt::format("Robot at {}. Ball: {}. Goal at {}.", format_cell(state_.robot),
                     state_.ball ? format_cell(*state_.ball) : std::string("held"), format_cell(state_.goal));
}

std::optional<std::string> NavEnv::execute(std::string_view command) {
  const auto tokens = text::split_ws(command);
  if (tokens.size() != 1) return std::nullopt;
  for (const auto d : kDirections) {
    if (text::iequals(tokens[0], to_string(d))) return move(d);
  }
  if (text::iequals(tokens[0], "pick")) return pick();
  if (text::iequals(tokens[0], "check")) return check();
  return std::nullopt;
}

bool NavEnv::goal_reached() const { return !state_.ball && state_.robot == state_.goal; }

}  // namespace seekbench::nav
