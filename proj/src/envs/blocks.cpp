#include "seekbench/envs/blocks.hpp"

#include <algorithm>
#include <array>

#include <fmt/format.h>

#include "seekbench/core/errors.hpp"
#include "seekbench/core/rng.hpp"
#include "seekbench/core/text.hpp"

namespace seekbench::blocks {

namespace {

constexpr std::array<std::string_view, 7> kColors{"red", "blue", "green", "yellow", "orange", "purple", "white"};

std::vector<Stack> non_empty(std::vector<Stack> stacks) {
  std::erase_if(stacks, [](const Stack& s) { return s.empty(); });
  std::sort(stacks.begin(), stacks.end());
  return stacks;
}

}  // namespace

std::vector<Block> BlocksState::all_blocks() const {
  std::vector<Block> out;
  for (const auto& s : stacks) out.insert(out.end(), s.begin(), s.end());
  if (hand) out.push_back(*hand);
  if (inventory) out.push_back(*inventory);
  std::sort(out.begin(), out.end());
  return out;
}

bool matches_goal(const std::vector<Stack>& stacks, const std::vector<Stack>& goal, bool hand_empty) {
  return hand_empty && non_empty(stacks) == non_empty(goal);
}

std::string format_stack(const Stack& s) { return "[" + text::join(s, ", ") + "]"; }

BlocksEnv::BlocksEnv(TaskSpec spec) : Environment(std::move(spec)) {
  const auto& s = this->spec();
  const bool single = s.family == Family::blocks_single;
  if (!single && s.family != Family::blocks_multiple) {
    throw InvalidTask("BlocksEnv requires a blocks task, got " + s.id());
  }
  const std::size_t stack_count = single ? 3 : 4;
  const std::size_t block_count = single ? 4 : 7;

  Rng rng(s.seed);
  std::vector<Block> palette(kColors.begin(), kColors.end());
  rng.shuffle(std::span<Block>(palette));
  std::vector<Block> blocks(palette.begin(), palette.begin() + static_cast<std::ptrdiff_t>(block_count));

  // Initial layout: the first block goes to the inventory, the rest are dealt
  // onto random stacks.
  state_.stacks.assign(stack_count, {});
  state_.inventory = blocks.front();
  for (std::size_t i = 1; i < blocks.size(); ++i) state_.stacks[rng.index(stack_count)].push_back(blocks[i]);

  // Goal: a fresh permutation cut into one (single) or 2-3 (multiple) stacks.
  std::vector<Block> order = blocks;
  rng.shuffle(std::span<Block>(order));
  const std::size_t goal_stacks = single ? 1 : 2 + rng.index(2);
  std::vector<std::size_t> cuts;
  if (goal_stacks > 1) {
    std::vector<std::size_t> positions;
    for (std::size_t p = 1; p < block_count; ++p) positions.push_back(p);
    rng.shuffle(std::span<std::size_t>(positions));
    cuts.assign(positions.begin(), positions.begin() + static_cast<std::ptrdiff_t>(goal_stacks - 1));
    std::sort(cuts.begin(), cuts.end());
  }
  cuts.push_back(block_count);
  std::size_t start = 0;
  for (const auto cut : cuts) {
    state_.goal.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                             order.begin() + static_cast<std::ptrdiff_t>(cut));
    start = cut;
  }

  state_.inventory_revealed = s.variant == Variant::basic;
  initial_stacks_ = state_.stacks;
}

std::string BlocksEnv::describe() const {
  std::vector<std::string> goal;
  for (const auto& g : state_.goal) goal.push_back(format_stack(g));
  std::vector<std::string> stacks;
  for (std::size_t i = 0; i < initial_stacks_.size(); ++i) {
    stacks.push_back(fmt::format("{}: {}", i + 1, format_stack(initial_stacks_[i])));
  }
  return fmt::format(
      "There are {} stacks of colored blocks, a hand that holds at most one block, and an inventory that holds "
      "at most one block.\n"
      "Only the top block of a stack can be picked up, and blocks can only be placed on top of a stack.\n"
      "The goal is to rearrange all blocks into the following stacks (bottom to top), in any stack positions, "
      "with the hand empty: {}.\n"
      "\n"
      "The following primitive actions are available:\n"
      "{}\n"
      "\n"
      "The initial stacks are (bottom to top):\n"
      "{}",
      initial_stacks_.size(), text::join(goal, " "), help(), text::join(stacks, " "));
}

std::string BlocksEnv::help() const {
  return "1) Pick <i>: Pick up the top block of stack i with the hand.\n"
         "2) Place <i>: Place the block in the hand on top of stack i.\n"
         "3) Stash: Put the block in the hand into the inventory.\n"
         "4) Retrieve: Take the block in the inventory into the hand.\n"
         "5) Inspect: Look into the inventory.\n"
         "6) Check: Check the stacks, the hand and the inventory.\n"
         "7) Help: View the available action options.";
}

std::string BlocksEnv::pick(std::size_t stack) {
  auto& s = state_.stacks.at(stack);
  if (state_.hand) return "Your hand is occupied.";
  if (s.empty()) return fmt::format("Stack {} is empty.", stack + 1);
  state_.hand = s.back();
  s.pop_back();
  return fmt::format("You picked up the {} block from stack {}.", *state_.hand, stack + 1);
}

std::string BlocksEnv::place(std::size_t stack) {
  auto& s = state_.stacks.at(stack);
  if (!state_.hand) return "Your hand is empty.";
  s.push_back(*state_.hand);
  state_.hand.reset();
  return fmt::format("You placed the {} block on stack {}.", s.back(), stack + 1);
}

std::string BlocksEnv::stash() {
  if (!state_.hand) return "Your hand is empty.";
  if (state_.inventory) return "Inventory is full.";
  state_.inventory = std::move(state_.hand);
  state_.hand.reset();
  return fmt::format("You put the {} block into the inventory.", *state_.inventory);
}

std::string BlocksEnv::retrieve() {
  if (state_.hand) return "Your hand is occupied.";
  state_.inventory_revealed = true;
  if (!state_.inventory) return "Inventory is empty.";
  state_.hand = std::move(state_.inventory);
  state_.inventory.reset();
  return fmt::format("You took the {} block from the inventory.", *state_.hand);
}

std::string BlocksEnv::inspect() {
  state_.inventory_revealed = true;
  return fmt::format("Inventory: [{}]", state_.inventory.value_or(""));
}

std::string BlocksEnv::check() const {
  std::vector<std::string> stacks;
  for (std::size_t i = 0; i < state_.stacks.size(); ++i) {
    stacks.push_back(fmt::format("{}: {}", i + 1, format_stack(state_.stacks[i])));
  }
  const std::string inventory =
      state_.inventory_revealed ? fmt::format("[{}]", state_.inventory.value_or("")) : std::string("unknown");
  return fmt::format("Stacks: {} Hand: [{}] Inventory: {}", text::join(stacks, " "), state_.hand.value_or(""),
                     inventory);
}

std::optional<std::string> BlocksEnv::execute(std::string_view command) {
  const auto tokens = text::split_ws(command);
  if (tokens.size() == 2 && (text::iequals(tokens[0], "pick") || text::iequals(tokens[0], "place"))) {
    const auto index = text::parse_int(tokens[1]);
    if (!index || *index < 1 || *index > static_cast<long long>(state_.stacks.size())) return std::nullopt;
    const auto stack = static_cast<std::size_t>(*index - 1);
    return text::iequals(tokens[0], "pick") ? pick(stack) : place(stack);
  }
  if (tokens.size() != 1) return std::nullopt;
  if (text::iequals(tokens[0], "stash")) return stash();
  if (text::iequals(tokens[0], "retrieve")) return retrieve();
  if (text::iequals(tokens[0], "inspect")) return inspect();
  if (text::iequals(tokens[0], "check")) return check();
  return std::nullopt;
}

bool BlocksEnv::goal_reached() const { return matches_goal(state_.stacks, state_.goal, !state_.hand); }

}  // namespace seekbench::blocks
