#pragma once

#include <optional>
#include <string>
#include <vector>

#include "seekbench/core/environment.hpp"

namespace seekbench::blocks {

using Block = std::string;           // block color
using Stack = std::vector<Block>;    // bottom to top

struct BlocksState {
  std::vector<Stack> stacks;
  std::optional<Block> hand;
  std::optional<Block> inventory;
  bool inventory_revealed = true;
  std::vector<Stack> goal;

  /// Every block on stacks, in the hand and in the inventory, sorted.
  std::vector<Block> all_blocks() const;
};

/// Goal test: the non-empty stacks equal the goal stacks as a multiset
/// (stack positions do not matter, order within a stack does) and the hand is empty.
bool matches_goal(const std::vector<Stack>& stacks, const std::vector<Stack>& goal, bool hand_empty);

std::string format_stack(const Stack& s);

struct PublicBlocksTask {
  std::vector<Stack> initial_stacks;
  std::vector<Stack> goal;
};

class BlocksEnv final : public Environment {
 public:
  /// blocks-single: 3 stacks, 4 blocks, one goal stack.
  /// blocks-multiple: 4 stacks, 7 blocks, 2 or 3 goal stacks.
  /// One block starts in the inventory; the perturbed variant hides it until
  /// Inspect or Retrieve.
  explicit BlocksEnv(TaskSpec spec);

  std::string describe() const override;

  std::string pick(std::size_t stack);
  std::string place(std::size_t stack);
  std::string stash();
  std::string retrieve();
  std::string inspect();
  std::string check() const;

  const BlocksState& state() const noexcept { return state_; }
  PublicBlocksTask public_task() const { return {initial_stacks_, state_.goal}; }

 protected:
  std::optional<std::string> execute(std::string_view command) override;
  std::string help() const override;
  bool goal_reached() const override;

 private:
  BlocksState state_;
  std::vector<Stack> initial_stacks_;
};

}  // namespace seekbench::blocks
