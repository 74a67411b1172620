#include <map>
#include <queue>
#include <regex>
#include <unordered_map>

#include <fmt/format.h>

#include "internal.hpp"

namespace seekbench::policies {

namespace {

using blocks::Block;
using blocks::Stack;

struct Layout {
  std::vector<Stack> stacks;
  std::optional<Block> inventory;

  std::string key() const {
    std::string k;
    for (const auto& s : stacks) {
      for (const auto& b : s) k += b + ',';
      k += '|';
    }
    return k + inventory.value_or("");
  }
};

// Blocks that still have to move at least once: anything in the inventory
// and anything above the longest bottom run that starts a goal stack.
int misplaced(const Layout& l, const std::vector<Stack>& goal) {
  int count = l.inventory ? 1 : 0;
  for (const auto& s : l.stacks) {
    std::size_t good = 0;
    for (const auto& g : goal) {
      if (s.empty() || g.empty() || g.front() != s.front()) continue;
      while (good < s.size() && good < g.size() && s[good] == g[good]) ++good;
      break;
    }
    count += static_cast<int>(s.size() - good);
  }
  return count;
}

std::vector<Block> sorted_blocks(const Layout& l) {
  std::vector<Block> out;
  for (const auto& s : l.stacks) out.insert(out.end(), s.begin(), s.end());
  if (l.inventory) out.push_back(*l.inventory);
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<Block> parse_inventory(std::string_view obs) {
  static const std::regex pattern(R"(Inventory: \[(\w*)\])");
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_search(obs.begin(), obs.end(), m, pattern) || m[1].length() == 0) return std::nullopt;
  return m[1].str();
}

// Acts once on the first observation, then replays the plan.
class BlocksPlanner final : public Policy {
 public:
  BlocksPlanner(Kind kind, blocks::PublicBlocksTask task) : kind_(kind), task_(std::move(task)) {}

  std::optional<std::string> next(std::string_view obs) override {
    if (!started_) {
      started_ = true;
      // The naive policy reads Check and takes an undisclosed inventory as empty.
      return std::string(kind_ == Kind::seeker ? "Inspect" : "Check");
    }
    if (!planned_) {
      planned_ = true;
      if (auto plan = plan_blocks(task_.initial_stacks, parse_inventory(obs), task_.goal)) {
        queue_.assign(plan->begin(), plan->end());
      }
    }
    if (queue_.empty()) return std::nullopt;
    auto c = std::move(queue_.front());
    queue_.pop_front();
    return c;
  }

 private:
  Kind kind_;
  blocks::PublicBlocksTask task_;
  bool started_ = false;
  bool planned_ = false;
  std::deque<std::string> queue_;
};

}  // namespace

std::optional<std::vector<std::string>> plan_blocks(const std::vector<Stack>& stacks,
                                                    const std::optional<Block>& inventory,
                                                    const std::vector<Stack>& goal) {
  const Layout start{stacks, inventory};
  {
    Layout goal_layout{goal, std::nullopt};
    if (sorted_blocks(start) != sorted_blocks(goal_layout)) return std::nullopt;
    std::size_t nonempty = 0;
    for (const auto& g : goal) nonempty += g.empty() ? 0 : 1;
    if (nonempty > stacks.size()) return std::nullopt;
  }

  struct Entry {
    int f;
    int g;
    std::size_t id;
    bool operator>(const Entry& o) const { return f != o.f ? f > o.f : g < o.g; }
  };
  std::vector<Layout> nodes{start};
  std::vector<std::pair<std::size_t, std::vector<std::string>>> parent{{0, {}}};
  std::unordered_map<std::string, int> best{{start.key(), 0}};
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  open.push({misplaced(start, goal), 0, 0});

  auto path_to = [&](std::size_t id) {
    std::vector<std::vector<std::string>> moves;
    for (; id != 0; id = parent[id].first) moves.push_back(parent[id].second);
    std::vector<std::string> out;
    for (auto it = moves.rbegin(); it != moves.rend(); ++it) out.insert(out.end(), it->begin(), it->end());
    return out;
  };

  while (!open.empty()) {
    const Entry e = open.top();
    open.pop();
    const Layout cur = nodes[e.id];
    if (best.at(cur.key()) < e.g) continue;
    if (!cur.inventory && blocks::matches_goal(cur.stacks, goal, true)) return path_to(e.id);

    auto push = [&](Layout next, std::vector<std::string> moves) {
      const int g = e.g + 1;
      auto [it, inserted] = best.try_emplace(next.key(), g);
      if (!inserted && it->second <= g) return;
      it->second = g;
      const int h = misplaced(next, goal);
      nodes.push_back(std::move(next));
      parent.push_back({e.id, std::move(moves)});
      open.push({g + h, g, nodes.size() - 1});
    };

    for (std::size_t i = 0; i < cur.stacks.size(); ++i) {
      if (cur.stacks[i].empty()) continue;
      const std::string pick = fmt::format("Pick {}", i + 1);
      for (std::size_t j = 0; j < cur.stacks.size(); ++j) {
        if (j == i) continue;
        Layout next = cur;
        next.stacks[j].push_back(next.stacks[i].back());
        next.stacks[i].pop_back();
        push(std::move(next), {pick, fmt::format("Place {}", j + 1)});
      }
      if (!cur.inventory) {
        Layout next = cur;
        next.inventory = next.stacks[i].back();
        next.stacks[i].pop_back();
        push(std::move(next), {pick, "Stash"});
      }
    }
    if (cur.inventory) {
      for (std::size_t j = 0; j < cur.stacks.size(); ++j) {
        Layout next = cur;
        next.stacks[j].push_back(*next.inventory);
        next.inventory.reset();
        push(std::move(next), {"Retrieve", fmt::format("Place {}", j + 1)});
      }
    }
  }
  return std::nullopt;
}

namespace detail {

std::unique_ptr<Policy> blocks_policy(Kind kind, const blocks::PublicBlocksTask& task) {
  return std::make_unique<BlocksPlanner>(kind, task);
}

}  // namespace detail

}  // namespace seekbench::policies
