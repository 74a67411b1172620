#include <algorithm>
#include <array>
#include <regex>

#include <fmt/format.h>

#include "internal.hpp"

namespace seekbench::policies::detail {

namespace {

using color::Base;

// Bases whose mix shows `target`, expanded to `ml` portions.
std::optional<std::vector<Base>> recipe(const color::ColorTarget& target) {
  const auto& table = color::MixingTable::builtin();
  std::vector<Base> distinct;
  for (const auto b : color::kBases) {
    if (color::to_string(b) == target.color) distinct = {b};
  }
  for (std::size_t i = 0; distinct.empty() && i < color::kBases.size(); ++i) {
    for (std::size_t j = i + 1; j < color::kBases.size(); ++j) {
      if (table.result(color::kBases[i], color::kBases[j]) == target.color) {
        distinct = {color::kBases[i], color::kBases[j]};
        break;
      }
    }
  }
  if (distinct.empty() && target.color == color::kMurky) {
    distinct = {color::kBases[0], color::kBases[1], color::kBases[2]};
  }
  if (distinct.empty() || static_cast<int>(distinct.size()) > target.ml) return std::nullopt;
  std::vector<Base> out = distinct;
  while (static_cast<int>(out.size()) < target.ml) out.push_back(distinct.back());
  return out;
}

std::string add(Base label, char container) {
  return fmt::format("Add {} to {}", color::to_string(label), container);
}

// Empties both containers, finds which tube holds each needed base, then
// mixes in A.
class ColorSeeker final : public Policy {
 public:
  explicit ColorSeeker(const color::PublicColorTask& task) : recipe_(recipe(task.target)) {
    if (recipe_) {
      for (const auto b : *recipe_) {
        if (std::find(needed_.begin(), needed_.end(), b) == needed_.end()) needed_.push_back(b);
      }
    }
  }

  std::optional<std::string> next(std::string_view obs) override {
    if (!recipe_) return std::nullopt;
    switch (phase_) {
      case Phase::start:
        phase_ = Phase::checked_a;
        return std::string("Check A");
      case Phase::checked_a:
        dirty_a_ = obs.find("is empty") == std::string_view::npos;
        phase_ = Phase::checked_b;
        return std::string("Check B");
      case Phase::checked_b:
        phase_ = Phase::probe;
        if (obs.find("is empty") == std::string_view::npos) return std::string("Clean B");
        [[fallthrough]];
      case Phase::probe:
        if (dirty_a_) {
          dirty_a_ = false;
          return std::string("Clean A");
        }
        return probe_or_mix();
      case Phase::added:
        phase_ = Phase::probed;
        return std::string("Check A");
      case Phase::probed:
        record(obs);
        phase_ = Phase::probe;
        dirty_a_ = true;
        return std::string("Clean A");
      case Phase::mix:
        if (queue_.empty()) return std::nullopt;
        auto c = std::move(queue_.front());
        queue_.pop_front();
        return c;
    }
    return std::nullopt;
  }

 private:
  enum class Phase { start, checked_a, checked_b, probe, added, probed, mix };

  std::optional<Base> tube_for(Base content) const {
    for (std::size_t i = 0; i < color::kBases.size(); ++i) {
      if (tested_[i] && content_[i] == content) return color::kBases[i];
    }
    return std::nullopt;
  }

  std::optional<std::string> probe_or_mix() {
    for (const auto b : needed_) {
      if (tube_for(b)) continue;
      // Untested label, the one named after the base first.
      std::vector<std::size_t> order{static_cast<std::size_t>(b)};
      for (std::size_t i = 0; i < color::kBases.size(); ++i) order.push_back(i);
      for (const auto i : order) {
        if (tested_[i]) continue;
        probing_ = i;
        phase_ = Phase::added;
        queue_.clear();
        return add(color::kBases[i], 'A');
      }
      return std::nullopt;
    }
    phase_ = Phase::mix;
    for (const auto b : *recipe_) queue_.push_back(add(*tube_for(b), 'A'));
    auto c = std::move(queue_.front());
    queue_.pop_front();
    return c;
  }

  void record(std::string_view obs) {
    static const std::regex pattern(R"(has \d+ ml of (\w+) paint)");
    std::match_results<std::string_view::const_iterator> m;
    tested_[probing_] = true;
    if (std::regex_search(obs.begin(), obs.end(), m, pattern)) {
      if (const auto b = color::parse_base(m[1].str())) content_[probing_] = *b;
    }
  }

  std::optional<std::vector<Base>> recipe_;
  std::vector<Base> needed_;
  Phase phase_ = Phase::start;
  bool dirty_a_ = false;
  std::size_t probing_ = 0;
  std::array<bool, 5> tested_{};
  std::array<Base, 5> content_{};
  std::deque<std::string> queue_;
};

}  // namespace

std::unique_ptr<Policy> color_policy(Kind kind, const color::PublicColorTask& task) {
  if (kind == Kind::seeker) return std::make_unique<ColorSeeker>(task);
  std::deque<std::string> commands;
  if (const auto r = recipe(task.target)) {
    for (const auto b : *r) commands.push_back(add(b, 'A'));
  }
  return std::make_unique<ScriptPolicy>(std::move(commands));
}

}  // namespace seekbench::policies::detail
