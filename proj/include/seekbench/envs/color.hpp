#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "seekbench/core/environment.hpp"

namespace seekbench::color {

enum class Base { red, yellow, blue, white, black };
inline constexpr std::array<Base, 5> kBases{Base::red, Base::yellow, Base::blue, Base::white, Base::black};

std::string_view to_string(Base b);
std::optional<Base> parse_base(std::string_view name);

inline constexpr std::string_view kMurky = "murky";
inline constexpr std::string_view kNone = "none";

/// Two-pigment outcomes, one line "colorA+colorB=result" per unordered pair.
class MixingTable {
 public:
  /// Throws std::invalid_argument on malformed lines, unknown bases, a pair
  /// listed twice, or a table that misses one of the ten pairs.
  static MixingTable parse(std::string_view text);
  /// The table shipped as assets/mixing_table.txt.
  static const MixingTable& builtin();

  const std::string& result(Base a, Base b) const;
  /// Base colors, every pair result, then murky, without duplicates.
  std::vector<std::string> palette() const;

 private:
  std::map<std::pair<Base, Base>, std::string> pairs_;
};

struct Portion {
  Base base;
  int ml = 1;
};

struct MixResult {
  std::string color;  // kNone when empty
  int ml = 0;

  bool operator==(const MixResult&) const = default;
};

/// Display color of a container's contents. Ratios are ignored: one distinct
/// base shows itself, two use the pair table, three or more are murky.
MixResult mix(std::span<const Portion> contents, const MixingTable& table = MixingTable::builtin());

inline constexpr std::array<char, 2> kContainers{'A', 'B'};

struct ColorTarget {
  std::string color;
  int ml = 2;
};

struct ColorState {
  std::array<Base, 5> tube_content;  // indexed by label
  std::array<std::vector<Portion>, 2> containers;
  ColorTarget target;

  bool labels_identity() const;
};

struct PublicColorTask {
  ColorTarget target;
};

class ColorEnv final : public Environment {
 public:
  /// Seeded default: 2 ml of a pair-table color. spec.params may set
  /// "target" (palette color), "target_ml", "contaminant" {"container": "A"|"B",
  /// "color": base} for contaminated, and "labels" {label: content} for wronglabel.
  explicit ColorEnv(TaskSpec spec);

  std::string describe() const override;

  std::string add(Base label, std::size_t container);
  std::string check(std::size_t container) const;
  std::string clean(std::size_t container);

  const ColorState& state() const noexcept { return state_; }
  PublicColorTask public_task() const { return {state_.target}; }

 protected:
  std::optional<std::string> execute(std::string_view command) override;
  std::string help() const override;
  bool goal_reached() const override;

 private:
  ColorState state_;
};

}  // namespace seekbench::color
