#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace seekbench {

enum class Family { arm, nav, color, blocks_single, blocks_multiple };
enum class Variant { basic, perturbed, contaminated, wronglabel };

std::string_view to_string(Family f);
std::string_view to_string(Variant v);

/// One of the eleven benchmark tasks plus the per-episode knobs.
///
/// `params` holds optional family-specific overrides (fixed target, offset,
/// label map, ...); an empty object selects the seeded default instance.
struct TaskSpec {
  Family family = Family::arm;
  Variant variant = Variant::basic;
  std::uint64_t seed = 0;
  int step_budget = 100;
  nlohmann::json params = nlohmann::json::object();

  /// "arm/perturbed", "blocks-single/basic", ...
  std::string id() const;

  /// Throws InvalidTask naming the offending pair or field.
  void validate() const;

  /// Parses a task id. Throws InvalidTask for unknown names and for pairs
  /// that are not among the eleven tasks (e.g. "color/single").
  static TaskSpec parse(std::string_view id);
};

bool is_valid_pair(Family f, Variant v);

/// The eleven tasks in benchmark column order.
const std::vector<TaskSpec>& all_tasks();

}  // namespace seekbench
