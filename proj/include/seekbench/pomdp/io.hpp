#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "seekbench/pomdp/pomdp.hpp"

namespace seekbench::pomdp {

/// POMDP definition file:
///
///   {"states": [...], "actions": [...], "observations": [...],
///    "transition":  [a][s][s'],   // T(s'|s,a)
///    "observation": [a][s'][o],   // O(o|s',a)
///    "reward":      [s][a],       // 0 or 1
///    "discount":    0.95}
///
/// Throws InvalidModel on shape or stochasticity violations.
DiscretePomdp<double> from_json(const nlohmann::json& j);
DiscretePomdp<double> load_file(const std::string& path);
nlohmann::json to_json(const DiscretePomdp<double>& m);

/// Two doors, one hides a tiger. Listening reports the tiger's side with
/// probability `accuracy`; opening the tiger-free door pays 1 and resets the
/// tiger uniformly.
DiscretePomdp<double> tiger(double accuracy = 0.85, double discount = 0.95);

}  // namespace seekbench::pomdp
