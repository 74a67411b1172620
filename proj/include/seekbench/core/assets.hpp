#pragma once

#include <optional>
#include <string_view>

namespace seekbench::assets {

/// Files under assets/ compiled into the library, looked up by file name
/// (e.g. "plan.txt", "mixing_table.txt").
std::optional<std::string_view> find(std::string_view name);

}  // namespace seekbench::assets
