#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace seekbench::text {

std::string_view trim(std::string_view s);
std::vector<std::string_view> split_ws(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
bool istarts_with(std::string_view s, std::string_view prefix);
std::string to_lower(std::string_view s);

/// Strict full-token parses; trailing garbage or non-finite values yield nullopt.
std::optional<double> parse_double(std::string_view token);
std::optional<long long> parse_int(std::string_view token);

/// Two-decimal fixed formatting that never prints "-0.00".
std::string fixed2(double v);

/// Shortest of "%.1f" / "%.2f" / ... (up to 6 places) that round-trips the
/// value at that precision, keeping at least one decimal: 1 -> "1.0", 1.25 -> "1.25".
std::string decimal(double v);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace seekbench::text
