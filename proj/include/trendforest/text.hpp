#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace trendforest {

/// Shortest decimal string that parses back to exactly the same double.
/// Used for model files and data CSVs so round-trips are bit-exact and
/// output is byte-stable across runs.
std::string format_double(double value);

/// Fixed-point formatting ("%.<decimals>f"), used for DOT labels.
std::string format_fixed(double value, int decimals);

/// Strict full-token numeric parses; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view token);
std::optional<long long> parse_int(std::string_view token);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view line, char sep);

}  // namespace trendforest
