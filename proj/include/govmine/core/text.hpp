#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace govmine::text {

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);
bool starts_with_icase(std::string_view s, std::string_view prefix);
bool iequals(std::string_view a, std::string_view b);
std::vector<std::string_view> split_lines(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

/// Minimal RFC-4180 CSV line splitter (quoted fields, doubled quotes).
std::vector<std::string> parse_csv_line(std::string_view line);
std::string csv_escape(std::string_view field);

/// Shortest round-trip decimal representation of a double ("%.17g"-free, stable).
std::string format_double(double v);

}  // namespace govmine::text
