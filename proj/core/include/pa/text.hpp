#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pa {

/// Shortest decimal string that round-trips the value exactly.
std::string format_double(double value);

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
std::vector<std::string> split(std::string_view s, char delim);

/// Full-string numeric parse; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view s);

} // namespace pa
