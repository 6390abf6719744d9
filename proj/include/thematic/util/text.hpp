#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace thematic::text {

bool is_space(char c) noexcept;

std::string_view trim(std::string_view s) noexcept;
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b) noexcept;

/// Case-insensitive prefix test; returns the remainder after the prefix on success.
bool strip_prefix_ci(std::string_view s, std::string_view prefix, std::string_view* rest) noexcept;

/// Collapses every run of whitespace to a single space and trims both ends.
std::string collapse_whitespace(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::size_t word_count(std::string_view s) noexcept;

std::string read_file(const std::string& path);

}  // namespace thematic::text
