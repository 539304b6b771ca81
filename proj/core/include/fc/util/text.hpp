#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace fc::util {

std::vector<std::string> split_lines(std::string_view text);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string trim(std::string_view s);
bool starts_with(std::string_view s, std::string_view prefix);
std::string replace_all(std::string s, std::string_view from, std::string_view to);

// Number of Unicode code points in a UTF-8 string.
std::size_t utf8_length(std::string_view s);

// ceil(characters / 4); at least 1 for nonempty text.
std::size_t estimate_tokens(std::string_view text);

// Index of the first character of every line (line 1 starts at offset 0).
std::vector<std::size_t> line_starts(std::string_view text);

bool is_identifier(std::string_view s);

}  // namespace fc::util
