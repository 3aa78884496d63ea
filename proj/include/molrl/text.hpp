#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace molrl::text {

std::string_view trim(std::string_view s);

// Number of UTF-8 code points; invalid sequences count one per byte.
std::size_t codepoint_count(std::string_view s);

// Decodes UTF-8 into code points. Returns nullopt on malformed input.
std::optional<std::vector<char32_t>> decode_utf8(std::string_view s);

// Non-overlapping, case-sensitive occurrences of `needle` in `haystack`.
std::size_t count_occurrences(std::string_view haystack, std::string_view needle);

std::vector<std::string> split(std::string_view s, char sep);

bool starts_with(std::string_view s, std::string_view prefix);

}  // namespace molrl::text
