#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace edprof::utf8 {

// Strict decode; nullopt on any ill-formed sequence (overlong, surrogate,
// out of range, truncated).
std::optional<std::vector<char32_t>> decode(std::string_view text);

// Number of Unicode scalar values. Ill-formed bytes count one each.
std::size_t scalar_count(std::string_view text);

// Longest prefix holding at most n scalars, cut on a sequence boundary.
std::string_view prefix(std::string_view text, std::size_t n);

std::string encode(char32_t cp);

}  // namespace edprof::utf8
