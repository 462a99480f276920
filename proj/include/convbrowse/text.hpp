#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace convbrowse {

// ASCII-only case folding; UTF-8 multibyte sequences pass through untouched.
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
bool istarts_with(std::string_view s, std::string_view prefix);

// Collapses runs of whitespace (including U+00A0) into one space and trims.
std::string collapse_whitespace(std::string_view s);
std::string trim(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);

// Lowercase alphanumeric word tokens.
std::vector<std::string> word_tokens(std::string_view s);

// 64-bit FNV-1a; stable across platforms and runs.
std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

// Backslash escaping for tab-separated line formats (\t, \n, \r, \\).
std::string escape_field(std::string_view s);
std::string unescape_field(std::string_view s);

// "contact-us" -> "contact us"; strips extensions like ".html".
std::string humanize_slug(std::string_view segment);

}  // namespace convbrowse
