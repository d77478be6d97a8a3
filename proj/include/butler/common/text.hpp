#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace butler::text {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

/// Lowercases, expands common English contractions ("it's" -> "it is") and
/// splits on anything that is not a letter or digit.
std::vector<std::string> tokenize(std::string_view s);

/// Splits on ASCII whitespace only; no case folding.
std::vector<std::string> tokenize_ws(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Plural-tolerant token equality: "beers" matches "beer", "boxes" matches "box".
bool token_matches(std::string_view query, std::string_view term);

bool contains_case_insensitive(std::string_view haystack, std::string_view needle);

bool is_demonstrative(std::string_view token);

}  // namespace butler::text
