#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace irb::util {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
bool starts_with(std::string_view s, std::string_view prefix);
bool ends_with(std::string_view s, std::string_view suffix);
bool contains_ci(std::string_view haystack, std::string_view needle);
std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string replace_all(std::string s, std::string_view from, std::string_view to);

/// Collapses runs of whitespace to single spaces and trims the ends.
std::string normalize_ws(std::string_view s);

/// Case-folded words with punctuation stripped, the shared notion of a
/// "word" for coverage metrics and keypoint matching.
std::vector<std::string> content_words(std::string_view s);

/// Levenshtein distance over bytes.
std::size_t edit_distance(std::string_view a, std::string_view b);

/// 1 - dist/maxlen similarity in [0,1]; 1.0 for two empty strings.
double similarity(std::string_view a, std::string_view b);

}  // namespace irb::util
