#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace revpipe::text {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

// Collapses every whitespace run (incl. newlines) to a single space and trims.
std::string collapse_ws(std::string_view s);

// Lowercased + whitespace-collapsed, the canonical form lexicon substring
// matching operates on.
std::string fold(std::string_view s);

bool contains(std::string_view haystack, std::string_view needle);
bool contains_ci(std::string_view haystack, std::string_view needle);

std::vector<std::string> split_lines(std::string_view s);

// [a-z0-9']+ runs of the folded text.
std::vector<std::string> words(std::string_view folded);

const std::set<std::string>& stopwords();

// Unique non-stopword words of the folded text.
std::set<std::string> content_words(std::string_view raw);

}  // namespace revpipe::text
