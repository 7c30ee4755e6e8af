#include "revpipe/text.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace revpipe::text {

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string collapse_ws(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool in_ws = true;  // leading whitespace dropped
  for (unsigned char c : s) {
    if (std::isspace(c)) {
      if (!in_ws) out.push_back(' ');
      in_ws = true;
    } else {
      out.push_back(static_cast<char>(c));
      in_ws = false;
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

std::string fold(std::string_view s) { return to_lower(collapse_ws(s)); }

bool contains(std::string_view haystack, std::string_view needle) {
  return haystack.find(needle) != std::string_view::npos;
}

bool contains_ci(std::string_view haystack, std::string_view needle) {
  return contains(to_lower(haystack), to_lower(needle));
}

std::vector<std::string> split_lines(std::string_view s) {
  std::vector<std::string> lines;
  size_t start = 0;
  while (start <= s.size()) {
    size_t nl = s.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.emplace_back(s.substr(start));
      break;
    }
    std::string_view line = s.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(line);
    start = nl + 1;
  }
  return lines;
}

std::vector<std::string> words(std::string_view folded) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : folded) {
    if (std::isalnum(c) || c == '\'') {
      cur.push_back(static_cast<char>(c));
    } else if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

const std::set<std::string>& stopwords() {
  static const std::set<std::string> kStopwords = {
      "a",    "an",   "and",  "are",  "as",    "at",    "be",   "been", "but",
      "by",   "can",  "could", "do",  "does",  "for",   "from", "had",  "has",
      "have", "if",   "in",   "is",   "it",    "its",   "may",  "might", "more",
      "most", "not",  "of",   "on",   "or",    "should", "so",  "some", "such",
      "than", "that", "the",  "their", "then", "there", "these", "they", "this",
      "to",   "was",  "we",   "were", "which", "will",  "with", "would", "you",
      "your",
  };
  return kStopwords;
}

std::set<std::string> content_words(std::string_view raw) {
  std::set<std::string> out;
  for (auto& w : words(fold(raw))) {
    if (!stopwords().count(w)) out.insert(std::move(w));
  }
  return out;
}

}  // namespace revpipe::text
