#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "revpipe/pair.hpp"

namespace revpipe {

// Metric-aligned high-value keyword patterns. The shipped default is the
// supplementary keyword table verbatim; files under data/keywords/ use the
// lexicon format (one pattern per line, '#' comments).
struct KeywordRuleSet {
  std::map<Metric, std::vector<std::string>> patterns;

  static const KeywordRuleSet& builtin();
  static KeywordRuleSet load_dir(const std::filesystem::path& dir);
};

void write_builtin_keywords(const std::filesystem::path& dir);
const std::map<std::string, std::string>& builtin_keyword_files();

}  // namespace revpipe
