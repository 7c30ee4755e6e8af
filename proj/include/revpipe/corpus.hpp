#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace revpipe {

struct ReviewerBlock {
  std::string reviewer_id;
  std::string comment_text;  // non-empty
};

struct ReviewRound {
  int index = 0;  // 1-based
  std::vector<ReviewerBlock> reviewer_blocks;
  std::string author_response_text;  // may be empty (decision-only round)
};

struct CorrespondenceDocument {
  std::string paper_id;
  std::optional<std::string> doi;
  int year = 0;
  std::optional<std::string> field;
  std::vector<ReviewRound> rounds;  // indices 1..n, contiguous

  int n_rounds() const { return rounds.empty() ? 0 : rounds.back().index; }
  const ReviewRound* round(int index) const;
  // Distinct reviewer ids across all rounds.
  std::vector<std::string> reviewer_ids() const;
};

struct TeamAttributes {
  int team_size = 1;
  int institution_count = 1;
  std::optional<int> avg_career_age_decile;  // 1..10
  std::optional<int> max_career_age_decile;  // 1..10, >= avg when both present
};

struct ImpactRecord {
  std::string doi;
  long long c3 = 0;
};

struct Corpus {
  std::vector<CorrespondenceDocument> documents;  // sorted by paper_id
  std::map<std::string, TeamAttributes> team;     // paper_id -> attributes
  std::map<std::string, long long> impact;        // paper_id -> C3

  const CorrespondenceDocument* find(const std::string& paper_id) const;
};

// Validates the full invariant set (round contiguity, reviewer uniqueness,
// non-empty comments, team/impact keys subset of document ids). Throws
// SchemaViolation with a json-pointer-style location.
void validate_corpus(const Corpus& corpus);

Corpus load_manifest(const std::filesystem::path& path);
void save_manifest(const Corpus& corpus, const std::filesystem::path& path);
std::string manifest_to_json(const Corpus& corpus);
Corpus manifest_from_json(const std::string& json_text, const std::string& origin = "<string>");

struct ParseWarnings {
  std::vector<std::string> messages;
};

// Heuristic importer for raw correspondence text. Round sections open on
// "REVIEWER COMMENTS"/"REVIEWERS' COMMENTS" lines, response sections on
// "REBUTTAL"/"Author Responses"/"Response to Reviewer(s)" lines, reviewer
// blocks on "Reviewer #N"/"Referee #N" lines (all case-insensitive).
// Rounds without any reviewer block are dropped with a warning.
CorrespondenceDocument parse_raw_correspondence(const std::string& raw_text,
                                                const std::string& paper_id, int year,
                                                ParseWarnings* warnings = nullptr);

struct JoinReport {
  std::size_t rows = 0;
  std::size_t matched_papers = 0;
};

// Case-insensitive DOI join after trimming doi.org URL prefixes. Documents and
// team attributes pass through untouched.
Corpus join_impact(Corpus corpus, const std::filesystem::path& impact_csv,
                   JoinReport* report = nullptr);

std::string normalize_doi(std::string doi);

}  // namespace revpipe
