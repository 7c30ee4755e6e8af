#pragma once

#include <filesystem>
#include <map>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "revpipe/corpus.hpp"
#include "revpipe/pair.hpp"

namespace revpipe {

// Verbatim 1-10 anchor for one metric. Exactly 40 exist (4 metrics x 10).
std::string_view anchor_text(Metric metric, int score);
std::string_view guiding_question(Metric metric);

// Marker lexicons backing the rule-based classifiers. The shipped defaults
// live under data/lexicons/ as one file per marker class; builtin() carries
// the same content compiled in so the pipeline does not depend on cwd.
struct Lexicons {
  std::vector<std::string> endorsement;        // Accept requires one of these...
  std::vector<std::string> criticism;          // ...and none of these
  std::vector<std::string> citation_patterns;  // regexes, case-sensitive
  std::vector<std::string> conceptual;
  std::vector<std::string> methodology;
  std::vector<std::string> analysis;
  std::vector<std::string> logic;
  std::vector<std::string> novelty;
  std::vector<std::string> scope;
  std::vector<std::string> rebut;
  std::vector<std::string> clarify;
  std::vector<std::string> partial;
  std::vector<std::string> future;
  std::vector<std::string> dissatisfaction;

  std::vector<std::regex> citation_regexes;  // compiled from citation_patterns

  void compile();

  static const Lexicons& builtin();
  static Lexicons load_dir(const std::filesystem::path& dir);
};

// One pattern per line, '#' comments, blank lines ignored.
std::vector<std::string> parse_lexicon_text(std::string_view content);

// Regenerates data/lexicons/*.txt from the builtin tables.
void write_builtin_lexicons(const std::filesystem::path& dir);

// File name -> builtin content, exactly as shipped.
const std::map<std::string, std::string>& builtin_lexicon_files();

// Fixed-priority opinion classification: Accept and RecommendReference
// special cases first, then Conceptual > Methodology > AnalysisInterpretation
// > Logic > NoveltyContribution > Scope, Presentation as default. Total and
// case/whitespace-insensitive.
OpinionType classify_opinion_type(std::string_view comment_text,
                                  const Lexicons& lexicons = Lexicons::builtin());

// RebutDisagree > ClarifyMisunderstanding > PartiallyAccept >
// PromiseFutureWork > AcceptRevise (default).
ResponseType classify_response_type(std::string_view response_text,
                                    const Lexicons& lexicons = Lexicons::builtin());

struct PersuasionOptions {
  // Share of the comment's content words that must reappear in a later-round
  // text by the same reviewer for the issue to count as re-raised.
  double repeat_overlap_threshold = 0.6;
};

// round index -> reviewer_id -> that reviewer's comment text in that round.
using RoundReviewerTexts = std::map<int, std::map<std::string, std::string>>;

// silence = acceptance: u = 0 only when a later-round text by the same
// reviewer carries a dissatisfaction marker or repeats the comment's content
// words; otherwise u = 1, including when no later round exists.
void derive_persuasion(std::vector<CommentResponsePair>& pairs,
                       const RoundReviewerTexts& texts, int max_round,
                       const Lexicons& lexicons = Lexicons::builtin(),
                       const PersuasionOptions& options = {});

void derive_persuasion(std::vector<CommentResponsePair>& pairs,
                       const CorrespondenceDocument& doc,
                       const Lexicons& lexicons = Lexicons::builtin(),
                       const PersuasionOptions& options = {});

// Share of a's content words found in b's word set; 0 when a has none.
double content_word_overlap(std::string_view comment, std::string_view later_text);

}  // namespace revpipe
