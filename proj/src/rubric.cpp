#include "revpipe/rubric.hpp"

#include <array>
#include <fstream>
#include <sstream>

#include "revpipe/error.hpp"
#include "revpipe/text.hpp"

namespace revpipe {

namespace {

// Score anchors, indexed [metric][score-1].
constexpr std::array<std::array<const char*, 10>, 4> kAnchors = {{
    // opinion strength
    {{
        "Cosmetic issue, such as typography, spelling, or formatting.",
        "Surface-level polish issue, such as awkward phrasing or word choice.",
        "Minor gap, such as a missing citation or small omission.",
        "Noticeable weakness, such as an incomplete explanation or unclear wording.",
        "Moderate concern, such as an ambiguous methodological detail or missing justification.",
        "Significant issue, such as a questionable design choice or weak evidence for a claim.",
        "Major flaw, such as an inappropriate method or unsupported key conclusion.",
        "Serious threat to the validity of the main findings.",
        "Critical flaw that invalidates a major portion of the results.",
        "Fatal problem, such as a fundamental flaw in the premise or a rejection-level concern.",
    }},
    // constructiveness
    {{
        "Pure dismissal with no guidance for repair.",
        "States a problem but gives no direction for how to address it.",
        "Offers only a vague hint, such as suggesting that other approaches be considered.",
        "Provides a generic suggestion by naming a category of change without specifying "
        "implementation.",
        "Gives partial direction by pointing to a specific element that might help.",
        "Gives clear direction by naming a concrete method, analysis, or revision path.",
        "Provides detailed guidance, including both a recommended action and the rationale for it.",
        "Gives an actionable prescription that specifies implementation details in addition to the "
        "rationale.",
        "Provides a comprehensive roadmap, often including multiple options, contingencies, or "
        "references.",
        "Transformative mentorship that supplies a complete repair roadmap with theory, examples, "
        "and alternatives.",
    }},
    // comment quality
    {{
        "Factually wrong or based on a clear misreading.",
        "Poor comment that is largely irrelevant to the paper's scope.",
        "Weak comment that is valid but superficial or obvious.",
        "Below-average comment that is pedantic or low in substantive value.",
        "Average comment that identifies a valid but relatively limited issue.",
        "Above-average comment that correctly identifies a real scientific issue.",
        "Good comment that is insightful and improves rigor.",
        "Very good comment that identifies an important issue that others might miss.",
        "Excellent comment that substantially improves the paper's inferential core.",
        "Exceptional, transformative observation that could materially reshape the paper.",
    }},
    // revision cost
    {{
        "Trivial correction, such as fixing a typo or spelling.",
        "Minor textual edit, such as revising wording or rephrasing.",
        "Small addition, such as adding a citation or a clarifying sentence.",
        "Paragraph-level revision, such as expanding an explanation or adding a paragraph.",
        "Section-level rewrite, such as substantially revising a section or rewriting the "
        "discussion.",
        "Figure or table redo, or a comparable non-trivial reconstruction of presented results.",
        "Partial reanalysis, such as rerunning analyses for a subset or adding a robustness check.",
        "Major reanalysis, such as reanalyzing the full dataset or redoing the full statistical "
        "workflow.",
        "New data collection or additional experiment beyond revision of existing material.",
        "Complete overhaul, such as redesigning the study or collecting an entirely new dataset.",
    }},
}};

constexpr std::array<const char*, 4> kGuidingQuestions = {
    "How severe is the identified problem?",
    "How actionable is the feedback?",
    "What is the intellectual merit of the comment?",
    "How much work did the author do or promise to do?",
};

}  // namespace

std::string_view metric_name(Metric metric) {
  switch (metric) {
    case Metric::OpinionStrength: return "opinion_strength";
    case Metric::Constructiveness: return "constructiveness";
    case Metric::CommentQuality: return "comment_quality";
    case Metric::RevisionCost: return "revision_cost";
  }
  return "";
}

Metric metric_from_name(std::string_view name) {
  for (Metric m : kAllMetrics) {
    if (metric_name(m) == name) return m;
  }
  throw PipelineError(ErrorKind::UnknownEnum, "metric '" + std::string(name) + "'");
}

std::string_view opinion_type_name(OpinionType type) {
  switch (type) {
    case OpinionType::Accept: return "Accept";
    case OpinionType::RecommendReference: return "RecommendReference";
    case OpinionType::Conceptual: return "Conceptual";
    case OpinionType::Methodology: return "Methodology";
    case OpinionType::AnalysisInterpretation: return "AnalysisInterpretation";
    case OpinionType::Logic: return "Logic";
    case OpinionType::NoveltyContribution: return "NoveltyContribution";
    case OpinionType::Scope: return "Scope";
    case OpinionType::Presentation: return "Presentation";
  }
  return "";
}

OpinionType opinion_type_from_name(std::string_view name) {
  for (OpinionType t : kAllOpinionTypes) {
    if (opinion_type_name(t) == name) return t;
  }
  throw PipelineError(ErrorKind::UnknownEnum, "opinion_type '" + std::string(name) + "'");
}

std::string_view response_type_name(ResponseType type) {
  switch (type) {
    case ResponseType::AcceptRevise: return "AcceptRevise";
    case ResponseType::ClarifyMisunderstanding: return "ClarifyMisunderstanding";
    case ResponseType::RebutDisagree: return "RebutDisagree";
    case ResponseType::PartiallyAccept: return "PartiallyAccept";
    case ResponseType::PromiseFutureWork: return "PromiseFutureWork";
  }
  return "";
}

ResponseType response_type_from_name(std::string_view name) {
  for (ResponseType t : kAllResponseTypes) {
    if (response_type_name(t) == name) return t;
  }
  throw PipelineError(ErrorKind::UnknownEnum, "response_type '" + std::string(name) + "'");
}

bool pair_order(const CommentResponsePair& a, const CommentResponsePair& b) {
  return std::tie(a.paper_id, a.round, a.reviewer_id, a.comment_index) <
         std::tie(b.paper_id, b.round, b.reviewer_id, b.comment_index);
}

std::string_view anchor_text(Metric metric, int score) {
  if (score < 1 || score > 10) {
    throw PipelineError(ErrorKind::OutOfRangeScore,
                        std::string(metric_name(metric)) + " score " + std::to_string(score));
  }
  return kAnchors[static_cast<size_t>(metric)][static_cast<size_t>(score - 1)];
}

std::string_view guiding_question(Metric metric) {
  return kGuidingQuestions[static_cast<size_t>(metric)];
}

std::vector<std::string> parse_lexicon_text(std::string_view content) {
  std::vector<std::string> patterns;
  for (const auto& raw_line : text::split_lines(content)) {
    std::string line = text::trim(raw_line);
    if (line.empty() || line[0] == '#') continue;
    patterns.push_back(std::move(line));
  }
  return patterns;
}

void Lexicons::compile() {
  citation_regexes.clear();
  for (const auto& pattern : citation_patterns) {
    citation_regexes.emplace_back(pattern, std::regex::ECMAScript | std::regex::icase);
  }
}

Lexicons Lexicons::load_dir(const std::filesystem::path& dir) {
  auto load = [&](const char* name) {
    const auto path = dir / name;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PipelineError(ErrorKind::MissingFile, path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_lexicon_text(buf.str());
  };
  Lexicons lex;
  lex.endorsement = load("opinion_endorsement.txt");
  lex.criticism = load("opinion_criticism.txt");
  lex.citation_patterns = load("opinion_citation.txt");
  lex.conceptual = load("opinion_conceptual.txt");
  lex.methodology = load("opinion_methodology.txt");
  lex.analysis = load("opinion_analysis.txt");
  lex.logic = load("opinion_logic.txt");
  lex.novelty = load("opinion_novelty.txt");
  lex.scope = load("opinion_scope.txt");
  lex.rebut = load("response_rebut.txt");
  lex.clarify = load("response_clarify.txt");
  lex.partial = load("response_partial.txt");
  lex.future = load("response_future.txt");
  lex.dissatisfaction = load("dissatisfaction.txt");
  lex.compile();
  return lex;
}

namespace {

bool any_substring(std::string_view folded, const std::vector<std::string>& patterns) {
  for (const auto& p : patterns) {
    if (folded.find(p) != std::string_view::npos) return true;
  }
  return false;
}

}  // namespace

OpinionType classify_opinion_type(std::string_view comment_text, const Lexicons& lexicons) {
  const std::string folded = text::fold(comment_text);
  const std::string collapsed = text::collapse_ws(comment_text);

  if (any_substring(folded, lexicons.endorsement) &&
      !any_substring(folded, lexicons.criticism)) {
    return OpinionType::Accept;
  }
  for (const auto& re : lexicons.citation_regexes) {
    if (std::regex_search(collapsed, re)) return OpinionType::RecommendReference;
  }
  if (any_substring(folded, lexicons.conceptual)) return OpinionType::Conceptual;
  if (any_substring(folded, lexicons.methodology)) return OpinionType::Methodology;
  if (any_substring(folded, lexicons.analysis)) return OpinionType::AnalysisInterpretation;
  if (any_substring(folded, lexicons.logic)) return OpinionType::Logic;
  if (any_substring(folded, lexicons.novelty)) return OpinionType::NoveltyContribution;
  if (any_substring(folded, lexicons.scope)) return OpinionType::Scope;
  return OpinionType::Presentation;
}

ResponseType classify_response_type(std::string_view response_text, const Lexicons& lexicons) {
  const std::string folded = text::fold(response_text);
  if (any_substring(folded, lexicons.rebut)) return ResponseType::RebutDisagree;
  if (any_substring(folded, lexicons.clarify)) return ResponseType::ClarifyMisunderstanding;
  if (any_substring(folded, lexicons.partial)) return ResponseType::PartiallyAccept;
  if (any_substring(folded, lexicons.future)) return ResponseType::PromiseFutureWork;
  return ResponseType::AcceptRevise;
}

double content_word_overlap(std::string_view comment, std::string_view later_text) {
  const auto comment_words = text::content_words(comment);
  if (comment_words.empty()) return 0.0;
  const auto later_words = text::content_words(later_text);
  size_t hits = 0;
  for (const auto& w : comment_words) {
    if (later_words.count(w)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(comment_words.size());
}

void derive_persuasion(std::vector<CommentResponsePair>& pairs, const RoundReviewerTexts& texts,
                       int max_round, const Lexicons& lexicons,
                       const PersuasionOptions& options) {
  for (auto& pair : pairs) {
    if (pair.round < 1 || pair.round > max_round) {
      throw PipelineError(ErrorKind::UnknownRound,
                          pair.paper_id + ": pair round " + std::to_string(pair.round) +
                              " outside 1.." + std::to_string(max_round));
    }
    pair.persuaded = 1;
    for (const auto& [round, by_reviewer] : texts) {
      if (round <= pair.round) continue;
      auto it = by_reviewer.find(pair.reviewer_id);
      if (it == by_reviewer.end()) continue;
      const std::string folded = text::fold(it->second);
      if (any_substring(folded, lexicons.dissatisfaction) ||
          content_word_overlap(pair.comment_text, it->second) >=
              options.repeat_overlap_threshold) {
        pair.persuaded = 0;
        break;
      }
    }
  }
}

void derive_persuasion(std::vector<CommentResponsePair>& pairs,
                       const CorrespondenceDocument& doc, const Lexicons& lexicons,
                       const PersuasionOptions& options) {
  RoundReviewerTexts texts;
  for (const auto& round : doc.rounds) {
    for (const auto& block : round.reviewer_blocks) {
      texts[round.index][block.reviewer_id] = block.comment_text;
    }
  }
  derive_persuasion(pairs, texts, doc.n_rounds(), lexicons, options);
}

}  // namespace revpipe
