#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace revpipe {

// The four 1-10 ordinal dimensions scored for every comment-response pair.
enum class Metric { OpinionStrength, Constructiveness, CommentQuality, RevisionCost };

inline constexpr std::array<Metric, 4> kAllMetrics = {
    Metric::OpinionStrength, Metric::Constructiveness, Metric::CommentQuality,
    Metric::RevisionCost};

std::string_view metric_name(Metric metric);
Metric metric_from_name(std::string_view name);

// Single-label focus of a reviewer comment. Order encodes classification
// priority: the two special cases first, then substantive categories,
// Presentation as the fallback.
enum class OpinionType {
  Accept,
  RecommendReference,
  Conceptual,
  Methodology,
  AnalysisInterpretation,
  Logic,
  NoveltyContribution,
  Scope,
  Presentation,
};

inline constexpr std::array<OpinionType, 9> kAllOpinionTypes = {
    OpinionType::Accept,         OpinionType::RecommendReference,
    OpinionType::Conceptual,     OpinionType::Methodology,
    OpinionType::AnalysisInterpretation, OpinionType::Logic,
    OpinionType::NoveltyContribution,    OpinionType::Scope,
    OpinionType::Presentation,
};

std::string_view opinion_type_name(OpinionType type);
OpinionType opinion_type_from_name(std::string_view name);

// Author's primary response strategy.
enum class ResponseType {
  AcceptRevise,
  ClarifyMisunderstanding,
  RebutDisagree,
  PartiallyAccept,
  PromiseFutureWork,
};

inline constexpr std::array<ResponseType, 5> kAllResponseTypes = {
    ResponseType::AcceptRevise,   ResponseType::ClarifyMisunderstanding,
    ResponseType::RebutDisagree,  ResponseType::PartiallyAccept,
    ResponseType::PromiseFutureWork,
};

std::string_view response_type_name(ResponseType type);
ResponseType response_type_from_name(std::string_view name);

// One extracted reviewer concern with its aligned author reply: four ordinal
// scores, two categorical labels and the binary resolution indicator.
struct CommentResponsePair {
  std::string paper_id;
  int round = 1;
  std::string reviewer_id;
  int comment_index = 1;  // 1-based within (round, reviewer)
  std::string comment_text;
  std::optional<std::string> response_text;
  int s = 1;  // opinion strength
  int c = 1;  // constructiveness
  int q = 1;  // comment quality
  int r = 1;  // revision cost
  OpinionType opinion_type = OpinionType::Presentation;
  std::optional<ResponseType> response_type;  // present iff response_text present
  int persuaded = 1;                          // 0 | 1

  int score(Metric metric) const {
    switch (metric) {
      case Metric::OpinionStrength: return s;
      case Metric::Constructiveness: return c;
      case Metric::CommentQuality: return q;
      case Metric::RevisionCost: return r;
    }
    return s;
  }

  friend bool operator==(const CommentResponsePair&, const CommentResponsePair&) = default;
};

// Total, stable pair order: (paper_id, round, reviewer_id, comment_index).
bool pair_order(const CommentResponsePair& a, const CommentResponsePair& b);

}  // namespace revpipe
