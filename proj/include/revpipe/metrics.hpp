#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "revpipe/corpus.hpp"
#include "revpipe/pair.hpp"

namespace revpipe {

struct MetricsOptions {
  // Drop Accept-type pairs from the continuous-score means. Categorical
  // proportions and rates are never affected.
  bool exclude_accept = false;
};

enum class Weighting { PairWeighted, PaperWeighted };

struct PaperSummary {
  std::string paper_id;
  int year = 0;
  std::optional<std::string> field;
  int n_pairs = 0;
  double mean_s = 0, mean_c = 0, mean_q = 0, mean_r = 0;
  double persuasion_rate = 0;
  double rebuttal_rate = 0;  // 0 when the paper has no responses
  int n_rounds = 0;
  int n_reviewers = 0;
  std::map<OpinionType, double> type_proportions;
  std::map<ResponseType, double> response_proportions;
  std::optional<long long> c3;
  std::optional<TeamAttributes> team;

  double mean(Metric metric) const {
    switch (metric) {
      case Metric::OpinionStrength: return mean_s;
      case Metric::Constructiveness: return mean_c;
      case Metric::CommentQuality: return mean_q;
      case Metric::RevisionCost: return mean_r;
    }
    return mean_s;
  }
};

// Arithmetic mean of one score over a paper's pairs.
double paper_mean(const std::vector<CommentResponsePair>& pairs, Metric metric,
                  const MetricsOptions& options = {});

// Pair-weighted mean over all pairs with the given round index; paper-weighted
// averages the per-paper round means instead.
double round_mean(const std::vector<CommentResponsePair>& pairs, int round, Metric metric,
                  const MetricsOptions& options = {},
                  Weighting weighting = Weighting::PairWeighted);

// count(RebutDisagree) / count(responses present).
double rebuttal_rate(const std::vector<CommentResponsePair>& pairs);

// Mean of the persuasion indicator.
double persuasion_rate(const std::vector<CommentResponsePair>& pairs);

enum class CategoricalKey { OpinionTypeKey, ResponseTypeKey };

// Normalized counts; zero-count categories omitted. Response-type proportions
// run over pairs that have a response.
std::map<std::string, double> proportions_by(const std::vector<CommentResponsePair>& pairs,
                                             CategoricalKey key);

PaperSummary summarize_paper(const CorrespondenceDocument& doc,
                             const std::vector<CommentResponsePair>& pairs,
                             const std::optional<TeamAttributes>& team = std::nullopt,
                             std::optional<long long> c3 = std::nullopt,
                             const MetricsOptions& options = {});

std::vector<PaperSummary> summarize_corpus(const Corpus& corpus,
                                           const std::vector<CommentResponsePair>& pairs,
                                           const MetricsOptions& options = {});

enum class SummaryQuantity {
  MeanS,
  MeanC,
  MeanQ,
  MeanR,
  PersuasionRate,
  RebuttalRate,
  NRounds,
  NReviewers,
  NPairs,
  C3,
};

std::string_view summary_quantity_name(SummaryQuantity quantity);
std::optional<double> summary_value(const PaperSummary& summary, SummaryQuantity quantity);

// Unweighted mean over the papers of one field.
double field_mean(const std::vector<PaperSummary>& summaries, const std::string& field,
                  SummaryQuantity quantity);

// Fixed-column paper-level export.
void write_paper_summaries_csv(const std::vector<PaperSummary>& summaries,
                               const std::filesystem::path& path);

std::map<std::string, std::vector<CommentResponsePair>> group_pairs_by_paper(
    const std::vector<CommentResponsePair>& pairs);

}  // namespace revpipe
