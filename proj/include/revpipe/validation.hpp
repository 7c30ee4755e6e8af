#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "revpipe/keywords.hpp"
#include "revpipe/metrics.hpp"

namespace revpipe {

// The seven quantities compared across extraction runs.
inline constexpr std::array<SummaryQuantity, 7> kCrossModelQuantities = {
    SummaryQuantity::MeanS,     SummaryQuantity::MeanR,      SummaryQuantity::MeanC,
    SummaryQuantity::MeanQ,     SummaryQuantity::NRounds,    SummaryQuantity::NReviewers,
    SummaryQuantity::NPairs,
};

struct CrossModelReport {
  struct Entry {
    std::string model_a;
    std::string model_b;
    std::optional<double> pearson_r;  // absent when a quantity has no variance
  };
  std::map<SummaryQuantity, std::vector<Entry>> matrices;
  std::map<SummaryQuantity, std::optional<double>> mean_pairwise;
};

// Pairwise Pearson across papers for each model pair and quantity; runs must
// cover the same paper set.
CrossModelReport cross_model_agreement(
    const std::map<std::string, std::vector<PaperSummary>>& runs);

struct TailPrevalence {
  double top = 0;
  double bottom = 0;
  int tail_size = 0;
};

// Ranks papers by paper-level metric mean and reports the share of tail
// papers with at least one keyword hit (case-insensitive substring; comment
// text for the three comment-side metrics, response text for revision cost).
TailPrevalence keyword_prevalence(const std::vector<CommentResponsePair>& pairs,
                                  const KeywordRuleSet& rules, Metric metric, double tail_pct);

struct HighLowTasks {
  std::set<std::string> top;
  std::set<std::string> bottom;
};

// Top-k / bottom-k paper ids by paper-level metric mean, ties by paper_id.
HighLowTasks highlow_tasks(const std::vector<PaperSummary>& summaries, Metric metric, int k);

// Share of papers labeled by `reference` that `other` assigns the same tail;
// papers `other` leaves unlabeled count as disagreement.
double agreement_accuracy(const HighLowTasks& reference, const HighLowTasks& other);

}  // namespace revpipe
