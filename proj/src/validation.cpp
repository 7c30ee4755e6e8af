#include "revpipe/validation.hpp"

#include <algorithm>
#include <cmath>

#include "revpipe/error.hpp"
#include "revpipe/stats.hpp"
#include "revpipe/text.hpp"

namespace revpipe {

CrossModelReport cross_model_agreement(
    const std::map<std::string, std::vector<PaperSummary>>& runs) {
  if (runs.size() < 2) {
    throw PipelineError(ErrorKind::FewerThanTwoRuns,
                        "cross-model agreement needs >= 2 runs, got " +
                            std::to_string(runs.size()));
  }

  // All runs must cover the same paper set.
  std::map<std::string, std::map<std::string, const PaperSummary*>> by_model;
  const std::string* first_model = nullptr;
  for (const auto& [model, summaries] : runs) {
    auto& index = by_model[model];
    for (const auto& summary : summaries) index[summary.paper_id] = &summary;
    if (!first_model) {
      first_model = &model;
      continue;
    }
    const auto& reference = by_model[*first_model];
    if (index.size() != reference.size() ||
        !std::equal(index.begin(), index.end(), reference.begin(),
                    [](const auto& a, const auto& b) { return a.first == b.first; })) {
      throw PipelineError(ErrorKind::PaperSetMismatch,
                          "runs '" + *first_model + "' and '" + model +
                              "' cover different paper sets");
    }
  }

  CrossModelReport report;
  for (SummaryQuantity quantity : kCrossModelQuantities) {
    auto& matrix = report.matrices[quantity];
    double sum = 0;
    int defined = 0;
    for (auto a = runs.begin(); a != runs.end(); ++a) {
      for (auto b = std::next(a); b != runs.end(); ++b) {
        std::vector<double> va, vb;
        for (const auto& [paper_id, summary_a] : by_model[a->first]) {
          const auto* summary_b = by_model[b->first].at(paper_id);
          const auto value_a = summary_value(*summary_a, quantity);
          const auto value_b = summary_value(*summary_b, quantity);
          if (value_a && value_b) {
            va.push_back(*value_a);
            vb.push_back(*value_b);
          }
        }
        std::optional<double> r;
        try {
          r = stats::pearson(va, vb).estimate;
        } catch (const PipelineError&) {
          // zero variance or too few points: entry stays undefined
        }
        matrix.push_back({a->first, b->first, r});
        if (r) {
          sum += *r;
          ++defined;
        }
      }
    }
    report.mean_pairwise[quantity] =
        defined > 0 ? std::optional<double>(sum / defined) : std::nullopt;
  }
  return report;
}

TailPrevalence keyword_prevalence(const std::vector<CommentResponsePair>& pairs,
                                  const KeywordRuleSet& rules, Metric metric, double tail_pct) {
  if (pairs.empty()) throw PipelineError(ErrorKind::EmptyCorpus, "no pairs");
  if (tail_pct <= 0.0 || tail_pct >= 0.5) {
    throw PipelineError(ErrorKind::OutOfRange, "tail_pct must lie in (0, 0.5)");
  }

  const auto grouped = group_pairs_by_paper(pairs);
  const size_t floor_n = static_cast<size_t>(std::ceil(1.0 / tail_pct));
  if (grouped.size() < floor_n) {
    throw PipelineError(ErrorKind::EmptyCorpus,
                        "need >= " + std::to_string(floor_n) + " papers, got " +
                            std::to_string(grouped.size()));
  }

  std::vector<std::pair<double, std::string>> ranked;  // (mean, paper_id)
  for (const auto& [paper_id, paper_pairs] : grouped) {
    ranked.push_back({paper_mean(paper_pairs, metric), paper_id});
  }
  std::sort(ranked.begin(), ranked.end());

  const auto& patterns = rules.patterns.at(metric);
  auto has_hit = [&](const std::string& paper_id) {
    for (const auto& pair : grouped.at(paper_id)) {
      const std::string haystack =
          metric == Metric::RevisionCost
              ? text::to_lower(pair.response_text.value_or(""))
              : text::to_lower(pair.comment_text);
      for (const auto& pattern : patterns) {
        if (haystack.find(pattern) != std::string::npos) return true;
      }
    }
    return false;
  };

  const size_t k = std::max<size_t>(
      1, static_cast<size_t>(std::floor(tail_pct * static_cast<double>(ranked.size()))));
  TailPrevalence prevalence;
  prevalence.tail_size = static_cast<int>(k);
  int top_hits = 0, bottom_hits = 0;
  for (size_t i = 0; i < k; ++i) {
    if (has_hit(ranked[i].second)) ++bottom_hits;
    if (has_hit(ranked[ranked.size() - 1 - i].second)) ++top_hits;
  }
  prevalence.top = static_cast<double>(top_hits) / static_cast<double>(k);
  prevalence.bottom = static_cast<double>(bottom_hits) / static_cast<double>(k);
  return prevalence;
}

HighLowTasks highlow_tasks(const std::vector<PaperSummary>& summaries, Metric metric, int k) {
  if (k < 1) throw PipelineError(ErrorKind::OutOfRange, "k must be >= 1");
  if (summaries.size() < 2 * static_cast<size_t>(k)) {
    throw PipelineError(ErrorKind::TooFewPapers,
                        "need >= 2k papers (k=" + std::to_string(k) + "), got " +
                            std::to_string(summaries.size()));
  }
  std::vector<std::pair<double, std::string>> ranked;
  for (const auto& summary : summaries) ranked.push_back({summary.mean(metric), summary.paper_id});
  std::sort(ranked.begin(), ranked.end());

  HighLowTasks tasks;
  for (int i = 0; i < k; ++i) {
    tasks.bottom.insert(ranked[static_cast<size_t>(i)].second);
    tasks.top.insert(ranked[ranked.size() - 1 - static_cast<size_t>(i)].second);
  }
  return tasks;
}

double agreement_accuracy(const HighLowTasks& reference, const HighLowTasks& other) {
  if (reference.top.empty() && reference.bottom.empty()) {
    throw PipelineError(ErrorKind::EmptyTasks, "reference labels no papers");
  }
  size_t agreements = 0, total = 0;
  for (const auto& paper : reference.top) {
    ++total;
    if (other.top.count(paper)) ++agreements;
  }
  for (const auto& paper : reference.bottom) {
    ++total;
    if (other.bottom.count(paper)) ++agreements;
  }
  return static_cast<double>(agreements) / static_cast<double>(total);
}

}  // namespace revpipe
