#include "revpipe/metrics.hpp"

#include <algorithm>
#include <set>

#include "revpipe/csv.hpp"
#include "revpipe/error.hpp"

namespace revpipe {

namespace {

bool counts_for_means(const CommentResponsePair& pair, const MetricsOptions& options) {
  return !(options.exclude_accept && pair.opinion_type == OpinionType::Accept);
}

}  // namespace

double paper_mean(const std::vector<CommentResponsePair>& pairs, Metric metric,
                  const MetricsOptions& options) {
  double sum = 0;
  size_t n = 0;
  for (const auto& pair : pairs) {
    if (!counts_for_means(pair, options)) continue;
    sum += pair.score(metric);
    ++n;
  }
  if (n == 0) throw PipelineError(ErrorKind::EmptyPairSet, "paper_mean over empty pair set");
  return sum / static_cast<double>(n);
}

double round_mean(const std::vector<CommentResponsePair>& pairs, int round, Metric metric,
                  const MetricsOptions& options, Weighting weighting) {
  if (weighting == Weighting::PairWeighted) {
    double sum = 0;
    size_t n = 0;
    for (const auto& pair : pairs) {
      if (pair.round != round || !counts_for_means(pair, options)) continue;
      sum += pair.score(metric);
      ++n;
    }
    if (n == 0) {
      throw PipelineError(ErrorKind::EmptyPairSet,
                          "no pairs in round " + std::to_string(round));
    }
    return sum / static_cast<double>(n);
  }

  // Paper-weighted: average the per-paper means for this round.
  std::map<std::string, std::pair<double, size_t>> per_paper;
  for (const auto& pair : pairs) {
    if (pair.round != round || !counts_for_means(pair, options)) continue;
    auto& [sum, count] = per_paper[pair.paper_id];
    sum += pair.score(metric);
    ++count;
  }
  if (per_paper.empty()) {
    throw PipelineError(ErrorKind::EmptyPairSet, "no pairs in round " + std::to_string(round));
  }
  double total = 0;
  for (const auto& [paper, acc] : per_paper) {
    total += acc.first / static_cast<double>(acc.second);
  }
  return total / static_cast<double>(per_paper.size());
}

double rebuttal_rate(const std::vector<CommentResponsePair>& pairs) {
  size_t responses = 0, rebuttals = 0;
  for (const auto& pair : pairs) {
    if (!pair.response_type) continue;
    ++responses;
    if (*pair.response_type == ResponseType::RebutDisagree) ++rebuttals;
  }
  if (responses == 0) throw PipelineError(ErrorKind::NoResponses, "no pairs carry a response");
  return static_cast<double>(rebuttals) / static_cast<double>(responses);
}

double persuasion_rate(const std::vector<CommentResponsePair>& pairs) {
  if (pairs.empty()) {
    throw PipelineError(ErrorKind::EmptyPairSet, "persuasion_rate over empty pair set");
  }
  double sum = 0;
  for (const auto& pair : pairs) sum += pair.persuaded;
  return sum / static_cast<double>(pairs.size());
}

std::map<std::string, double> proportions_by(const std::vector<CommentResponsePair>& pairs,
                                             CategoricalKey key) {
  std::map<std::string, size_t> counts;
  size_t total = 0;
  for (const auto& pair : pairs) {
    if (key == CategoricalKey::OpinionTypeKey) {
      ++counts[std::string(opinion_type_name(pair.opinion_type))];
      ++total;
    } else if (pair.response_type) {
      ++counts[std::string(response_type_name(*pair.response_type))];
      ++total;
    }
  }
  if (total == 0) {
    throw PipelineError(ErrorKind::EmptyPairSet, "proportions over empty pair set");
  }
  std::map<std::string, double> out;
  for (const auto& [name, count] : counts) {
    out[name] = static_cast<double>(count) / static_cast<double>(total);
  }
  return out;
}

PaperSummary summarize_paper(const CorrespondenceDocument& doc,
                             const std::vector<CommentResponsePair>& pairs,
                             const std::optional<TeamAttributes>& team,
                             std::optional<long long> c3, const MetricsOptions& options) {
  if (pairs.empty()) {
    throw PipelineError(ErrorKind::EmptyPairSet, "no pairs for paper " + doc.paper_id);
  }
  for (const auto& pair : pairs) {
    if (pair.paper_id != doc.paper_id) {
      throw PipelineError(ErrorKind::MismatchedPaperId,
                          pair.paper_id + " does not belong to " + doc.paper_id);
    }
  }

  PaperSummary summary;
  summary.paper_id = doc.paper_id;
  summary.year = doc.year;
  summary.field = doc.field;
  summary.n_pairs = static_cast<int>(pairs.size());
  summary.n_rounds = doc.n_rounds();
  summary.n_reviewers = static_cast<int>(doc.reviewer_ids().size());

  // exclude_accept can empty the continuous-mean set for all-Accept papers;
  // fall back to the full set in that case so the means stay defined.
  MetricsOptions mean_options = options;
  if (options.exclude_accept &&
      std::all_of(pairs.begin(), pairs.end(),
                  [](const auto& p) { return p.opinion_type == OpinionType::Accept; })) {
    mean_options.exclude_accept = false;
  }
  summary.mean_s = paper_mean(pairs, Metric::OpinionStrength, mean_options);
  summary.mean_c = paper_mean(pairs, Metric::Constructiveness, mean_options);
  summary.mean_q = paper_mean(pairs, Metric::CommentQuality, mean_options);
  summary.mean_r = paper_mean(pairs, Metric::RevisionCost, mean_options);
  summary.persuasion_rate = persuasion_rate(pairs);
  summary.rebuttal_rate = 0;
  if (std::any_of(pairs.begin(), pairs.end(),
                  [](const auto& p) { return p.response_type.has_value(); })) {
    summary.rebuttal_rate = rebuttal_rate(pairs);
  }

  for (const auto& [name, share] : proportions_by(pairs, CategoricalKey::OpinionTypeKey)) {
    summary.type_proportions[opinion_type_from_name(name)] = share;
  }
  if (std::any_of(pairs.begin(), pairs.end(),
                  [](const auto& p) { return p.response_type.has_value(); })) {
    for (const auto& [name, share] : proportions_by(pairs, CategoricalKey::ResponseTypeKey)) {
      summary.response_proportions[response_type_from_name(name)] = share;
    }
  }
  summary.c3 = c3;
  summary.team = team;
  return summary;
}

std::vector<PaperSummary> summarize_corpus(const Corpus& corpus,
                                           const std::vector<CommentResponsePair>& pairs,
                                           const MetricsOptions& options) {
  const auto grouped = group_pairs_by_paper(pairs);
  std::vector<PaperSummary> summaries;
  for (const auto& doc : corpus.documents) {
    auto it = grouped.find(doc.paper_id);
    if (it == grouped.end()) continue;
    std::optional<TeamAttributes> team;
    if (auto t = corpus.team.find(doc.paper_id); t != corpus.team.end()) team = t->second;
    std::optional<long long> c3;
    if (auto c = corpus.impact.find(doc.paper_id); c != corpus.impact.end()) c3 = c->second;
    summaries.push_back(summarize_paper(doc, it->second, team, c3, options));
  }
  return summaries;
}

std::string_view summary_quantity_name(SummaryQuantity quantity) {
  switch (quantity) {
    case SummaryQuantity::MeanS: return "opinion_strength";
    case SummaryQuantity::MeanC: return "constructiveness";
    case SummaryQuantity::MeanQ: return "comment_quality";
    case SummaryQuantity::MeanR: return "revision_cost";
    case SummaryQuantity::PersuasionRate: return "persuasion_success";
    case SummaryQuantity::RebuttalRate: return "rebuttal_rate";
    case SummaryQuantity::NRounds: return "n_rounds";
    case SummaryQuantity::NReviewers: return "n_reviewers";
    case SummaryQuantity::NPairs: return "n_pairs";
    case SummaryQuantity::C3: return "c3";
  }
  return "";
}

std::optional<double> summary_value(const PaperSummary& summary, SummaryQuantity quantity) {
  switch (quantity) {
    case SummaryQuantity::MeanS: return summary.mean_s;
    case SummaryQuantity::MeanC: return summary.mean_c;
    case SummaryQuantity::MeanQ: return summary.mean_q;
    case SummaryQuantity::MeanR: return summary.mean_r;
    case SummaryQuantity::PersuasionRate: return summary.persuasion_rate;
    case SummaryQuantity::RebuttalRate: return summary.rebuttal_rate;
    case SummaryQuantity::NRounds: return summary.n_rounds;
    case SummaryQuantity::NReviewers: return summary.n_reviewers;
    case SummaryQuantity::NPairs: return summary.n_pairs;
    case SummaryQuantity::C3:
      if (summary.c3) return static_cast<double>(*summary.c3);
      return std::nullopt;
  }
  return std::nullopt;
}

double field_mean(const std::vector<PaperSummary>& summaries, const std::string& field,
                  SummaryQuantity quantity) {
  double sum = 0;
  size_t n = 0;
  for (const auto& summary : summaries) {
    if (!summary.field || *summary.field != field) continue;
    if (auto value = summary_value(summary, quantity)) {
      sum += *value;
      ++n;
    }
  }
  if (n == 0) throw PipelineError(ErrorKind::EmptyField, field);
  return sum / static_cast<double>(n);
}

void write_paper_summaries_csv(const std::vector<PaperSummary>& summaries,
                               const std::filesystem::path& path) {
  csv::Writer writer(path);
  writer.header({"paper_id", "year", "field", "n_rounds", "n_reviewers", "n_pairs", "mean_s",
                 "mean_c", "mean_q", "mean_r", "persuasion_rate", "rebuttal_rate", "c3",
                 "team_size", "institution_count", "avg_decile", "max_decile"});
  for (const auto& s : summaries) {
    writer.row({
        s.paper_id,
        std::to_string(s.year),
        s.field.value_or(""),
        std::to_string(s.n_rounds),
        std::to_string(s.n_reviewers),
        std::to_string(s.n_pairs),
        csv::fmt(s.mean_s),
        csv::fmt(s.mean_c),
        csv::fmt(s.mean_q),
        csv::fmt(s.mean_r),
        csv::fmt(s.persuasion_rate),
        csv::fmt(s.rebuttal_rate),
        s.c3 ? std::to_string(*s.c3) : "",
        s.team ? std::to_string(s.team->team_size) : "",
        s.team ? std::to_string(s.team->institution_count) : "",
        s.team && s.team->avg_career_age_decile ? std::to_string(*s.team->avg_career_age_decile)
                                                : "",
        s.team && s.team->max_career_age_decile ? std::to_string(*s.team->max_career_age_decile)
                                                : "",
    });
  }
}

std::map<std::string, std::vector<CommentResponsePair>> group_pairs_by_paper(
    const std::vector<CommentResponsePair>& pairs) {
  std::map<std::string, std::vector<CommentResponsePair>> grouped;
  for (const auto& pair : pairs) grouped[pair.paper_id].push_back(pair);
  return grouped;
}

}  // namespace revpipe
