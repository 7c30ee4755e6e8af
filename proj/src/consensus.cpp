#include "revpipe/consensus.hpp"

#include <algorithm>
#include <cmath>

#include <functional>

#include "revpipe/csv.hpp"
#include "revpipe/error.hpp"

namespace revpipe {

std::string_view consensus_kind_name(ConsensusKind kind) {
  switch (kind) {
    case ConsensusKind::FullConsensus: return "full_consensus";
    case ConsensusKind::OneDissenter: return "one_dissenter";
    case ConsensusKind::NoConsensus: return "no_consensus";
  }
  return "";
}

std::string_view polarity_name(DissenterPolarity polarity) {
  return polarity == DissenterPolarity::Supportive ? "supportive" : "harsh";
}

int dissenter_count(ConsensusKind kind) {
  switch (kind) {
    case ConsensusKind::FullConsensus: return 0;
    case ConsensusKind::OneDissenter: return 1;
    case ConsensusKind::NoConsensus: return 2;
  }
  return 0;
}

std::map<std::string, double> reviewer_round1_means(
    const std::vector<CommentResponsePair>& pairs) {
  std::map<std::string, std::pair<double, size_t>> acc;
  for (const auto& pair : pairs) {
    if (pair.round != 1) continue;
    auto& [sum, count] = acc[pair.reviewer_id];
    sum += pair.s;
    ++count;
  }
  if (acc.empty()) throw PipelineError(ErrorKind::NoRoundOnePairs, "paper has no round-1 pairs");
  std::map<std::string, double> means;
  for (const auto& [reviewer, sc] : acc) {
    means[reviewer] = sc.first / static_cast<double>(sc.second);
  }
  return means;
}

ConsensusConfiguration classify_consensus(const std::map<std::string, double>& means,
                                          double threshold) {
  if (means.size() != 3) {
    throw PipelineError(ErrorKind::WrongReviewerCount,
                        "expected exactly 3 reviewers, got " + std::to_string(means.size()));
  }
  struct Entry {
    std::string id;
    double mean;
  };
  std::vector<Entry> sorted;
  for (const auto& [id, mean] : means) sorted.push_back({id, mean});
  std::sort(sorted.begin(), sorted.end(), [](const Entry& a, const Entry& b) {
    return a.mean != b.mean ? a.mean < b.mean : a.id < b.id;
  });
  const auto& [low_id, low] = sorted[0];
  const auto& [mid_id, mid] = sorted[1];
  const auto& [high_id, high] = sorted[2];
  const double gap_low = mid - low;
  const double gap_high = high - mid;

  ConsensusConfiguration config;
  config.threshold = threshold;

  auto one_dissenter = [&](const Entry& dissenter, const Entry& a, const Entry& b) {
    config.kind = ConsensusKind::OneDissenter;
    config.dissenter_id = dissenter.id;
    config.polarity = dissenter.mean > (a.mean + b.mean) / 2.0 ? DissenterPolarity::Harsh
                                                               : DissenterPolarity::Supportive;
    return config;
  };

  if (high - low <= threshold) {
    config.kind = ConsensusKind::FullConsensus;
    return config;
  }
  if (gap_high > threshold && gap_low <= threshold) {
    // high mean sits > t from both others, (low, mid) stable
    return one_dissenter(sorted[2], sorted[0], sorted[1]);
  }
  if (gap_low > threshold && gap_high <= threshold) {
    return one_dissenter(sorted[0], sorted[1], sorted[2]);
  }
  if (gap_low > threshold && gap_high > threshold) {
    config.kind = ConsensusKind::NoConsensus;
    return config;
  }
  // Chain case: both adjacent gaps within t but span above t. Dissenter is
  // the endpoint farther from the middle, ties resolved to the harsh end.
  if (gap_high >= gap_low) return one_dissenter(sorted[2], sorted[0], sorted[1]);
  return one_dissenter(sorted[0], sorted[1], sorted[2]);
}

namespace {

struct PaperConsensus {
  std::string paper_id;
  ConsensusConfiguration config;
  double round1_mean_s = 0;
  double mean_r = 0;
  bool any_rebuttal = false;
};

}  // namespace

ConsensusTables consensus_tables(
    const std::vector<PaperSummary>& summaries,
    const std::map<std::string, std::vector<CommentResponsePair>>& pairs_by_paper,
    GroupSplit split, double threshold) {
  std::vector<PaperConsensus> papers;
  for (const auto& summary : summaries) {
    auto it = pairs_by_paper.find(summary.paper_id);
    if (it == pairs_by_paper.end()) continue;
    const auto& pairs = it->second;

    std::map<std::string, double> means;
    try {
      means = reviewer_round1_means(pairs);
    } catch (const PipelineError&) {
      continue;  // no round-1 pairs
    }
    if (means.size() != 3) continue;  // the paper restricts to 3-reviewer papers

    PaperConsensus pc;
    pc.paper_id = summary.paper_id;
    pc.config = classify_consensus(means, threshold);
    double sum = 0;
    size_t n = 0;
    for (const auto& pair : pairs) {
      if (pair.round != 1) continue;
      sum += pair.s;
      ++n;
    }
    pc.round1_mean_s = sum / static_cast<double>(n);
    pc.mean_r = summary.mean_r;
    pc.any_rebuttal = summary.rebuttal_rate > 0;
    papers.push_back(std::move(pc));
  }
  if (papers.empty()) {
    throw PipelineError(ErrorKind::NoEligiblePapers,
                        "no papers with exactly three first-round reviewers");
  }

  // Group assignment: values at or below the median go to the lower group.
  std::function<std::string(const PaperConsensus&)> group_of =
      [](const PaperConsensus&) { return std::string("all"); };
  std::vector<std::string> groups = {"all"};
  if (split == GroupSplit::MedianOpinionStrength) {
    std::vector<double> values;
    values.reserve(papers.size());
    for (const auto& p : papers) values.push_back(p.round1_mean_s);
    std::sort(values.begin(), values.end());
    const size_t n = values.size();
    const double median = n % 2 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
    group_of = [median](const PaperConsensus& p) {
      return p.round1_mean_s <= median ? std::string("lower") : std::string("higher");
    };
    groups = {"lower", "higher"};
  }

  ConsensusTables tables;
  tables.eligible_papers = static_cast<int>(papers.size());

  for (const auto& group : groups) {
    std::vector<const PaperConsensus*> members;
    for (const auto& p : papers) {
      if (group_of(p) == group) members.push_back(&p);
    }
    if (members.empty()) continue;
    const double denom = static_cast<double>(members.size());

    for (ConsensusKind kind : {ConsensusKind::FullConsensus, ConsensusKind::OneDissenter,
                               ConsensusKind::NoConsensus}) {
      int count = 0;
      for (const auto* p : members) {
        if (p->config.kind == kind) ++count;
      }
      tables.config_shares.push_back(
          {group, std::string(consensus_kind_name(kind)), count / denom, count});
    }
    int dissenters = 0, supportive = 0;
    for (const auto* p : members) {
      if (p->config.kind != ConsensusKind::OneDissenter) continue;
      ++dissenters;
      if (*p->config.polarity == DissenterPolarity::Supportive) ++supportive;
    }
    if (dissenters > 0) {
      tables.config_shares.push_back({group, "one_dissenter_supportive",
                                      supportive / static_cast<double>(dissenters), supportive});
      tables.config_shares.push_back({group, "one_dissenter_harsh",
                                      (dissenters - supportive) / static_cast<double>(dissenters),
                                      dissenters - supportive});
    }

    for (int d : {0, 1, 2}) {
      std::vector<const PaperConsensus*> bucket;
      for (const auto* p : members) {
        if (dissenter_count(p->config.kind) == d) bucket.push_back(p);
      }
      if (bucket.empty()) continue;
      double r_sum = 0;
      int rebuts = 0;
      for (const auto* p : bucket) {
        r_sum += p->mean_r;
        rebuts += p->any_rebuttal ? 1 : 0;
      }
      tables.revision.push_back(
          {group, d, r_sum / static_cast<double>(bucket.size()), static_cast<int>(bucket.size())});
      tables.rebuttal.push_back({group, d, "all", rebuts / static_cast<double>(bucket.size()),
                                 static_cast<int>(bucket.size())});
      if (d == 1) {
        for (DissenterPolarity polarity :
             {DissenterPolarity::Supportive, DissenterPolarity::Harsh}) {
          std::vector<const PaperConsensus*> sub;
          for (const auto* p : bucket) {
            if (*p->config.polarity == polarity) sub.push_back(p);
          }
          if (sub.empty()) continue;
          int sub_rebuts = 0;
          for (const auto* p : sub) sub_rebuts += p->any_rebuttal ? 1 : 0;
          tables.rebuttal.push_back({group, d, std::string(polarity_name(polarity)),
                                     sub_rebuts / static_cast<double>(sub.size()),
                                     static_cast<int>(sub.size())});
        }
      }
    }
  }
  return tables;
}

void write_fig4_csvs(const ConsensusTables& tables, const std::filesystem::path& dir) {
  {
    csv::Writer writer(dir / "fig4b_configs.csv");
    writer.header({"group", "category", "share", "n_papers"});
    for (const auto& row : tables.config_shares) {
      writer.row({row.group, row.category, csv::fmt(row.share), std::to_string(row.n_papers)});
    }
  }
  {
    csv::Writer writer(dir / "fig4c_revision.csv");
    writer.header({"group", "dissenters", "mean_revision_cost", "n_papers"});
    for (const auto& row : tables.revision) {
      writer.row({row.group, std::to_string(row.dissenters), csv::fmt(row.mean_revision_cost),
                  std::to_string(row.n_papers)});
    }
  }
  {
    csv::Writer writer(dir / "fig4c_rebuttal.csv");
    writer.header({"group", "dissenters", "polarity", "rebuttal_probability", "n_papers"});
    for (const auto& row : tables.rebuttal) {
      writer.row({row.group, std::to_string(row.dissenters), row.polarity,
                  csv::fmt(row.rebuttal_probability), std::to_string(row.n_papers)});
    }
  }
}

}  // namespace revpipe
