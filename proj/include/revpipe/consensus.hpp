#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "revpipe/metrics.hpp"
#include "revpipe/pair.hpp"

namespace revpipe {

enum class ConsensusKind { FullConsensus, OneDissenter, NoConsensus };
enum class DissenterPolarity { Supportive, Harsh };

std::string_view consensus_kind_name(ConsensusKind kind);
std::string_view polarity_name(DissenterPolarity polarity);

struct ConsensusConfiguration {
  ConsensusKind kind = ConsensusKind::FullConsensus;
  std::optional<std::string> dissenter_id;       // OneDissenter only
  std::optional<DissenterPolarity> polarity;     // OneDissenter only
  double threshold = 1.0;
};

// 0 / 1 / 2 dissenters for full consensus / one dissenter / no consensus.
int dissenter_count(ConsensusKind kind);

// Per-reviewer mean opinion strength over round-1 pairs.
std::map<std::string, double> reviewer_round1_means(
    const std::vector<CommentResponsePair>& pairs);

// Classification of exactly three first-round reviewer means at threshold t:
// full consensus when the spread fits within t; one dissenter when a single
// reviewer sits more than t from both others while the remaining pair stays
// within t (polarity harsh iff the dissenter mean strictly exceeds the other
// two's average); no consensus when both adjacent gaps exceed t. The chain
// case (both adjacent gaps within t but the span above it) resolves to one
// dissenter at the endpoint with the larger gap, ties to the harsh end.
ConsensusConfiguration classify_consensus(const std::map<std::string, double>& means,
                                          double threshold = 1.0);

enum class GroupSplit { None, MedianOpinionStrength };

struct ConsensusTables {
  struct ConfigShare {
    std::string group;
    std::string category;
    double share = 0;
    int n_papers = 0;
  };
  struct RevisionRow {
    std::string group;
    int dissenters = 0;
    double mean_revision_cost = 0;
    int n_papers = 0;
  };
  struct RebuttalRow {
    std::string group;
    int dissenters = 0;
    std::string polarity;  // "all" | "supportive" | "harsh"
    double rebuttal_probability = 0;
    int n_papers = 0;
  };
  std::vector<ConfigShare> config_shares;
  std::vector<RevisionRow> revision;
  std::vector<RebuttalRow> rebuttal;
  int eligible_papers = 0;
};

// Restricted to papers whose round-1 pairs come from exactly three reviewers.
// The median group split assigns papers at or below the median of the
// paper-level round-1 mean opinion strength to the lower group.
ConsensusTables consensus_tables(const std::vector<PaperSummary>& summaries,
                                 const std::map<std::string, std::vector<CommentResponsePair>>&
                                     pairs_by_paper,
                                 GroupSplit split = GroupSplit::MedianOpinionStrength,
                                 double threshold = 1.0);

void write_fig4_csvs(const ConsensusTables& tables, const std::filesystem::path& dir);

}  // namespace revpipe
