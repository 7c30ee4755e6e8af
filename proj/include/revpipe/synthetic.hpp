#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "revpipe/corpus.hpp"
#include "revpipe/pair.hpp"

namespace revpipe {

// Ground-truth configuration for the synthetic corpus generator. The
// generator realizes: per-round declining score levels, group-dependent
// dissenter configurations among three first-round reviewers, a Gaussian
// copula linking paper mean revision cost to C3 at the target Spearman
// correlation, and tail-conditional keyword injection into pair texts.
struct PlantedTruth {
  std::vector<double> round_means = {7.0, 4.5, 3.0};  // per-round target level
  double dissenter_prob_low = 0.15;
  double dissenter_prob_high = 0.45;
  double target_rho = 0.0;  // Spearman(paper mean_r, C3)
  double inject_high = 0.0;  // keyword injection probability, top tail
  double inject_low = 0.0;   // bottom tail
  double inject_tail_pct = 0.05;
  std::uint64_t seed = 42;
};

struct SyntheticCorpus {
  Corpus corpus;  // impact filled in
  std::vector<CommentResponsePair> pairs;
  std::string ground_truth_json;  // sidecar with the planted structure
};

// Deterministic given the truth config; per-paper randomness derives from
// seed ^ paper index, so generation order is immaterial.
SyntheticCorpus generate_synthetic_corpus(const PlantedTruth& truth, int n_papers);

}  // namespace revpipe
