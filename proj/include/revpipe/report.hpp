#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "revpipe/extraction.hpp"
#include "revpipe/synthetic.hpp"

namespace revpipe {

struct AnalysisToggles {
  bool exclude_accept = false;
  double tail_pct = 0.05;           // extreme-group tails (fig5)
  double consensus_threshold = 1.0;
  double c3_tail_pct = 0.10;        // sifig3 top/bottom C3 split
  bool within_year_c3_tails = true;
};

struct RunConfig {
  std::filesystem::path corpus_path;
  std::filesystem::path impact_path;  // optional impact CSV joined before analysis
  std::string backend = "mock";       // mock | http
  BackendConfig http;
  AnalysisToggles toggles;
  std::filesystem::path out_dir;
  std::uint64_t seed = 42;
  int jobs = 4;
  double mock_jitter = 0.0;
  std::vector<std::filesystem::path> pairs_files;
  int highlow_k = 0;  // 0 = max(1, n/10)
};

// Subcommand bodies. Each writes its documented files under out_dir plus a
// run_meta.json (the only file carrying a timestamp) and returns 0.
int run_extract(const RunConfig& config);
int run_analyze(const RunConfig& config);
int run_consensus(const RunConfig& config);
int run_validate(const RunConfig& config);
int run_synth(const RunConfig& config, const PlantedTruth& truth, int n_papers);
int run_report(RunConfig config);  // extract (if needed) + analyze + consensus + validate

// First three fields of an si_ols_overall.csv row; exposed so the row format
// is testable on fixed inputs.
std::string ols_report_prefix(const std::string& metric, double coef, double p);

}  // namespace revpipe
