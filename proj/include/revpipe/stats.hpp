#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "revpipe/pair.hpp"

namespace revpipe::stats {

struct StatResult {
  double estimate = 0;
  double p_value = 1;
  int n = 0;
  std::string stars;
};

// "***" p<0.001, "**" p<0.01, "*" p<0.05, strict inequalities.
std::string stars(double p);

// Average ranks for ties, Pearson on ranks, two-sided t-approximation
// p-value with n-2 df; rho = +/-1 maps to p = 0.
StatResult spearman(const std::vector<double>& x, const std::vector<double>& y);

// Same estimate with a permutation p-value for small n: the share of
// shuffles with |rho| at least as extreme, add-one smoothed.
StatResult spearman_permutation(const std::vector<double>& x, const std::vector<double>& y,
                                int n_shuffles = 10000, std::uint64_t seed = 1);

// Product-moment correlation with the same p-value approximation.
StatResult pearson(const std::vector<double>& x, const std::vector<double>& y);

// Average ranks (1-based) with ties sharing the mean rank.
std::vector<double> average_ranks(const std::vector<double>& values);

struct OlsFit {
  std::map<std::string, double> coef;
  std::map<std::string, double> std_err;
  std::map<std::string, double> t_stat;
  std::map<std::string, double> p_value;
  int n = 0;
  double r_squared = 0;
  std::vector<std::string> dropped_terms;

  std::string stars_for(const std::string& term) const;
};

struct NamedColumn {
  std::string name;
  std::vector<double> values;
};

struct OlsOptions {
  bool robust_se = false;  // HC1 sandwich errors instead of classical
};

// OLS of outcome on intercept + focal + controls + year dummies (reference =
// earliest year). Columns whose orthogonalized norm falls below 1e-10 are
// dropped and reported. Classical standard errors by default, two-sided t
// p-values with n-k df.
OlsFit ols_fit(const std::vector<double>& outcome, const NamedColumn& focal,
               const std::vector<NamedColumn>& controls, const std::vector<int>& years,
               const OlsOptions& options = {});

double log1p_outcome(long long c3);

struct TailSelection {
  std::set<std::string> top;
  std::set<std::string> bottom;
  std::vector<std::string> skipped_strata;  // below the size floor ceil(1/pct)
};

// Within each stratum of size n >= ceil(1/pct), picks the k = max(1,
// floor(pct*n)) highest and lowest scores, ties broken by ascending key.
TailSelection stratified_tails(const std::map<std::string, double>& values,
                               const std::map<std::string, std::string>& strata, double pct);

struct WelchResult {
  double diff = 0;     // mean(top) - mean(bottom)
  double p_value = 1;  // Welch two-sample, two-sided
  int n_top = 0;
  int n_bottom = 0;
};

WelchResult extreme_group_diff(const std::set<std::string>& top,
                               const std::set<std::string>& bottom,
                               const std::map<std::string, double>& outcome);

// Mean of one score over a paper's pairs with the given opinion type.
double per_type_paper_score(const std::vector<CommentResponsePair>& pairs, OpinionType type,
                            Metric metric);
// Same for response types (pairs without a response never match).
double per_type_paper_score(const std::vector<CommentResponsePair>& pairs, ResponseType type,
                            Metric metric);

}  // namespace revpipe::stats
