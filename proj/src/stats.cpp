#include "revpipe/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>

#include "revpipe/error.hpp"
#include "revpipe/random.hpp"

namespace revpipe::stats {

namespace {

double t_two_sided_p(double t, double df) {
  if (!std::isfinite(t)) return 0.0;
  boost::math::students_t_distribution<double> dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
}

void check_correlation_inputs(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) {
    throw PipelineError(ErrorKind::LengthMismatch, std::to_string(x.size()) + " vs " +
                                                       std::to_string(y.size()));
  }
  if (x.size() < 3) {
    throw PipelineError(ErrorKind::TooFewPoints, "need n >= 3, got " + std::to_string(x.size()));
  }
  for (const auto* v : {&x, &y}) {
    for (double value : *v) {
      if (!std::isfinite(value)) {
        throw PipelineError(ErrorKind::OutOfRange, "non-finite value in correlation input");
      }
    }
  }
}

// Correlation core shared by pearson and spearman-on-ranks. The denominator
// is sqrt(var_x * var_y) in one sqrt so that identical inputs give exactly 1.
double correlation(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double mean_x = 0, mean_y = 0;
  for (size_t i = 0; i < n; ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);

  double sxx = 0, syy = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw PipelineError(ErrorKind::ZeroVariance, "constant input vector");
  }
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

StatResult correlation_result(const std::vector<double>& x, const std::vector<double>& y) {
  const double r = correlation(x, y);
  const int n = static_cast<int>(x.size());
  StatResult result;
  result.estimate = r;
  result.n = n;
  if (std::fabs(r) >= 1.0) {
    result.p_value = 0.0;
  } else {
    const double t = r * std::sqrt((n - 2) / (1.0 - r * r));
    result.p_value = t_two_sided_p(t, n - 2);
  }
  result.stars = stars(result.p_value);
  return result;
}

}  // namespace

std::string stars(double p) {
  if (std::isnan(p) || p < 0.0 || p > 1.0) {
    throw PipelineError(ErrorKind::OutOfRange, "p-value outside [0,1]");
  }
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

std::vector<double> average_ranks(const std::vector<double>& values) {
  const size_t n = values.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return values[a] < values[b]; });

  std::vector<double> ranks(n);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double shared = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

StatResult spearman(const std::vector<double>& x, const std::vector<double>& y) {
  check_correlation_inputs(x, y);
  return correlation_result(average_ranks(x), average_ranks(y));
}

StatResult spearman_permutation(const std::vector<double>& x, const std::vector<double>& y,
                                int n_shuffles, std::uint64_t seed) {
  check_correlation_inputs(x, y);
  if (n_shuffles < 1) throw PipelineError(ErrorKind::OutOfRange, "n_shuffles must be >= 1");
  const auto rank_x = average_ranks(x);
  const auto rank_y = average_ranks(y);
  const double observed = correlation(rank_x, rank_y);

  Rng rng(seed);
  std::vector<double> shuffled = rank_y;
  int at_least_as_extreme = 0;
  for (int s = 0; s < n_shuffles; ++s) {
    for (size_t i = shuffled.size() - 1; i > 0; --i) {
      const size_t j = static_cast<size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i)));
      std::swap(shuffled[i], shuffled[j]);
    }
    if (std::fabs(correlation(rank_x, shuffled)) >= std::fabs(observed) - 1e-15) {
      ++at_least_as_extreme;
    }
  }
  StatResult result;
  result.estimate = observed;
  result.n = static_cast<int>(x.size());
  result.p_value = (at_least_as_extreme + 1.0) / (n_shuffles + 1.0);
  result.stars = stars(result.p_value);
  return result;
}

StatResult pearson(const std::vector<double>& x, const std::vector<double>& y) {
  check_correlation_inputs(x, y);
  return correlation_result(x, y);
}

std::string OlsFit::stars_for(const std::string& term) const {
  auto it = p_value.find(term);
  return it == p_value.end() ? "" : stars(it->second);
}

OlsFit ols_fit(const std::vector<double>& outcome, const NamedColumn& focal,
               const std::vector<NamedColumn>& controls, const std::vector<int>& years,
               const OlsOptions& options) {
  const size_t n = outcome.size();
  if (focal.values.size() != n || years.size() != n) {
    throw PipelineError(ErrorKind::RowMismatch, "outcome/focal/years row counts differ");
  }
  for (const auto& control : controls) {
    if (control.values.size() != n) {
      throw PipelineError(ErrorKind::RowMismatch, "control '" + control.name + "' row count");
    }
  }
  if (n == 0) throw PipelineError(ErrorKind::RankZeroDesign, "no rows");

  // Design: intercept, focal, controls, year dummies (earliest year omitted).
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  names.push_back("intercept");
  columns.emplace_back(n, 1.0);
  names.push_back(focal.name);
  columns.push_back(focal.values);
  for (const auto& control : controls) {
    names.push_back(control.name);
    columns.push_back(control.values);
  }
  std::vector<int> distinct_years(years.begin(), years.end());
  std::sort(distinct_years.begin(), distinct_years.end());
  distinct_years.erase(std::unique(distinct_years.begin(), distinct_years.end()),
                       distinct_years.end());
  for (size_t yi = 1; yi < distinct_years.size(); ++yi) {
    names.push_back("year::" + std::to_string(distinct_years[yi]));
    std::vector<double> dummy(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
      if (years[i] == distinct_years[yi]) dummy[i] = 1.0;
    }
    columns.push_back(std::move(dummy));
  }

  // Sequential Gram-Schmidt sweep in design order: a column whose residual
  // norm against the retained basis falls below the pivot floor is collinear
  // and gets dropped, so earlier columns always win.
  constexpr double kPivotFloor = 1e-10;
  OlsFit fit;
  std::vector<size_t> retained;
  Eigen::MatrixXd basis(n, 0);
  for (size_t c = 0; c < columns.size(); ++c) {
    Eigen::Map<const Eigen::VectorXd> col(columns[c].data(), static_cast<Eigen::Index>(n));
    Eigen::VectorXd residual = col;
    for (int pass = 0; pass < 2; ++pass) {
      if (basis.cols() > 0) residual -= basis * (basis.transpose() * residual);
    }
    if (residual.norm() < kPivotFloor) {
      fit.dropped_terms.push_back(names[c]);
      continue;
    }
    basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
    basis.col(basis.cols() - 1) = residual.normalized();
    retained.push_back(c);
  }
  if (retained.empty()) {
    throw PipelineError(ErrorKind::RankZeroDesign, "all design columns collinear or zero");
  }
  const size_t k = retained.size();
  if (n <= k) {
    throw PipelineError(ErrorKind::RankZeroDesign,
                        "need n > retained terms (" + std::to_string(k) + ")");
  }

  Eigen::MatrixXd X(n, static_cast<Eigen::Index>(k));
  for (size_t j = 0; j < k; ++j) {
    X.col(static_cast<Eigen::Index>(j)) = Eigen::Map<const Eigen::VectorXd>(
        columns[retained[j]].data(), static_cast<Eigen::Index>(n));
  }
  Eigen::Map<const Eigen::VectorXd> y(outcome.data(), static_cast<Eigen::Index>(n));

  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
  const Eigen::VectorXd beta = qr.solve(y);
  const Eigen::VectorXd residuals = y - X * beta;
  const double rss = residuals.squaredNorm();
  const double df = static_cast<double>(n - k);
  const double sigma2 = rss / df;

  // (X'X)^-1 from the R factor.
  const Eigen::MatrixXd R =
      qr.matrixQR().topRows(static_cast<Eigen::Index>(k)).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd Rinv =
      R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(
          static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)));
  const Eigen::MatrixXd xtx_inv = Rinv * Rinv.transpose();

  Eigen::MatrixXd covariance;
  if (options.robust_se) {
    // HC1 sandwich with an n/(n-k) small-sample correction.
    const Eigen::MatrixXd meat =
        X.transpose() * residuals.array().square().matrix().asDiagonal() * X;
    covariance = xtx_inv * meat * xtx_inv * (static_cast<double>(n) / df);
  } else {
    covariance = sigma2 * xtx_inv;
  }

  const double mean_y = y.mean();
  const double tss = (y.array() - mean_y).matrix().squaredNorm();
  fit.n = static_cast<int>(n);
  fit.r_squared = tss > 0 ? 1.0 - rss / tss : 0.0;

  for (size_t j = 0; j < k; ++j) {
    const std::string& name = names[retained[j]];
    const double b = beta(static_cast<Eigen::Index>(j));
    const double se =
        std::sqrt(covariance(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)));
    fit.coef[name] = b;
    fit.std_err[name] = se;
    const double t = se > 0 ? b / se : 0.0;
    fit.t_stat[name] = t;
    fit.p_value[name] = se > 0 ? t_two_sided_p(t, df) : 1.0;
  }
  return fit;
}

double log1p_outcome(long long c3) {
  if (c3 < 0) throw PipelineError(ErrorKind::NegativeInput, "c3 = " + std::to_string(c3));
  return std::log1p(static_cast<double>(c3));
}

TailSelection stratified_tails(const std::map<std::string, double>& values,
                               const std::map<std::string, std::string>& strata, double pct) {
  if (values.empty()) throw PipelineError(ErrorKind::EmptyInput, "no values");
  if (pct <= 0.0 || pct >= 0.5) {
    throw PipelineError(ErrorKind::OutOfRange, "pct must lie in (0, 0.5)");
  }

  std::map<std::string, std::vector<std::pair<double, std::string>>> by_stratum;
  for (const auto& [key, value] : values) {
    auto it = strata.find(key);
    if (it == strata.end()) {
      throw PipelineError(ErrorKind::EmptyInput, "no stratum for key '" + key + "'");
    }
    by_stratum[it->second].push_back({value, key});
  }

  const auto floor_n = static_cast<size_t>(std::ceil(1.0 / pct));
  TailSelection selection;
  for (auto& [stratum, members] : by_stratum) {
    if (members.size() < floor_n) {
      selection.skipped_strata.push_back(stratum);
      continue;
    }
    std::sort(members.begin(), members.end());  // (score, key) ascending
    const size_t k = std::max<size_t>(
        1, static_cast<size_t>(std::floor(pct * static_cast<double>(members.size()))));
    for (size_t i = 0; i < k; ++i) {
      selection.bottom.insert(members[i].second);
      selection.top.insert(members[members.size() - 1 - i].second);
    }
  }
  return selection;
}

WelchResult extreme_group_diff(const std::set<std::string>& top,
                               const std::set<std::string>& bottom,
                               const std::map<std::string, double>& outcome) {
  if (top.empty() || bottom.empty()) {
    throw PipelineError(ErrorKind::EmptyGroup, "both tails must be non-empty");
  }
  auto collect = [&](const std::set<std::string>& keys) {
    std::vector<double> out;
    for (const auto& key : keys) {
      auto it = outcome.find(key);
      if (it == outcome.end()) {
        throw PipelineError(ErrorKind::EmptyGroup, "outcome missing for '" + key + "'");
      }
      out.push_back(it->second);
    }
    return out;
  };
  const auto a = collect(top);
  const auto b = collect(bottom);

  auto mean_var = [](const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    double mean = 0;
    for (double x : v) mean += x;
    mean /= n;
    double var = 0;
    for (double x : v) var += (x - mean) * (x - mean);
    var = v.size() > 1 ? var / (n - 1) : 0.0;
    return std::pair{mean, var};
  };
  const auto [mean_a, var_a] = mean_var(a);
  const auto [mean_b, var_b] = mean_var(b);

  WelchResult result;
  result.diff = mean_a - mean_b;
  result.n_top = static_cast<int>(a.size());
  result.n_bottom = static_cast<int>(b.size());

  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double se2 = var_a / na + var_b / nb;
  if (se2 <= 0.0 || a.size() < 2 || b.size() < 2) {
    // Degenerate groups: identical constants give p = 1, separated p = 0.
    result.p_value = result.diff == 0.0 ? 1.0 : 0.0;
    return result;
  }
  const double t = result.diff / std::sqrt(se2);
  const double df = se2 * se2 /
                    ((var_a / na) * (var_a / na) / (na - 1) +
                     (var_b / nb) * (var_b / nb) / (nb - 1));
  result.p_value = t_two_sided_p(t, df);
  return result;
}

namespace {

template <typename TypeT, typename Matches>
double per_type_score_impl(const std::vector<CommentResponsePair>& pairs, TypeT, Metric metric,
                           Matches matches, const char* label) {
  double sum = 0;
  size_t n = 0;
  for (const auto& pair : pairs) {
    if (!matches(pair)) continue;
    sum += pair.score(metric);
    ++n;
  }
  if (n == 0) throw PipelineError(ErrorKind::NoPairsOfType, label);
  return sum / static_cast<double>(n);
}

}  // namespace

double per_type_paper_score(const std::vector<CommentResponsePair>& pairs, OpinionType type,
                            Metric metric) {
  return per_type_score_impl(
      pairs, type, metric, [&](const CommentResponsePair& p) { return p.opinion_type == type; },
      "no pairs of requested opinion type");
}

double per_type_paper_score(const std::vector<CommentResponsePair>& pairs, ResponseType type,
                            Metric metric) {
  return per_type_score_impl(
      pairs, type, metric,
      [&](const CommentResponsePair& p) { return p.response_type && *p.response_type == type; },
      "no pairs of requested response type");
}

}  // namespace revpipe::stats
