#include "revpipe/stats.hpp"

#include <cmath>
#include <numeric>

#include "doctest.h"
#include "helpers.hpp"
#include "revpipe/error.hpp"
#include "revpipe/random.hpp"

using namespace revpipe;
using stats::StatResult;

namespace {

// Brute-force oracle: ordinal sort, shared average ranks, then the textbook
// product-moment formula in long double.
std::vector<double> oracle_ranks(const std::vector<double>& v) {
  std::vector<double> ranks(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    size_t below = 0, equal = 0;
    for (size_t j = 0; j < v.size(); ++j) {
      if (v[j] < v[i]) ++below;
      if (v[j] == v[i]) ++equal;
    }
    // Positions below+1 .. below+equal share the average rank.
    ranks[i] = below + (equal + 1) / 2.0;
  }
  return ranks;
}

long double oracle_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  long double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  long double sxx = 0, syy = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

TEST_CASE("spearman handles monotone and reversed inputs") {
  const auto up = stats::spearman({1, 2, 3}, {1, 2, 3});
  CHECK(up.estimate == doctest::Approx(1.0));
  CHECK(up.p_value == doctest::Approx(0.0));
  const auto down = stats::spearman({1, 2, 3}, {3, 2, 1});
  CHECK(down.estimate == doctest::Approx(-1.0));
  CHECK(down.p_value == doctest::Approx(0.0));
}

TEST_CASE("spearman uses average ranks for ties") {
  // Brute-force oracle value, cross-checked against scipy.stats.spearmanr:
  // ranks x = [1, 2.5, 2.5, 4], y = [1, 3, 2, 4] -> rho = 0.9486832980505138.
  const std::vector<double> x = {1, 2, 2, 4}, y = {1, 3, 2, 4};
  const double expected =
      static_cast<double>(oracle_pearson(oracle_ranks(x), oracle_ranks(y)));
  CHECK(expected == doctest::Approx(0.9486832980505138).epsilon(1e-14));
  const auto result = stats::spearman(x, y);
  CHECK(result.estimate == doctest::Approx(0.9486832980505138).epsilon(1e-14));
  CHECK(result.p_value == doctest::Approx(0.05131670194948612).epsilon(1e-10));
}

TEST_CASE("spearman matches a frozen scipy case") {
  const std::vector<double> x = {17, 86, 60, 77, 47, 3, 70, 87, 88, 92};
  const std::vector<double> y = {70, 29, 85, 61, 80, 34, 60, 31, 73, 66};
  const auto result = stats::spearman(x, y);
  CHECK(result.estimate == doctest::Approx(-0.16363636363636364).epsilon(1e-12));
  CHECK(result.p_value == doctest::Approx(0.6514773427962428).epsilon(1e-10));
  CHECK(result.stars.empty());
}

TEST_CASE("spearman error paths") {
  CHECK_THROWS_AS((void)stats::spearman({1, 2}, {1, 2, 3}), PipelineError);
  CHECK_THROWS_AS((void)stats::spearman({1, 2}, {1, 2}), PipelineError);
  CHECK_THROWS_AS((void)stats::spearman({5, 5, 5}, {1, 2, 3}), PipelineError);
}

TEST_CASE("spearman is exactly invariant under strictly increasing transforms") {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> x, y;
    const int n = 4 + static_cast<int>(rng.uniform_int(0, 8));
    for (int i = 0; i < n; ++i) {
      x.push_back(static_cast<double>(rng.uniform_int(0, 6)));
      y.push_back(rng.normal());
    }
    std::vector<double> tx;
    for (double v : x) tx.push_back(std::exp(v / 3.0));
    StatResult base, transformed;
    try {
      base = stats::spearman(x, y);
      transformed = stats::spearman(tx, y);
    } catch (const PipelineError&) {
      continue;  // zero-variance draw
    }
    CHECK(base.estimate == transformed.estimate);  // exact: ranks are identical
  }
}

TEST_CASE("pearson handles affine relationships") {
  std::vector<double> x = {1, 2, 3, 4, 5};
  std::vector<double> y;
  for (double v : x) y.push_back(2 * v + 1);
  const auto exact = stats::pearson(x, y);
  CHECK(exact.estimate == doctest::Approx(1.0));
  CHECK(exact.p_value == doctest::Approx(0.0));

  std::vector<double> neg;
  for (double v : x) neg.push_back(-v);
  CHECK(stats::pearson(x, neg).estimate == doctest::Approx(-1.0));
}

TEST_CASE("pearson matches the textbook formula and a frozen scipy case") {
  const std::vector<double> x = {17, 86, 60, 77, 47, 3, 70, 87, 88, 92};
  const std::vector<double> y = {70, 29, 85, 61, 80, 34, 60, 31, 73, 66};
  const auto result = stats::pearson(x, y);
  CHECK(result.estimate ==
        doctest::Approx(static_cast<double>(oracle_pearson(x, y))).epsilon(1e-14));
  CHECK(result.estimate == doctest::Approx(-0.033621194725622014).epsilon(1e-12));
  CHECK(result.p_value == doctest::Approx(0.926536715854247).epsilon(1e-10));
}

TEST_CASE("pearson is invariant under positive affine transforms to 1e-12") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x, y;
    for (int i = 0; i < 12; ++i) {
      x.push_back(rng.normal());
      y.push_back(rng.normal() + 0.4 * x.back());
    }
    std::vector<double> tx;
    for (double v : x) tx.push_back(2.5 * v + 7.0);
    const auto base = stats::pearson(x, y);
    const auto transformed = stats::pearson(tx, y);
    CHECK(std::abs(base.estimate - transformed.estimate) < 1e-12);
  }
}

TEST_CASE("identical vectors correlate to exactly one") {
  const std::vector<double> x = {0.3, 1.7, 2.9, 0.01, 5.5};
  CHECK(stats::pearson(x, x).estimate == 1.0);
}

TEST_CASE("ols_fit recovers an exact linear relationship") {
  std::vector<double> x, y;
  std::vector<int> years;
  for (int i = 0; i < 10; ++i) {
    x.push_back(i);
    y.push_back(3.0 + 2.0 * i);
    years.push_back(2020);
  }
  const auto fit = stats::ols_fit(y, {"x", x}, {}, years);
  CHECK(fit.coef.at("x") == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(fit.coef.at("intercept") == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fit.dropped_terms.empty());
}

TEST_CASE("ols_fit drops duplicated columns and keeps the fit identical") {
  Rng rng(5);
  std::vector<double> x, z, y;
  std::vector<int> years;
  for (int i = 0; i < 60; ++i) {
    x.push_back(rng.normal());
    z.push_back(rng.normal());
    y.push_back(1.0 + 0.8 * x.back() - 0.3 * z.back() + 0.05 * rng.normal());
    years.push_back(2020 + i % 3);
  }
  const auto base = stats::ols_fit(y, {"x", x}, {{"z", z}}, years);
  const auto duplicated = stats::ols_fit(y, {"x", x}, {{"z", z}, {"z_copy", z}}, years);
  REQUIRE(duplicated.dropped_terms.size() == 1);
  CHECK(duplicated.dropped_terms[0] == "z_copy");
  for (const auto& [term, coef] : base.coef) {
    CHECK(duplicated.coef.at(term) == doctest::Approx(coef).epsilon(1e-10));
  }
  CHECK(duplicated.r_squared == doctest::Approx(base.r_squared).epsilon(1e-10));
}

TEST_CASE("ols_fit residuals are orthogonal to retained columns") {
  Rng rng(9);
  const int n = 200;
  std::vector<double> x, z, y;
  std::vector<int> years;
  for (int i = 0; i < n; ++i) {
    x.push_back(rng.normal());
    z.push_back(rng.uniform());
    years.push_back(2017 + i % 5);
    y.push_back(0.5 * x.back() + 0.2 * z.back() + 0.1 * rng.normal() + 0.3 * (years.back() % 5));
  }
  const auto fit = stats::ols_fit(y, {"x", x}, {{"z", z}}, years);

  // Reconstruct fitted residuals and check X'e directly.
  std::vector<double> residuals(n);
  for (int i = 0; i < n; ++i) {
    double pred = fit.coef.at("intercept") + fit.coef.at("x") * x[i] + fit.coef.at("z") * z[i];
    for (const auto& [term, coef] : fit.coef) {
      if (term.rfind("year::", 0) == 0 && years[i] == std::stoi(term.substr(6))) pred += coef;
    }
    residuals[i] = y[i] - pred;
  }
  auto dot_abs = [&](const std::vector<double>& column) {
    double acc = 0;
    for (int i = 0; i < n; ++i) acc += column[i] * residuals[i];
    return std::abs(acc);
  };
  CHECK(dot_abs(std::vector<double>(n, 1.0)) < 1e-8 * n);
  CHECK(dot_abs(x) < 1e-8 * n);
  CHECK(dot_abs(z) < 1e-8 * n);
}

TEST_CASE("year fixed effects equal the within-year demeaned fit") {
  Rng rng(21);
  const int n = 300;
  std::vector<double> x, y;
  std::vector<int> years;
  std::map<int, double> year_effect = {{2018, 0.0}, {2019, 0.7}, {2020, -0.4}};
  for (int i = 0; i < n; ++i) {
    const int year = 2018 + static_cast<int>(rng.uniform_int(0, 2));
    years.push_back(year);
    x.push_back(rng.normal());
    y.push_back(0.5 * x.back() + year_effect[year] + 0.1 * rng.normal());
  }
  const auto dummies = stats::ols_fit(y, {"x", x}, {}, years);

  // Demean y and x within years, then fit without year terms.
  std::map<int, std::pair<double, int>> acc_x, acc_y;
  for (int i = 0; i < n; ++i) {
    acc_x[years[i]].first += x[i];
    acc_x[years[i]].second += 1;
    acc_y[years[i]].first += y[i];
    acc_y[years[i]].second += 1;
  }
  std::vector<double> dx(n), dy(n);
  std::vector<int> one_year(n, 2018);
  for (int i = 0; i < n; ++i) {
    dx[i] = x[i] - acc_x[years[i]].first / acc_x[years[i]].second;
    dy[i] = y[i] - acc_y[years[i]].first / acc_y[years[i]].second;
  }
  const auto demeaned = stats::ols_fit(dy, {"x", dx}, {}, one_year);
  CHECK(std::abs(dummies.coef.at("x") - demeaned.coef.at("x")) < 1e-8);
}

TEST_CASE("ols_fit error paths") {
  CHECK_THROWS_AS((void)stats::ols_fit({1, 2}, {"x", {1, 2, 3}}, {}, {2020, 2020}),
                  PipelineError);
  // All-zero design beyond the intercept with too few rows.
  CHECK_THROWS_AS((void)stats::ols_fit({1.0}, {"x", {0.0}}, {}, {2020}), PipelineError);
}

TEST_CASE("log1p_outcome") {
  CHECK(stats::log1p_outcome(0) == doctest::Approx(0.0));
  CHECK(stats::log1p_outcome(7) == doctest::Approx(2.0794415416798357).epsilon(1e-15));
  CHECK_THROWS_AS((void)stats::log1p_outcome(-1), PipelineError);
}

TEST_CASE("stratified_tails selects per-stratum extremes") {
  std::map<std::string, double> values;
  std::map<std::string, std::string> strata;
  for (int i = 1; i <= 20; ++i) {
    const std::string key = i < 10 ? "p0" + std::to_string(i) : "p" + std::to_string(i);
    values[key] = i;
    strata[key] = "only";
  }
  const auto tails = stats::stratified_tails(values, strata, 0.05);
  CHECK(tails.top == std::set<std::string>{"p20"});
  CHECK(tails.bottom == std::set<std::string>{"p01"});
  CHECK(tails.skipped_strata.empty());
}

TEST_CASE("stratified_tails skips strata below the size floor") {
  std::map<std::string, double> values;
  std::map<std::string, std::string> strata;
  for (int i = 1; i <= 10; ++i) {
    values["p" + std::to_string(i)] = i;
    strata["p" + std::to_string(i)] = "small";
  }
  const auto tails = stats::stratified_tails(values, strata, 0.05);  // floor is 20
  CHECK(tails.top.empty());
  CHECK(tails.bottom.empty());
  REQUIRE(tails.skipped_strata.size() == 1);
  CHECK(tails.skipped_strata[0] == "small");
}

TEST_CASE("stratified_tails unions per-stratum selections and stays disjoint") {
  std::map<std::string, double> values;
  std::map<std::string, std::string> strata;
  for (int i = 0; i < 10; ++i) {
    values["a" + std::to_string(i)] = i;
    strata["a" + std::to_string(i)] = "A";
    values["b" + std::to_string(i)] = 100 - i;
    strata["b" + std::to_string(i)] = "B";
  }
  const auto tails = stats::stratified_tails(values, strata, 0.2);  // k = 2 per stratum

  // Sort-and-slice oracle per stratum.
  CHECK(tails.bottom == std::set<std::string>{"a0", "a1", "b8", "b9"});
  CHECK(tails.top == std::set<std::string>{"a8", "a9", "b0", "b1"});
  for (const auto& key : tails.top) CHECK_FALSE(tails.bottom.count(key));

  // Within-stratum constant shifts leave the selection unchanged.
  auto shifted = values;
  for (auto& [key, value] : shifted) {
    if (strata[key] == "A") value += 55.5;
  }
  const auto tails2 = stats::stratified_tails(shifted, strata, 0.2);
  CHECK(tails2.top == tails.top);
  CHECK(tails2.bottom == tails.bottom);
}

TEST_CASE("stratified_tails breaks ties by ascending key") {
  std::map<std::string, double> values = {{"p1", 5}, {"p2", 5}, {"p3", 5}, {"p4", 5}};
  std::map<std::string, std::string> strata = {
      {"p1", "s"}, {"p2", "s"}, {"p3", "s"}, {"p4", "s"}};
  const auto tails = stats::stratified_tails(values, strata, 0.25);
  CHECK(tails.bottom == std::set<std::string>{"p1"});
  CHECK(tails.top == std::set<std::string>{"p4"});
}

TEST_CASE("extreme_group_diff computes Welch statistics") {
  const std::map<std::string, double> outcome = {
      {"t1", 10}, {"t2", 12}, {"b1", 4}, {"b2", 6}};
  const auto result = stats::extreme_group_diff({"t1", "t2"}, {"b1", "b2"}, outcome);
  CHECK(result.diff == doctest::Approx(6.0));
  // scipy.stats.ttest_ind([10,12],[4,6], equal_var=False) -> p = 0.05131670...
  CHECK(result.p_value == doctest::Approx(0.05131670194948621).epsilon(1e-10));

  const auto same = stats::extreme_group_diff({"t1", "t2"}, {"t1", "t2"}, outcome);
  CHECK(same.diff == doctest::Approx(0.0));

  CHECK_THROWS_AS((void)stats::extreme_group_diff({}, {"b1"}, outcome), PipelineError);
}

TEST_CASE("extreme_group_diff flags a planted separation") {
  Rng rng(31);
  std::map<std::string, double> outcome;
  std::set<std::string> top, bottom;
  for (int i = 0; i < 25; ++i) {
    const std::string t = "t" + std::to_string(i), b = "b" + std::to_string(i);
    outcome[t] = 10.0 + rng.normal();
    outcome[b] = 2.0 + rng.normal();
    top.insert(t);
    bottom.insert(b);
  }
  const auto result = stats::extreme_group_diff(top, bottom, outcome);
  CHECK(result.diff > 5.0);
  CHECK(result.p_value < 0.01);
}

TEST_CASE("stars reproduce the significance thresholds") {
  CHECK(stats::stars(0.0005) == "***");
  CHECK(stats::stars(0.02) == "*");
  CHECK(stats::stars(0.05) == "");  // strict inequality
  CHECK(stats::stars(0.009) == "**");
  CHECK(stats::stars(0.001) == "**");
  CHECK(stats::stars(0.01) == "*");
  CHECK_THROWS_AS((void)stats::stars(-0.1), PipelineError);
  CHECK_THROWS_AS((void)stats::stars(1.5), PipelineError);

  // Monotone: star count never increases as p grows.
  double previous = 3;
  for (double p : {0.0, 0.0005, 0.001, 0.005, 0.01, 0.03, 0.05, 0.2, 1.0}) {
    const double count = static_cast<double>(stats::stars(p).size());
    CHECK(count <= previous);
    previous = count;
  }
}

TEST_CASE("per_type_paper_score averages the focal metric within a type") {
  std::vector<CommentResponsePair> pairs;
  auto a = testutil::make_pair("p", 1, "R1", 1, 6);
  a.opinion_type = OpinionType::Logic;
  auto b = testutil::make_pair("p", 1, "R1", 2, 8);
  b.opinion_type = OpinionType::Logic;
  auto c = testutil::make_pair("p", 1, "R1", 3, 2);
  c.opinion_type = OpinionType::Scope;
  pairs = {a, b, c};
  CHECK(stats::per_type_paper_score(pairs, OpinionType::Logic, Metric::OpinionStrength) ==
        doctest::Approx(7.0));
  CHECK(stats::per_type_paper_score(pairs, OpinionType::Scope, Metric::OpinionStrength) ==
        doctest::Approx(2.0));
  CHECK_THROWS_AS(
      (void)stats::per_type_paper_score(pairs, OpinionType::Accept, Metric::OpinionStrength),
      PipelineError);

  auto d = testutil::make_pair("p", 1, "R2", 1, 5, 5, 5, 9);
  d.response_text = "reply";
  d.response_type = ResponseType::RebutDisagree;
  pairs.push_back(d);
  CHECK(stats::per_type_paper_score(pairs, ResponseType::RebutDisagree, Metric::RevisionCost) ==
        doctest::Approx(9.0));
  CHECK_THROWS_AS((void)stats::per_type_paper_score(pairs, ResponseType::PartiallyAccept,
                                                    Metric::RevisionCost),
                  PipelineError);
}
