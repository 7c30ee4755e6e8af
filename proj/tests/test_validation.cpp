#include "revpipe/validation.hpp"

#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "revpipe/error.hpp"
#include "revpipe/extraction.hpp"
#include "revpipe/random.hpp"
#include "revpipe/stats.hpp"
#include "revpipe/synthetic.hpp"

using namespace revpipe;

namespace {

std::vector<PaperSummary> base_summaries(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<PaperSummary> summaries;
  for (int i = 0; i < n; ++i) {
    PaperSummary summary;
    summary.paper_id = "p" + std::to_string(100 + i);
    summary.year = 2018 + i % 4;
    summary.n_pairs = 2 + static_cast<int>(rng.uniform_int(0, 10));
    summary.n_rounds = 2 + static_cast<int>(rng.uniform_int(0, 1));
    summary.n_reviewers = 2 + static_cast<int>(rng.uniform_int(0, 2));
    summary.mean_s = 2.0 + 6.0 * rng.uniform();
    summary.mean_c = 2.0 + 6.0 * rng.uniform();
    summary.mean_q = 2.0 + 6.0 * rng.uniform();
    summary.mean_r = 2.0 + 6.0 * rng.uniform();
    summary.persuasion_rate = rng.uniform();
    summary.rebuttal_rate = rng.uniform();
    summaries.push_back(summary);
  }
  return summaries;
}

}  // namespace

TEST_CASE("cross_model_agreement of identical runs is exactly one") {
  const auto run = base_summaries(15, 4);
  const auto report = cross_model_agreement({{"a", run}, {"b", run}});
  for (SummaryQuantity quantity : kCrossModelQuantities) {
    const auto& entries = report.matrices.at(quantity);
    REQUIRE(entries.size() == 1);
    REQUIRE(entries[0].pearson_r.has_value());
    CHECK(*entries[0].pearson_r == 1.0);  // exact, not approximate
    CHECK(*report.mean_pairwise.at(quantity) == 1.0);
  }
}

TEST_CASE("cross_model_agreement is affine-invariant") {
  const auto run = base_summaries(12, 5);
  auto shifted = run;
  for (auto& summary : shifted) {
    summary.mean_s += 0.5;
    summary.mean_c += 0.5;
    summary.mean_q += 0.5;
    summary.mean_r += 0.5;
  }
  const auto report = cross_model_agreement({{"a", run}, {"b", shifted}});
  for (SummaryQuantity quantity :
       {SummaryQuantity::MeanS, SummaryQuantity::MeanC, SummaryQuantity::MeanQ,
        SummaryQuantity::MeanR}) {
    CHECK(*report.matrices.at(quantity)[0].pearson_r == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("cross_model_agreement matches an external Pearson oracle under jitter") {
  const auto run_a = base_summaries(20, 6);
  auto run_b = run_a;
  Rng rng(7);
  for (auto& summary : run_b) {
    summary.mean_s += 0.3 * rng.normal();
    summary.mean_r += 0.3 * rng.normal();
  }
  const auto report = cross_model_agreement({{"a", run_a}, {"b", run_b}});

  std::vector<double> sa, sb;
  for (size_t i = 0; i < run_a.size(); ++i) {
    sa.push_back(run_a[i].mean_s);
    sb.push_back(run_b[i].mean_s);
  }
  const double expected = stats::pearson(sa, sb).estimate;
  CHECK(std::abs(*report.matrices.at(SummaryQuantity::MeanS)[0].pearson_r - expected) < 1e-12);
}

TEST_CASE("cross_model_agreement rejects mismatched runs") {
  const auto run = base_summaries(8, 8);
  CHECK_THROWS_AS((void)cross_model_agreement({{"a", run}}), PipelineError);
  auto shorter = run;
  shorter.pop_back();
  CHECK_THROWS_AS((void)cross_model_agreement({{"a", run}, {"b", shorter}}), PipelineError);
}

TEST_CASE("zero-variance quantities yield undefined entries, not crashes") {
  auto run_a = base_summaries(10, 9);
  for (auto& summary : run_a) summary.n_rounds = 2;
  const auto report = cross_model_agreement({{"a", run_a}, {"b", run_a}});
  CHECK_FALSE(report.matrices.at(SummaryQuantity::NRounds)[0].pearson_r.has_value());
  CHECK(report.matrices.at(SummaryQuantity::MeanS)[0].pearson_r.has_value());
}

namespace {

std::vector<CommentResponsePair> prevalence_corpus(int n_papers, double top_score,
                                                   const std::string& top_text,
                                                   const std::string& rest_text) {
  std::vector<CommentResponsePair> pairs;
  for (int i = 0; i < n_papers; ++i) {
    char id[8];
    std::snprintf(id, sizeof(id), "p%03d", i);
    auto pair = testutil::make_pair(id, 1, "R1", 1, 5);
    // Paper 0 is the bottom tail, paper n-1 the top tail.
    const double score = 1.0 + (top_score - 1.0) * i / (n_papers - 1);
    pair.s = static_cast<int>(std::lround(score));
    pair.comment_text = i == n_papers - 1 ? top_text : rest_text;
    pairs.push_back(pair);
  }
  return pairs;
}

}  // namespace

TEST_CASE("keyword_prevalence separates tails") {
  const auto& rules = KeywordRuleSet::builtin();
  // 20 papers, 5% tails -> one paper each side.
  auto pairs = prevalence_corpus(20, 10.0, "This looks like a fatal problem.",
                                 "Nothing remarkable here.");
  const auto prevalence =
      keyword_prevalence(pairs, rules, Metric::OpinionStrength, 0.05);
  CHECK(prevalence.tail_size == 1);
  CHECK(prevalence.top == doctest::Approx(1.0));
  CHECK(prevalence.bottom == doctest::Approx(0.0));

  auto silent = prevalence_corpus(20, 10.0, "Nothing here either.", "Nothing remarkable.");
  const auto none = keyword_prevalence(silent, rules, Metric::OpinionStrength, 0.05);
  CHECK(none.top == doctest::Approx(0.0));
  CHECK(none.bottom == doctest::Approx(0.0));
}

TEST_CASE("keyword_prevalence matches revision-cost hits in response text") {
  auto pairs = prevalence_corpus(20, 10.0, "irrelevant", "irrelevant");
  for (auto& pair : pairs) {
    pair.r = pair.s;
    pair.response_text = pair.paper_id == "p019" ? "We collected new data." : "We fixed it.";
    pair.response_type = ResponseType::AcceptRevise;
  }
  const auto prevalence =
      keyword_prevalence(pairs, KeywordRuleSet::builtin(), Metric::RevisionCost, 0.05);
  CHECK(prevalence.top == doctest::Approx(1.0));
  CHECK(prevalence.bottom == doctest::Approx(0.0));
}

TEST_CASE("keyword_prevalence is monotone in matching keywords") {
  auto pairs = prevalence_corpus(20, 10.0, "plain text", "plain text");
  const auto before =
      keyword_prevalence(pairs, KeywordRuleSet::builtin(), Metric::OpinionStrength, 0.05);
  for (auto& pair : pairs) {
    if (pair.paper_id == "p019") pair.comment_text += " This is a serious concern.";
  }
  const auto after =
      keyword_prevalence(pairs, KeywordRuleSet::builtin(), Metric::OpinionStrength, 0.05);
  CHECK(after.top >= before.top);
  CHECK(after.bottom == before.bottom);
}

TEST_CASE("keyword_prevalence rejects tiny corpora") {
  auto pairs = prevalence_corpus(5, 10.0, "x", "y");
  CHECK_THROWS_AS(
      (void)keyword_prevalence(pairs, KeywordRuleSet::builtin(), Metric::OpinionStrength, 0.05),
      PipelineError);
}

TEST_CASE("highlow_tasks picks the k extremes by paper mean") {
  auto summaries = base_summaries(4, 10);
  summaries[0].mean_s = 2;
  summaries[1].mean_s = 5;
  summaries[2].mean_s = 7;
  summaries[3].mean_s = 9;
  const auto tasks = highlow_tasks(summaries, Metric::OpinionStrength, 1);
  CHECK(tasks.top == std::set<std::string>{summaries[3].paper_id});
  CHECK(tasks.bottom == std::set<std::string>{summaries[0].paper_id});

  const auto halves = highlow_tasks(summaries, Metric::OpinionStrength, 2);
  CHECK(halves.top.size() + halves.bottom.size() == summaries.size());

  CHECK_THROWS_AS((void)highlow_tasks(summaries, Metric::OpinionStrength, 3), PipelineError);
}

TEST_CASE("agreement_accuracy counts matching tail labels") {
  HighLowTasks a{{"p1", "p2"}, {"p3", "p4"}};
  CHECK(agreement_accuracy(a, a) == doctest::Approx(1.0));

  HighLowTasks swapped{{"p3", "p4"}, {"p1", "p2"}};
  CHECK(agreement_accuracy(a, swapped) == doctest::Approx(0.0));

  // One of four flipped (p2 moved to the other tail): 3/4 agree (hand count).
  HighLowTasks one_off{{"p1"}, {"p2", "p3", "p4"}};
  CHECK(agreement_accuracy(a, one_off) == doctest::Approx(0.75));

  // Papers the other run leaves unlabeled count as disagreement.
  HighLowTasks partial{{"p1"}, {"p3"}};
  CHECK(agreement_accuracy(a, partial) == doctest::Approx(0.5));

  CHECK_THROWS_AS((void)agreement_accuracy(HighLowTasks{}, a), PipelineError);
}

TEST_CASE("synthetic corpora are deterministic given the truth config") {
  PlantedTruth truth;
  truth.seed = 99;
  truth.target_rho = 0.2;
  const auto a = generate_synthetic_corpus(truth, 30);
  const auto b = generate_synthetic_corpus(truth, 30);
  CHECK(manifest_to_json(a.corpus) == manifest_to_json(b.corpus));
  CHECK(a.pairs == b.pairs);
  CHECK(a.ground_truth_json == b.ground_truth_json);

  PlantedTruth other = truth;
  other.seed = 100;
  const auto c = generate_synthetic_corpus(other, 30);
  CHECK(manifest_to_json(a.corpus) != manifest_to_json(c.corpus));
}

TEST_CASE("synthetic output passes corpus and pair invariants untouched") {
  PlantedTruth truth;
  truth.inject_high = 0.5;
  truth.inject_low = 0.1;
  const auto synthetic = generate_synthetic_corpus(truth, 40);
  validate_corpus(synthetic.corpus);  // throws on violation

  const auto grouped = group_pairs_by_paper(synthetic.pairs);
  for (const auto& doc : synthetic.corpus.documents) {
    const auto it = grouped.find(doc.paper_id);
    REQUIRE(it != grouped.end());
    ExtractionPayload payload;
    std::map<std::pair<int, std::string>, ReviewerRoundBlock> blocks;
    for (const auto& pair : it->second) {
      auto& block = blocks[{pair.round, pair.reviewer_id}];
      block.round = pair.round;
      block.reviewer_id = pair.reviewer_id;
      block.points.push_back({pair.comment_text, pair.response_text, pair.s, pair.c, pair.q,
                              pair.r, pair.opinion_type, pair.response_type, pair.persuaded});
    }
    for (auto& [key, block] : blocks) payload.push_back(block);
    // The strict payload validator accepts the generated pairs verbatim.
    CHECK_NOTHROW((void)validate_payload(payload_to_json(payload), doc));
  }
}

TEST_CASE("null planted correlation stays near zero") {
  PlantedTruth truth;
  truth.target_rho = 0.0;
  truth.seed = 7;
  const int n = 400;
  const auto synthetic = generate_synthetic_corpus(truth, n);

  std::vector<double> mean_r, c3;
  for (const auto& [paper, pairs] : group_pairs_by_paper(synthetic.pairs)) {
    double sum = 0;
    for (const auto& pair : pairs) sum += pair.r;
    mean_r.push_back(sum / pairs.size());
    c3.push_back(static_cast<double>(synthetic.corpus.impact.at(paper)));
  }
  const auto rho = stats::spearman(mean_r, c3);
  CHECK(std::abs(rho.estimate) <= 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("invalid truth configurations are rejected") {
  PlantedTruth truth;
  CHECK_THROWS_AS((void)generate_synthetic_corpus(truth, 5), PipelineError);
  truth.target_rho = 1.0;
  CHECK_THROWS_AS((void)generate_synthetic_corpus(truth, 50), PipelineError);
  truth.target_rho = 0.0;
  truth.inject_high = 1.5;
  CHECK_THROWS_AS((void)generate_synthetic_corpus(truth, 50), PipelineError);
  truth.inject_high = 0.0;
  truth.round_means = {};
  CHECK_THROWS_AS((void)generate_synthetic_corpus(truth, 50), PipelineError);
}
