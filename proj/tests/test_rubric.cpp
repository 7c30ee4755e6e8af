#include "revpipe/rubric.hpp"

#include <algorithm>
#include <functional>

#include "doctest.h"
#include "helpers.hpp"
#include "revpipe/error.hpp"
#include "revpipe/keywords.hpp"
#include "revpipe/text.hpp"

using namespace revpipe;

TEST_CASE("anchor_lookup returns the shipped anchor strings") {
  CHECK(anchor_text(Metric::OpinionStrength, 10) ==
        "Fatal problem, such as a fundamental flaw in the premise or a rejection-level "
        "concern.");
  CHECK(anchor_text(Metric::RevisionCost, 1) ==
        "Trivial correction, such as fixing a typo or spelling.");
  CHECK_THROWS_AS((void)anchor_text(Metric::OpinionStrength, 11), PipelineError);
  CHECK_THROWS_AS((void)anchor_text(Metric::CommentQuality, 0), PipelineError);
}

TEST_CASE("exactly 40 non-empty anchors and 4 guiding questions exist") {
  int count = 0;
  for (Metric metric : kAllMetrics) {
    CHECK_FALSE(std::string(guiding_question(metric)).empty());
    for (int score = 1; score <= 10; ++score) {
      CHECK_FALSE(std::string(anchor_text(metric, score)).empty());
      ++count;
    }
  }
  CHECK(count == 40);
}

TEST_CASE("opinion classifier follows the documented priority") {
  // Named citation -> RecommendReference.
  CHECK(classify_opinion_type("Please cite Smith et al. 2019 on this point.") ==
        OpinionType::RecommendReference);
  // Generic literature complaint without a named paper -> Presentation.
  CHECK(classify_opinion_type("The literature review is incomplete.") ==
        OpinionType::Presentation);
  // Evidence-vs-conclusion statements -> Logic.
  CHECK(classify_opinion_type("The evidence does not support the conclusion.") ==
        OpinionType::Logic);
}

TEST_CASE("special cases precede substantive categories") {
  // Methodology markers plus a named citation still classify as
  // RecommendReference.
  const auto type = classify_opinion_type(
      "The sample design is weak; please compare with the protocol of Smith et al. 2019.");
  CHECK(type == OpinionType::RecommendReference);
}

TEST_CASE("endorsement-only comments are Accept, criticism vetoes") {
  CHECK(classify_opinion_type(
            "The manuscript is excellent and convincing. I recommend publication.") ==
        OpinionType::Accept);
  CHECK(classify_opinion_type("The results are not convincing.") != OpinionType::Accept);
}

TEST_CASE("substantive category ordering") {
  CHECK(classify_opinion_type("The premise rests on a shaky assumption.") ==
        OpinionType::Conceptual);
  CHECK(classify_opinion_type("The sampling protocol is not described.") ==
        OpinionType::Methodology);
  CHECK(classify_opinion_type("Which statistical test was used here?") ==
        OpinionType::AnalysisInterpretation);
  CHECK(classify_opinion_type("How does this differ from prior work? Seems incremental.") ==
        OpinionType::NoveltyContribution);
  CHECK(classify_opinion_type("The generalizability is narrow in scope.") == OpinionType::Scope);
  CHECK(classify_opinion_type("Fix typo.") == OpinionType::Presentation);
}

TEST_CASE("response classifier follows the documented priority") {
  CHECK(classify_response_type("We disagree with the reviewer's premise.") ==
        ResponseType::RebutDisagree);
  CHECK(classify_response_type("This is already described in Section 3.") ==
        ResponseType::ClarifyMisunderstanding);
  CHECK(classify_response_type("We have revised the text accordingly.") ==
        ResponseType::AcceptRevise);
  CHECK(classify_response_type("We partly agree with this point.") ==
        ResponseType::PartiallyAccept);
  CHECK(classify_response_type("This extension is beyond the scope of this paper.") ==
        ResponseType::PromiseFutureWork);
  // Higher tiers win.
  CHECK(classify_response_type("We partly agree, but we disagree with the main claim.") ==
        ResponseType::RebutDisagree);
}

TEST_CASE("classifiers are total and case/whitespace-invariant") {
  const std::vector<std::string> samples = {
      "Please cite Smith et al. 2019 on this point.",
      "The evidence does not support the conclusion.",
      "The manuscript is excellent and convincing. I recommend publication.",
      "The sampling protocol is not described.",
      "Fix typo.",
      "random words with no markers whatsoever",
      "1234 !!! ???",
  };
  for (const auto& sample : samples) {
    const auto base = classify_opinion_type(sample);
    CHECK(classify_opinion_type(text::to_lower(sample)) == base);
    CHECK(classify_opinion_type("  \n" + sample + "\t\n ") == base);
    std::string upper = sample;
    std::transform(upper.begin(), upper.end(), upper.begin(), ::toupper);
    CHECK(classify_opinion_type(upper) == base);
  }
  const std::vector<std::string> responses = {
      "We disagree with the reviewer's premise.",
      "This is already described in Section 3.",
      "We have revised the text accordingly.",
  };
  for (const auto& sample : responses) {
    const auto base = classify_response_type(sample);
    CHECK(classify_response_type(text::to_lower(sample)) == base);
    std::string upper = sample;
    std::transform(upper.begin(), upper.end(), upper.begin(), ::toupper);
    CHECK(classify_response_type(upper) == base);
    CHECK(classify_response_type("   " + sample + "\n") == base);
  }
}

namespace {

std::vector<CommentResponsePair> one_pair(const std::string& comment, int round = 1,
                                          const std::string& reviewer = "R1") {
  auto pair = testutil::make_pair("p1", round, reviewer, 1, 5);
  pair.comment_text = comment;
  return {pair};
}

}  // namespace

TEST_CASE("derive_persuasion marks explicit dissatisfaction as unresolved") {
  auto pairs = one_pair("The derivation in section two is wrong.");
  RoundReviewerTexts texts;
  texts[2]["R1"] = "this does not address my concern";
  derive_persuasion(pairs, texts, 2);
  CHECK(pairs[0].persuaded == 0);
}

TEST_CASE("derive_persuasion treats no subsequent round as resolved") {
  auto pairs = one_pair("Final-round comment.", 2);
  RoundReviewerTexts texts;  // nothing after round 2
  derive_persuasion(pairs, texts, 2);
  CHECK(pairs[0].persuaded == 1);
}

TEST_CASE("derive_persuasion treats acknowledgment without repeat as resolved") {
  auto pairs = one_pair("define X");
  RoundReviewerTexts texts;
  texts[2]["R1"] = "thank you for clarifying";
  derive_persuasion(pairs, texts, 2);
  CHECK(pairs[0].persuaded == 1);
}

TEST_CASE("derive_persuasion ignores markers from other reviewers") {
  auto pairs = one_pair("A concern about the data.");
  RoundReviewerTexts texts;
  texts[2]["R2"] = "this does not address my concern";
  derive_persuasion(pairs, texts, 2);
  CHECK(pairs[0].persuaded == 1);
}

TEST_CASE("content-word repeat crosses the 60% threshold") {
  // Five content words; repeating three of them reaches exactly 0.6.
  const std::string comment = "kangaroo platypus wombat echidna dingo";
  CHECK(content_word_overlap(comment, "kangaroo platypus wombat appear again") ==
        doctest::Approx(0.6));
  CHECK(content_word_overlap(comment, "kangaroo platypus appear again") ==
        doctest::Approx(0.4));

  auto repeat = one_pair(comment);
  RoundReviewerTexts texts;
  texts[2]["R1"] = "kangaroo platypus wombat appear again";
  derive_persuasion(repeat, texts, 2);
  CHECK(repeat[0].persuaded == 0);

  auto partial = one_pair(comment);
  texts[2]["R1"] = "kangaroo platypus appear again";
  derive_persuasion(partial, texts, 2);
  CHECK(partial[0].persuaded == 1);
}

TEST_CASE("derive_persuasion rejects unknown rounds") {
  auto pairs = one_pair("text", 5);
  RoundReviewerTexts texts;
  CHECK_THROWS_AS(derive_persuasion(pairs, texts, 2), PipelineError);
}

TEST_CASE("derive_persuasion is monotone in dissatisfaction markers") {
  const std::vector<std::string> later_texts = {
      "thank you for clarifying",
      "the new experiments are convincing",
      "minor points remain about formatting",
  };
  for (const auto& later : later_texts) {
    auto base = one_pair("An issue about calibration and drift.");
    RoundReviewerTexts texts;
    texts[2]["R1"] = later;
    derive_persuasion(base, texts, 2);

    auto marked = one_pair("An issue about calibration and drift.");
    texts[2]["R1"] = later + " However, the issue persists.";
    derive_persuasion(marked, texts, 2);
    CHECK(marked[0].persuaded <= base[0].persuaded);
    CHECK(marked[0].persuaded == 0);
  }
}

TEST_CASE("shipped lexicon files match the builtin tables byte for byte") {
  const auto dir = testutil::source_dir() / "data" / "lexicons";
  for (const auto& [name, content] : builtin_lexicon_files()) {
    CHECK_MESSAGE(testutil::slurp(dir / name) == content, name);
  }
  const auto kw_dir = testutil::source_dir() / "data" / "keywords";
  for (const auto& [name, content] : builtin_keyword_files()) {
    CHECK_MESSAGE(testutil::slurp(kw_dir / name) == content, name);
  }
}

TEST_CASE("lexicons loaded from disk behave like the builtins") {
  const Lexicons from_disk = Lexicons::load_dir(testutil::source_dir() / "data" / "lexicons");
  CHECK(from_disk.endorsement == Lexicons::builtin().endorsement);
  CHECK(from_disk.citation_patterns == Lexicons::builtin().citation_patterns);
  CHECK(from_disk.dissatisfaction == Lexicons::builtin().dissatisfaction);
  CHECK(classify_opinion_type("Please cite Smith et al. 2019.", from_disk) ==
        OpinionType::RecommendReference);

  const KeywordRuleSet kw = KeywordRuleSet::load_dir(testutil::source_dir() / "data" / "keywords");
  CHECK(kw.patterns == KeywordRuleSet::builtin().patterns);
}

TEST_CASE("keyword rule set matches the supplementary table") {
  const auto& rules = KeywordRuleSet::builtin();
  CHECK(rules.patterns.at(Metric::OpinionStrength).size() == 13);
  CHECK(rules.patterns.at(Metric::Constructiveness).size() == 15);
  CHECK(rules.patterns.at(Metric::CommentQuality).size() == 13);
  CHECK(rules.patterns.at(Metric::RevisionCost).size() == 11);
  const auto& os = rules.patterns.at(Metric::OpinionStrength);
  CHECK(std::find(os.begin(), os.end(), "reject") != os.end());
  CHECK(std::find(os.begin(), os.end(), "not valid") != os.end());
}

TEST_CASE("enum serialization uses the fixed names") {
  CHECK(opinion_type_name(OpinionType::AnalysisInterpretation) == "AnalysisInterpretation");
  CHECK(opinion_type_from_name("NoveltyContribution") == OpinionType::NoveltyContribution);
  CHECK(response_type_name(ResponseType::PromiseFutureWork) == "PromiseFutureWork");
  CHECK(response_type_from_name("RebutDisagree") == ResponseType::RebutDisagree);
  CHECK_THROWS_AS((void)opinion_type_from_name("NotAType"), PipelineError);
  CHECK_THROWS_AS((void)response_type_from_name(""), PipelineError);
  CHECK(metric_from_name("revision_cost") == Metric::RevisionCost);
}
