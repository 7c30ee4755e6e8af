#include "revpipe/corpus.hpp"

#include <fstream>
#include <functional>

#include "doctest.h"
#include "helpers.hpp"
#include "revpipe/error.hpp"
#include "revpipe/random.hpp"

using namespace revpipe;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const PipelineError& e) {
    return e.kind();
  }
  FAIL("expected a PipelineError");
  return ErrorKind::MissingFile;
}

const char* kMinimalManifest = R"([
  {"paper_id": "p1", "doi": "10.1/x", "year": 2020, "field": "physics",
   "rounds": [
     {"index": 1, "reviewers": [{"id": "R1", "comment_text": "Fix typo."}],
      "author_response_text": "Done."},
     {"index": 2, "reviewers": [{"id": "R1", "comment_text": "Thanks."}],
      "author_response_text": ""}
   ]}
])";

}  // namespace

TEST_CASE("load_manifest accepts a minimal two-round corpus") {
  const Corpus corpus = manifest_from_json(kMinimalManifest);
  REQUIRE(corpus.documents.size() == 1);
  const auto& doc = corpus.documents[0];
  CHECK(doc.paper_id == "p1");
  CHECK(doc.year == 2020);
  REQUIRE(doc.rounds.size() == 2);
  CHECK(doc.rounds[0].index == 1);
  CHECK(doc.rounds[1].index == 2);
  CHECK(doc.n_rounds() == 2);
}

TEST_CASE("load_manifest rejects duplicate paper ids") {
  const std::string manifest = R"([
    {"paper_id": "p1", "year": 2020, "rounds": [
      {"index": 1, "reviewers": [{"id": "R1", "comment_text": "a"}]}]},
    {"paper_id": "p1", "year": 2021, "rounds": [
      {"index": 1, "reviewers": [{"id": "R1", "comment_text": "b"}]}]}
  ])";
  CHECK(kind_of([&] { manifest_from_json(manifest); }) == ErrorKind::DuplicatePaperId);
}

TEST_CASE("load_manifest rejects non-contiguous round indices with a pointer") {
  // Independent contiguity oracle on the fixture: indices must equal 1..n.
  const std::vector<int> indices = {1, 3};
  bool contiguous = true;
  for (size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] != static_cast<int>(i) + 1) contiguous = false;
  }
  REQUIRE_FALSE(contiguous);

  const std::string manifest = R"([
    {"paper_id": "p1", "year": 2020, "rounds": [
      {"index": 1, "reviewers": [{"id": "R1", "comment_text": "a"}]},
      {"index": 3, "reviewers": [{"id": "R1", "comment_text": "b"}]}]}
  ])";
  try {
    manifest_from_json(manifest);
    FAIL("expected SchemaViolation");
  } catch (const PipelineError& e) {
    CHECK(e.kind() == ErrorKind::SchemaViolation);
    CHECK(e.detail().find("/0/rounds/1/index") != std::string::npos);
  }
}

TEST_CASE("load_manifest enforces reviewer uniqueness and non-empty comments") {
  CHECK(kind_of([] {
          manifest_from_json(R"([{"paper_id":"p1","year":2020,"rounds":[
            {"index":1,"reviewers":[{"id":"R1","comment_text":"a"},
                                    {"id":"R1","comment_text":"b"}]}]}])");
        }) == ErrorKind::SchemaViolation);
  CHECK(kind_of([] {
          manifest_from_json(R"([{"paper_id":"p1","year":2020,"rounds":[
            {"index":1,"reviewers":[{"id":"R1","comment_text":"  "}]}]}])");
        }) == ErrorKind::SchemaViolation);
}

TEST_CASE("load_manifest reports a missing file") {
  CHECK(kind_of([] { load_manifest("/nonexistent/corpus.json"); }) == ErrorKind::MissingFile);
}

TEST_CASE("bundled fixture corpus loads and is sorted") {
  const Corpus corpus = load_manifest(testutil::fixture("corpus_small.json"));
  REQUIRE(corpus.documents.size() == 6);
  for (size_t i = 1; i < corpus.documents.size(); ++i) {
    CHECK(corpus.documents[i - 1].paper_id < corpus.documents[i].paper_id);
  }
  CHECK(corpus.team.size() == 6);
  CHECK_FALSE(corpus.team.at("p05").avg_career_age_decile.has_value());
  const auto* p04 = corpus.find("p04");
  REQUIRE(p04 != nullptr);
  CHECK(p04->n_rounds() == 3);
  CHECK(p04->reviewer_ids() == std::vector<std::string>{"R1", "R2"});
}

namespace {

Corpus random_corpus(std::uint64_t seed) {
  Rng rng(seed);
  Corpus corpus;
  const int n_docs = 1 + static_cast<int>(rng.uniform_int(0, 4));
  for (int d = 0; d < n_docs; ++d) {
    CorrespondenceDocument doc;
    doc.paper_id = "p" + std::to_string(d);
    if (rng.bernoulli(0.5)) doc.doi = "10.1/" + std::to_string(d);
    doc.year = 2017 + static_cast<int>(rng.uniform_int(0, 7));
    if (rng.bernoulli(0.7)) doc.field = rng.bernoulli(0.5) ? "physics" : "biology";
    const int n_rounds = 1 + static_cast<int>(rng.uniform_int(0, 2));
    for (int r = 1; r <= n_rounds; ++r) {
      ReviewRound round;
      round.index = r;
      const int n_rev = 1 + static_cast<int>(rng.uniform_int(0, 2));
      for (int v = 0; v < n_rev; ++v) {
        round.reviewer_blocks.push_back(
            {"R" + std::to_string(v + 1),
             "Comment " + std::to_string(r) + "." + std::to_string(v) + "\nwith lines."});
      }
      if (rng.bernoulli(0.8)) round.author_response_text = "Reply in round " + std::to_string(r);
      doc.rounds.push_back(std::move(round));
    }
    if (rng.bernoulli(0.6)) {
      TeamAttributes team;
      team.team_size = 1 + static_cast<int>(rng.uniform_int(0, 8));
      team.institution_count = 1;
      if (rng.bernoulli(0.5)) {
        team.avg_career_age_decile = 3;
        team.max_career_age_decile = 7;
      }
      corpus.team[doc.paper_id] = team;
    }
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

}  // namespace

TEST_CASE("manifest round-trip is the identity on valid corpora") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const Corpus original = random_corpus(seed);
    const std::string once = manifest_to_json(original);
    const Corpus reparsed = manifest_from_json(once);
    CHECK(manifest_to_json(reparsed) == once);
  }
}

TEST_CASE("parse_raw_correspondence handles the single-delimiter case") {
  const auto doc =
      parse_raw_correspondence("REVIEWER COMMENTS\nReviewer #1\nFix typo.\nREBUTTAL\nDone.",
                               "p1", 2020);
  REQUIRE(doc.rounds.size() == 1);
  REQUIRE(doc.rounds[0].reviewer_blocks.size() == 1);
  CHECK(doc.rounds[0].reviewer_blocks[0].reviewer_id == "R1");
  CHECK(doc.rounds[0].reviewer_blocks[0].comment_text == "Fix typo.");
  CHECK(doc.rounds[0].author_response_text == "Done.");
}

TEST_CASE("parse_raw_correspondence splits multiple reviewers in one round") {
  const auto doc = parse_raw_correspondence(
      "REVIEWER COMMENTS\nReviewer #1\nFirst text.\nReviewer #2\nSecond text.", "p1", 2020);
  REQUIRE(doc.rounds.size() == 1);
  REQUIRE(doc.rounds[0].reviewer_blocks.size() == 2);
  CHECK(doc.rounds[0].reviewer_blocks[0].reviewer_id == "R1");
  CHECK(doc.rounds[0].reviewer_blocks[1].reviewer_id == "R2");
}

TEST_CASE("parse_raw_correspondence matches the hand-segmented fixture") {
  const auto doc = parse_raw_correspondence(
      testutil::slurp(testutil::fixture("raw_correspondence.txt")), "raw1", 2020);
  // Hand segmentation: 2 rounds; round 1 has R1, R2, R3; round 2 has R1.
  REQUIRE(doc.rounds.size() == 2);
  REQUIRE(doc.rounds[0].reviewer_blocks.size() == 3);
  CHECK(doc.rounds[0].reviewer_blocks[0].reviewer_id == "R1");
  CHECK(doc.rounds[0].reviewer_blocks[0].comment_text ==
        "The premise is interesting but the sample is small.");
  CHECK(doc.rounds[0].reviewer_blocks[1].comment_text ==
        "1. Please cite Smith et al. 2019.\n2. Fix the typos.");
  CHECK(doc.rounds[0].reviewer_blocks[2].comment_text ==
        "Excellent work; I recommend publication.");
  CHECK(doc.rounds[0].author_response_text ==
        "We thank the reviewers. We enlarged the sample and added citations.");
  REQUIRE(doc.rounds[1].reviewer_blocks.size() == 1);
  CHECK(doc.rounds[1].reviewer_blocks[0].reviewer_id == "R1");
  CHECK(doc.rounds[1].author_response_text == "We thank the reviewer again.");
}

TEST_CASE("parse_raw_correspondence error paths") {
  CHECK(kind_of([] { parse_raw_correspondence("no delimiters at all", "p1", 2020); }) ==
        ErrorKind::NoRoundsDetected);
  CHECK(kind_of([] {
          parse_raw_correspondence("REVIEWER COMMENTS\njust editor text", "p1", 2020);
        }) == ErrorKind::NoReviewersDetected);
}

TEST_CASE("parse_raw_correspondence drops reviewer-less rounds and re-indexes") {
  ParseWarnings warnings;
  const auto doc = parse_raw_correspondence(
      "REVIEWER COMMENTS\neditor only\nREVIEWER COMMENTS\nReviewer #2\nReal text.", "p1", 2020,
      &warnings);
  REQUIRE(doc.rounds.size() == 1);
  CHECK(doc.rounds[0].index == 1);
  CHECK(doc.rounds[0].reviewer_blocks[0].reviewer_id == "R2");
  CHECK_FALSE(warnings.messages.empty());
}

TEST_CASE("parse_raw_correspondence is deterministic") {
  const std::string raw = testutil::slurp(testutil::fixture("raw_correspondence.txt"));
  const auto a = parse_raw_correspondence(raw, "p1", 2020);
  const auto b = parse_raw_correspondence(raw, "p1", 2020);
  Corpus ca, cb;
  ca.documents.push_back(a);
  cb.documents.push_back(b);
  CHECK(manifest_to_json(ca) == manifest_to_json(cb));
}

TEST_CASE("join_impact matches by doi, normalizes, and leaves the rest alone") {
  const Corpus corpus = load_manifest(testutil::fixture("corpus_small.json"));
  const std::string before = manifest_to_json(corpus);

  JoinReport report;
  const Corpus joined = join_impact(corpus, testutil::fixture("impact_small.csv"), &report);
  CHECK(report.rows == 5);
  CHECK(report.matched_papers == 5);
  CHECK(joined.impact.at("p01") == 12);
  CHECK(joined.impact.at("p02") == 30);  // HTTPS://DOI.ORG/ prefix normalized
  CHECK_FALSE(joined.impact.count("p06"));

  // Documents and team maps untouched.
  Corpus stripped = joined;
  stripped.impact.clear();
  CHECK(manifest_to_json(stripped) == before);
}

TEST_CASE("join_impact error paths") {
  testutil::TempDir tmp("impact");
  auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream out(tmp.path() / name, std::ios::binary);
    out << content;
    return tmp.path() / name;
  };
  Corpus corpus = manifest_from_json(kMinimalManifest);

  CHECK(kind_of([&] { join_impact(corpus, write("neg.csv", "doi,c3\n10.1/x,-1\n")); }) ==
        ErrorKind::NegativeC3);
  CHECK(kind_of([&] { join_impact(corpus, write("bad.csv", "doi,c3\njust-one-field\n")); }) ==
        ErrorKind::MalformedCsv);
  CHECK(kind_of([&] { join_impact(corpus, write("header.csv", "doi;c3\n")); }) ==
        ErrorKind::MalformedCsv);
  CHECK(kind_of([&] { join_impact(corpus, write("dup.csv", "doi,c3\n10.1/x,1\n10.1/x,2\n")); }) ==
        ErrorKind::MalformedCsv);
  CHECK(kind_of([&] { join_impact(corpus, tmp.path() / "missing.csv"); }) ==
        ErrorKind::MissingFile);

  JoinReport report;
  corpus = join_impact(std::move(corpus), write("ok.csv", "doi,c3\nHTTPS://DOI.ORG/10.1/X,7\n"),
                       &report);
  CHECK(corpus.impact.at("p1") == 7);
  CHECK(report.matched_papers == 1);
}
