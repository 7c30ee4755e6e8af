#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "revpipe/corpus.hpp"
#include "revpipe/pair.hpp"

namespace revpipe {

inline constexpr const char* kPromptVersion = "review-extraction/1.0.0";

struct BackendConfig {
  std::string endpoint_url;
  std::string model_name;
  double temperature = 0.0;
  int max_retries = 3;
  int timeout_seconds = 60;
  std::string api_key_env = "REVIEW_PIPELINE_API_KEY";
};

struct PayloadPoint {
  std::string comment_text;
  std::optional<std::string> response_text;
  int s = 1, c = 1, q = 1, r = 1;
  OpinionType opinion_type = OpinionType::Presentation;
  std::optional<ResponseType> response_type;
  int persuaded = 1;
};

// One object per (round, reviewer), mirroring the required model output.
struct ReviewerRoundBlock {
  int round = 1;
  std::string reviewer_id;
  std::vector<PayloadPoint> points;
};

using ExtractionPayload = std::vector<ReviewerRoundBlock>;

// Deterministic extraction prompt: the labeled correspondence, all 40 score
// anchors, the guiding questions, the classification priorities with their
// disambiguation examples, the silence=acceptance rule and the required JSON
// schema. Byte-identical for identical (doc, kPromptVersion).
std::string build_prompt(const CorrespondenceDocument& doc);

// Strips code fences and prose around the first JSON value and removes
// trailing commas. Idempotent. Throws NoJsonFound.
std::string repair_payload(const std::string& raw_text);

// Parses and enforces every pair invariant against the document.
ExtractionPayload validate_payload(const std::string& json_text,
                                   const CorrespondenceDocument& doc);

std::string payload_to_json(const ExtractionPayload& payload);

// Flattens to pairs sorted by (round, reviewer_id, comment_index);
// comment_index is assigned from point order within each block.
std::vector<CommentResponsePair> flatten_payload(const ExtractionPayload& payload,
                                                 const std::string& paper_id);

class ExtractionBackend {
 public:
  virtual ~ExtractionBackend() = default;
  // Returns raw model text for the prompt. The document is passed so offline
  // backends can answer without a language model. Must be thread-safe.
  virtual std::string complete(const CorrespondenceDocument& doc, const std::string& prompt) = 0;
  virtual std::string name() const = 0;
};

struct MockOptions {
  // Probability that a score is shifted by +/-1 (seeded); 0 keeps the mock
  // fully rule-determined, so seeds do not change output.
  double score_jitter_prob = 0.0;
};

// Deterministic rule-based extraction: splits reviewer text into points at
// blank lines and numbered-item boundaries, aligns response segments by
// numbered or quoted echo, scores by keyword-hit bands (0 hits -> 3,
// 1 -> 6, >= 2 -> 9), classifies with the rubric lexicons and derives
// persuasion from later rounds.
ExtractionPayload mock_extract(const CorrespondenceDocument& doc, std::uint64_t seed,
                               const MockOptions& options = {});

class MockBackend : public ExtractionBackend {
 public:
  explicit MockBackend(std::uint64_t seed = 0, MockOptions options = {})
      : seed_(seed), options_(options) {}
  std::string complete(const CorrespondenceDocument& doc, const std::string& prompt) override;
  std::string name() const override { return "mock"; }

 private:
  std::uint64_t seed_;
  MockOptions options_;
};

// Synchronous text-in/text-out call against an OpenAI-style chat endpoint
// with bearer auth from the environment variable named in the config.
class HttpBackend : public ExtractionBackend {
 public:
  explicit HttpBackend(BackendConfig config);
  std::string complete(const CorrespondenceDocument& doc, const std::string& prompt) override;
  std::string name() const override { return "http:" + config_.model_name; }

 private:
  BackendConfig config_;
};

struct AuditRecord {
  std::string paper_id;
  int attempt = 0;
  std::string raw_text;
  std::string status;  // "ok" | error kind + detail
};

struct PaperExtraction {
  std::vector<CommentResponsePair> pairs;
  int retry_count = 0;
};

// build_prompt -> backend -> repair -> validate, retrying schema failures up
// to the configured budget with a corrective instruction naming the first
// error. Audit records capture every raw response.
PaperExtraction extract_paper(const CorrespondenceDocument& doc, ExtractionBackend& backend,
                              const BackendConfig& config,
                              std::vector<AuditRecord>* audit = nullptr);

// Extracts every document with up to `jobs` concurrent backend calls; output
// and audit order follow paper_id regardless of completion order.
std::vector<PaperExtraction> extract_corpus(const Corpus& corpus, ExtractionBackend& backend,
                                            const BackendConfig& config, int jobs,
                                            std::vector<AuditRecord>* audit = nullptr);

void write_pairs_jsonl(const std::vector<CommentResponsePair>& pairs,
                       const std::filesystem::path& path);
std::vector<CommentResponsePair> read_pairs_jsonl(const std::filesystem::path& path);
void write_audit_jsonl(const std::vector<AuditRecord>& audit, const std::filesystem::path& path);

}  // namespace revpipe
