#include "revpipe/extraction.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "revpipe/error.hpp"
#include "revpipe/keywords.hpp"
#include "revpipe/random.hpp"
#include "revpipe/rubric.hpp"
#include "revpipe/text.hpp"

namespace revpipe {

using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Prompt assembly

std::string build_prompt(const CorrespondenceDocument& doc) {
  std::ostringstream out;
  out << "PEER REVIEW EXTRACTION TASK (prompt version " << kPromptVersion << ")\n\n";
  out << "You are given the complete peer review correspondence of one paper: every\n"
         "reviewer comment and every author response letter across all review rounds.\n\n";
  out << "INSTRUCTIONS\n"
         "1. For each reviewer in each round, segment the reviewer text into discrete,\n"
         "   independently addressable comment points.\n"
         "2. For each point, identify the author response segment that addresses it,\n"
         "   when one exists.\n"
         "3. Score each point on the four 1-10 scales below. Score the dimensions\n"
         "   independently; do not collapse them into one holistic judgment.\n"
         "4. Assign exactly one opinion_type per point and, when a response exists,\n"
         "   exactly one response_type, following the priority rules below.\n"
         "5. Set persuaded using the silence = acceptance rule: persuaded = 0 only when\n"
         "   the same reviewer explicitly repeats the concern or expresses continued\n"
         "   dissatisfaction in a later round; otherwise persuaded = 1, including when\n"
         "   no later round exists.\n\n";

  out << "GUIDING QUESTIONS\n";
  for (Metric metric : kAllMetrics) {
    out << "- " << metric_name(metric) << ": " << guiding_question(metric) << "\n";
  }
  out << "\nSCORE ANCHORS\n";
  for (Metric metric : kAllMetrics) {
    out << metric_name(metric) << ":\n";
    for (int score = 1; score <= 10; ++score) {
      out << "  " << score << ": " << anchor_text(metric, score) << "\n";
    }
  }

  out << "\nOPINION TYPE PRIORITY\n"
         "1. Accept: pure endorsement with no substantive criticism.\n"
         "2. RecommendReference: the reviewer suggests specific paper(s) identifiable\n"
         "   by author, year, or title. \"Please cite Smith et al. 2019 on this point.\"\n"
         "   is RecommendReference; a generic complaint that the literature review is\n"
         "   incomplete, without naming a paper, is Presentation.\n"
         "3. Otherwise the FIRST matching substantive category, in this order:\n"
         "   Conceptual, Methodology, AnalysisInterpretation, Logic,\n"
         "   NoveltyContribution, Scope. Default: Presentation.\n"
         "Disambiguation: questions about how the study differs from prior work are\n"
         "NoveltyContribution; critiques of method choice affecting validity are\n"
         "Methodology; critiques of statistical test choice are\n"
         "AnalysisInterpretation; statements that the evidence does not support the\n"
         "conclusion are Logic, not AnalysisInterpretation.\n\n";

  out << "RESPONSE TYPE\n"
         "- AcceptRevise: full agreement with implemented or promised revision.\n"
         "- ClarifyMisunderstanding: the material was already in the manuscript.\n"
         "- RebutDisagree: explicit disagreement maintaining the authors' position.\n"
         "- PartiallyAccept: accepts one part of the criticism, disputes another.\n"
         "- PromiseFutureWork: defers the change beyond the current paper.\n\n";

  out << "REQUIRED OUTPUT: JSON array with one object for each reviewer in each round:\n"
         "[{\"round\": <int>, \"reviewer_id\": \"<id>\", \"points\": [{\"comment_text\":\n"
         "\"...\", \"response_text\": \"...\", \"s\": <1-10>, \"c\": <1-10>, \"q\": <1-10>,\n"
         "\"r\": <1-10>, \"opinion_type\": \"...\", \"response_type\": \"...\",\n"
         "\"persuaded\": <0|1>}, ...]}, ...]\n"
         "Omit response_text and response_type when no author response addresses the\n"
         "point. Return only JSON, with no surrounding prose.\n\n";

  out << "CORRESPONDENCE\n";
  for (const auto& round : doc.rounds) {
    out << "ROUND " << round.index << "\n";
    for (const auto& block : round.reviewer_blocks) {
      out << "Reviewer " << block.reviewer_id << ":\n" << block.comment_text << "\n\n";
    }
    out << "AUTHOR RESPONSE (ROUND " << round.index << "):\n";
    out << (round.author_response_text.empty() ? "(none)" : round.author_response_text)
        << "\n\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Payload repair

std::string repair_payload(const std::string& raw_text) {
  // Drop Markdown fence lines.
  std::string defenced;
  for (const auto& line : text::split_lines(raw_text)) {
    if (text::trim(line).rfind("```", 0) == 0) continue;
    defenced += line;
    defenced += '\n';
  }

  const size_t start = defenced.find_first_of("[{");
  if (start == std::string::npos) {
    throw PipelineError(ErrorKind::NoJsonFound, "no '[' or '{' in model output");
  }

  // Balanced, string-aware scan for the end of the first JSON value.
  size_t end = defenced.size();
  int depth = 0;
  bool in_string = false, escaped = false;
  for (size_t i = start; i < defenced.size(); ++i) {
    const char c = defenced[i];
    if (in_string) {
      if (escaped) escaped = false;
      else if (c == '\\') escaped = true;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == '[' || c == '{') ++depth;
    else if (c == ']' || c == '}') {
      if (--depth == 0) {
        end = i + 1;
        break;
      }
    }
  }
  const std::string candidate = defenced.substr(start, end - start);

  // Remove trailing commas before ']' / '}' outside strings.
  std::string out;
  out.reserve(candidate.size());
  in_string = escaped = false;
  for (size_t i = 0; i < candidate.size(); ++i) {
    const char c = candidate[i];
    if (in_string) {
      if (escaped) escaped = false;
      else if (c == '\\') escaped = true;
      else if (c == '"') in_string = false;
      out.push_back(c);
      continue;
    }
    if (c == '"') {
      in_string = true;
      out.push_back(c);
      continue;
    }
    if (c == ',') {
      size_t j = i + 1;
      while (j < candidate.size() && std::isspace(static_cast<unsigned char>(candidate[j]))) ++j;
      if (j < candidate.size() && (candidate[j] == ']' || candidate[j] == '}')) continue;
    }
    out.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Payload validation

namespace {

[[noreturn]] void parse_error(const std::string& what) {
  throw PipelineError(ErrorKind::ParseError, what);
}

int require_int(const ordered_json& obj, const char* key) {
  if (!obj.contains(key) || !obj.at(key).is_number_integer()) {
    parse_error(std::string("missing or non-integer field '") + key + "'");
  }
  return obj.at(key).get<int>();
}

std::string require_string(const ordered_json& obj, const char* key) {
  if (!obj.contains(key) || !obj.at(key).is_string()) {
    parse_error(std::string("missing or non-string field '") + key + "'");
  }
  return obj.at(key).get<std::string>();
}

int require_score(const ordered_json& obj, const char* key) {
  const int value = require_int(obj, key);
  if (value < 1 || value > 10) {
    throw PipelineError(ErrorKind::RangeError,
                        std::string(key) + "=" + std::to_string(value) + " outside [1,10]");
  }
  return value;
}

}  // namespace

ExtractionPayload validate_payload(const std::string& json_text,
                                   const CorrespondenceDocument& doc) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    parse_error(e.what());
  }
  if (!j.is_array()) parse_error("top-level JSON value must be an array");

  ExtractionPayload payload;
  std::set<std::pair<int, std::string>> seen;
  for (const auto& bj : j) {
    if (!bj.is_object()) parse_error("reviewer-round entry must be an object");
    ReviewerRoundBlock block;
    block.round = require_int(bj, "round");
    block.reviewer_id = require_string(bj, "reviewer_id");

    const ReviewRound* round = doc.round(block.round);
    const ReviewerBlock* source = nullptr;
    if (round) {
      for (const auto& rb : round->reviewer_blocks) {
        if (rb.reviewer_id == block.reviewer_id) {
          source = &rb;
          break;
        }
      }
    }
    if (!source) {
      throw PipelineError(ErrorKind::UnknownReviewer,
                          "round " + std::to_string(block.round) + ", reviewer '" +
                              block.reviewer_id + "' not in document " + doc.paper_id);
    }
    if (!seen.emplace(block.round, block.reviewer_id).second) {
      parse_error("duplicate block for round " + std::to_string(block.round) + ", reviewer '" +
                  block.reviewer_id + "'");
    }
    if (!bj.contains("points") || !bj.at("points").is_array()) {
      parse_error("missing points array");
    }
    for (const auto& pj : bj.at("points")) {
      if (!pj.is_object()) parse_error("point must be an object");
      PayloadPoint point;
      point.comment_text = require_string(pj, "comment_text");
      if (text::trim(point.comment_text).empty()) parse_error("empty comment_text");
      if (pj.contains("response_text") && !pj.at("response_text").is_null()) {
        point.response_text = require_string(pj, "response_text");
      }
      point.s = require_score(pj, "s");
      point.c = require_score(pj, "c");
      point.q = require_score(pj, "q");
      point.r = require_score(pj, "r");
      const std::string ot = require_string(pj, "opinion_type");
      point.opinion_type = opinion_type_from_name(ot);
      if (pj.contains("response_type") && !pj.at("response_type").is_null()) {
        point.response_type = response_type_from_name(require_string(pj, "response_type"));
      }
      if (point.response_type.has_value() != point.response_text.has_value()) {
        parse_error("response_type must be present exactly when response_text is present");
      }
      point.persuaded = require_int(pj, "persuaded");
      if (point.persuaded != 0 && point.persuaded != 1) {
        throw PipelineError(ErrorKind::RangeError,
                            "persuaded=" + std::to_string(point.persuaded) + " outside {0,1}");
      }
      block.points.push_back(std::move(point));
    }
    if (block.points.empty() && !text::trim(source->comment_text).empty()) {
      parse_error("empty points for reviewer '" + block.reviewer_id + "' in round " +
                  std::to_string(block.round) + " whose comment text is non-empty");
    }
    payload.push_back(std::move(block));
  }
  return payload;
}

std::string payload_to_json(const ExtractionPayload& payload) {
  ordered_json root = ordered_json::array();
  for (const auto& block : payload) {
    ordered_json bj;
    bj["round"] = block.round;
    bj["reviewer_id"] = block.reviewer_id;
    ordered_json points = ordered_json::array();
    for (const auto& point : block.points) {
      ordered_json pj;
      pj["comment_text"] = point.comment_text;
      if (point.response_text) pj["response_text"] = *point.response_text;
      pj["s"] = point.s;
      pj["c"] = point.c;
      pj["q"] = point.q;
      pj["r"] = point.r;
      pj["opinion_type"] = std::string(opinion_type_name(point.opinion_type));
      if (point.response_type) {
        pj["response_type"] = std::string(response_type_name(*point.response_type));
      }
      pj["persuaded"] = point.persuaded;
      points.push_back(std::move(pj));
    }
    bj["points"] = std::move(points);
    root.push_back(std::move(bj));
  }
  return root.dump();
}

std::vector<CommentResponsePair> flatten_payload(const ExtractionPayload& payload,
                                                 const std::string& paper_id) {
  std::vector<CommentResponsePair> pairs;
  for (const auto& block : payload) {
    int index = 1;
    for (const auto& point : block.points) {
      CommentResponsePair pair;
      pair.paper_id = paper_id;
      pair.round = block.round;
      pair.reviewer_id = block.reviewer_id;
      pair.comment_index = index++;
      pair.comment_text = point.comment_text;
      pair.response_text = point.response_text;
      pair.s = point.s;
      pair.c = point.c;
      pair.q = point.q;
      pair.r = point.r;
      pair.opinion_type = point.opinion_type;
      pair.response_type = point.response_type;
      pair.persuaded = point.persuaded;
      pairs.push_back(std::move(pair));
    }
  }
  std::sort(pairs.begin(), pairs.end(), pair_order);
  return pairs;
}

// ---------------------------------------------------------------------------
// Mock extraction

namespace {

struct RawPoint {
  std::optional<int> number;
  std::string body;
};

const std::regex kNumberedRe(R"(^\s*(\d+)[.)]\s*(.*)$)");
const std::regex kBulletRe(R"(^\s*-\s+(.*)$)");

std::vector<RawPoint> split_points(const std::string& block_text) {
  std::vector<RawPoint> points;
  std::optional<int> number;
  std::vector<std::string> buffer;
  bool open = false;

  auto flush = [&]() {
    if (!open) return;
    std::string body;
    for (const auto& line : buffer) body += line + "\n";
    body = text::trim(body);
    if (!body.empty()) points.push_back({number, body});
    buffer.clear();
    number.reset();
    open = false;
  };

  for (const auto& line : text::split_lines(block_text)) {
    std::smatch m;
    if (std::regex_match(line, m, kNumberedRe)) {
      flush();
      open = true;
      number = std::stoi(m[1].str());
      buffer.push_back(m[2].str());
    } else if (std::regex_match(line, m, kBulletRe)) {
      flush();
      open = true;
      buffer.push_back(m[1].str());
    } else if (text::trim(line).empty()) {
      flush();
    } else {
      open = true;
      buffer.push_back(line);
    }
  }
  flush();
  if (points.empty()) {
    const std::string whole = text::trim(block_text);
    if (!whole.empty()) points.push_back({std::nullopt, whole});
  }
  return points;
}

// Response alignment: numbered echo first, then a quoted ("> ...") or
// verbatim echo of the point's opening text, else the whole letter.
std::optional<std::string> align_response(const std::string& letter, const RawPoint& point) {
  const std::string trimmed_letter = text::trim(letter);
  if (trimmed_letter.empty()) return std::nullopt;

  const auto segments = split_points(letter);
  if (point.number) {
    for (const auto& seg : segments) {
      if (seg.number && *seg.number == *point.number) return seg.body;
    }
  }

  const std::string collapsed_point = text::collapse_ws(point.body);
  const std::string prefix =
      collapsed_point.substr(0, std::min<size_t>(40, collapsed_point.size()));
  if (prefix.size() >= 15) {
    for (size_t i = 0; i < segments.size(); ++i) {
      const std::string seg = text::collapse_ws(segments[i].body);
      // Whole echoed point first, then its opening fragment.
      for (const std::string& echo : {collapsed_point, prefix}) {
        const size_t at = seg.find(echo);
        if (at == std::string::npos) continue;
        std::string after = text::trim(seg.substr(at + echo.size()));
        if (!after.empty()) return after;
        if (i + 1 < segments.size()) return segments[i + 1].body;
        return segments[i].body;
      }
    }
  }
  return trimmed_letter;
}

int count_keyword_hits(const std::string& text_value, const std::vector<std::string>& patterns) {
  int hits = 0;
  for (const auto& p : patterns) {
    if (text_value.find(p) != std::string::npos) ++hits;
  }
  return hits;
}

int band_score(int hits) {
  const int score = hits == 0 ? 3 : hits == 1 ? 6 : 9;
  return std::clamp(score, 1, 10);
}

}  // namespace

ExtractionPayload mock_extract(const CorrespondenceDocument& doc, std::uint64_t seed,
                               const MockOptions& options) {
  const auto& keywords = KeywordRuleSet::builtin();
  ExtractionPayload payload;

  for (const auto& round : doc.rounds) {
    for (const auto& block : round.reviewer_blocks) {
      ReviewerRoundBlock out;
      out.round = round.index;
      out.reviewer_id = block.reviewer_id;

      const auto points = split_points(block.comment_text);
      int point_index = 0;
      for (const auto& raw : points) {
        PayloadPoint point;
        point.comment_text = raw.body;
        point.response_text = align_response(round.author_response_text, raw);

        point.s = band_score(
            count_keyword_hits(raw.body, keywords.patterns.at(Metric::OpinionStrength)));
        point.c = band_score(
            count_keyword_hits(raw.body, keywords.patterns.at(Metric::Constructiveness)));
        point.q = band_score(
            count_keyword_hits(raw.body, keywords.patterns.at(Metric::CommentQuality)));
        point.r = band_score(count_keyword_hits(
            point.response_text.value_or(""), keywords.patterns.at(Metric::RevisionCost)));

        if (options.score_jitter_prob > 0.0) {
          Rng rng(splitmix64(seed ^ fnv1a(doc.paper_id) ^
                             (static_cast<std::uint64_t>(round.index) << 32) ^
                             fnv1a(block.reviewer_id) ^
                             static_cast<std::uint64_t>(point_index)));
          for (int* score : {&point.s, &point.c, &point.q, &point.r}) {
            if (rng.bernoulli(options.score_jitter_prob)) {
              *score = std::clamp(*score + (rng.bernoulli(0.5) ? 1 : -1), 1, 10);
            }
          }
        }

        point.opinion_type = classify_opinion_type(raw.body);
        if (point.response_text) {
          point.response_type = classify_response_type(*point.response_text);
        }
        out.points.push_back(std::move(point));
        ++point_index;
      }
      payload.push_back(std::move(out));
    }
  }

  // Persuasion needs the cross-round view; run it on the flattened pairs and
  // copy the bits back in block order.
  auto pairs = flatten_payload(payload, doc.paper_id);
  derive_persuasion(pairs, doc);
  std::map<std::tuple<int, std::string, int>, int> persuaded;
  for (const auto& pair : pairs) {
    persuaded[{pair.round, pair.reviewer_id, pair.comment_index}] = pair.persuaded;
  }
  for (auto& block : payload) {
    int index = 1;
    for (auto& point : block.points) {
      point.persuaded = persuaded.at({block.round, block.reviewer_id, index++});
    }
  }
  return payload;
}

std::string MockBackend::complete(const CorrespondenceDocument& doc, const std::string&) {
  return payload_to_json(mock_extract(doc, seed_, options_));
}

// ---------------------------------------------------------------------------
// Extraction engine

namespace {

std::string corrective_instruction(const std::string& first_error) {
  return "\n\nYOUR PREVIOUS OUTPUT WAS REJECTED: " + first_error +
         "\nReturn only corrected JSON that satisfies the required schema.";
}

}  // namespace

PaperExtraction extract_paper(const CorrespondenceDocument& doc, ExtractionBackend& backend,
                              const BackendConfig& config, std::vector<AuditRecord>* audit) {
  if (config.temperature < 0 || config.max_retries < 0) {
    throw PipelineError(ErrorKind::RangeError, "temperature and max_retries must be >= 0");
  }
  const std::string prompt = build_prompt(doc);
  const int attempts = std::max(1, config.max_retries);
  std::string last_error;

  for (int attempt = 1; attempt <= attempts; ++attempt) {
    const std::string full_prompt =
        attempt == 1 ? prompt : prompt + corrective_instruction(last_error);
    std::string raw;
    try {
      raw = backend.complete(doc, full_prompt);
    } catch (const PipelineError& e) {
      last_error = e.what();
      if (audit) audit->push_back({doc.paper_id, attempt, "", last_error});
      continue;
    }
    try {
      const std::string repaired = repair_payload(raw);
      ExtractionPayload payload = validate_payload(repaired, doc);
      if (audit) audit->push_back({doc.paper_id, attempt, raw, "ok"});
      return {flatten_payload(payload, doc.paper_id), attempt - 1};
    } catch (const PipelineError& e) {
      last_error = e.what();
      if (audit) audit->push_back({doc.paper_id, attempt, raw, last_error});
    }
  }
  throw PipelineError(ErrorKind::ExhaustedRetries, doc.paper_id + ": " + last_error);
}

std::vector<PaperExtraction> extract_corpus(const Corpus& corpus, ExtractionBackend& backend,
                                            const BackendConfig& config, int jobs,
                                            std::vector<AuditRecord>* audit) {
  const size_t n = corpus.documents.size();
  std::vector<PaperExtraction> results(n);
  std::vector<std::vector<AuditRecord>> audits(n);

  const int workers = std::clamp(jobs, 1, static_cast<int>(std::max<size_t>(n, 1)));
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto run = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= n) return;
      {
        std::lock_guard lock(failure_mutex);
        if (failure) return;
      }
      try {
        results[i] = extract_paper(corpus.documents[i], backend, config, &audits[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  if (workers <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  if (audit) {
    for (auto& per_paper : audits) {
      for (auto& record : per_paper) audit->push_back(std::move(record));
    }
  }
  return results;
}

// ---------------------------------------------------------------------------
// Pair and audit serialization

namespace {

ordered_json pair_to_json(const CommentResponsePair& pair) {
  ordered_json j;
  j["paper_id"] = pair.paper_id;
  j["round"] = pair.round;
  j["reviewer_id"] = pair.reviewer_id;
  j["comment_index"] = pair.comment_index;
  j["comment_text"] = pair.comment_text;
  if (pair.response_text) j["response_text"] = *pair.response_text;
  j["s"] = pair.s;
  j["c"] = pair.c;
  j["q"] = pair.q;
  j["r"] = pair.r;
  j["opinion_type"] = std::string(opinion_type_name(pair.opinion_type));
  if (pair.response_type) {
    j["response_type"] = std::string(response_type_name(*pair.response_type));
  }
  j["persuaded"] = pair.persuaded;
  return j;
}

CommentResponsePair pair_from_json(const ordered_json& j) {
  CommentResponsePair pair;
  pair.paper_id = require_string(j, "paper_id");
  pair.round = require_int(j, "round");
  pair.reviewer_id = require_string(j, "reviewer_id");
  pair.comment_index = require_int(j, "comment_index");
  pair.comment_text = require_string(j, "comment_text");
  if (j.contains("response_text") && !j.at("response_text").is_null()) {
    pair.response_text = require_string(j, "response_text");
  }
  pair.s = require_score(j, "s");
  pair.c = require_score(j, "c");
  pair.q = require_score(j, "q");
  pair.r = require_score(j, "r");
  pair.opinion_type = opinion_type_from_name(require_string(j, "opinion_type"));
  if (j.contains("response_type") && !j.at("response_type").is_null()) {
    pair.response_type = response_type_from_name(require_string(j, "response_type"));
  }
  if (pair.response_type.has_value() != pair.response_text.has_value()) {
    parse_error("response_type must be present exactly when response_text is present");
  }
  pair.persuaded = require_int(j, "persuaded");
  if (pair.persuaded != 0 && pair.persuaded != 1) {
    throw PipelineError(ErrorKind::RangeError, "persuaded outside {0,1}");
  }
  return pair;
}

}  // namespace

void write_pairs_jsonl(const std::vector<CommentResponsePair>& pairs,
                       const std::filesystem::path& path) {
  std::vector<CommentResponsePair> sorted = pairs;
  std::sort(sorted.begin(), sorted.end(), pair_order);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PipelineError(ErrorKind::MissingFile, "cannot write " + path.string());
  for (const auto& pair : sorted) out << pair_to_json(pair).dump() << "\n";
}

std::vector<CommentResponsePair> read_pairs_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PipelineError(ErrorKind::MissingFile, path.string());
  std::vector<CommentResponsePair> pairs;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      pairs.push_back(pair_from_json(ordered_json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      parse_error(path.string() + ": line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return pairs;
}

void write_audit_jsonl(const std::vector<AuditRecord>& audit, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PipelineError(ErrorKind::MissingFile, "cannot write " + path.string());
  for (const auto& record : audit) {
    ordered_json j;
    j["paper_id"] = record.paper_id;
    j["attempt"] = record.attempt;
    j["raw_text"] = record.raw_text;
    j["status"] = record.status;
    out << j.dump() << "\n";
  }
}

}  // namespace revpipe
