#include "revpipe/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "json.hpp"
#include "revpipe/error.hpp"
#include "revpipe/text.hpp"

namespace revpipe {

using nlohmann::ordered_json;

const ReviewRound* CorrespondenceDocument::round(int index) const {
  for (const auto& r : rounds) {
    if (r.index == index) return &r;
  }
  return nullptr;
}

std::vector<std::string> CorrespondenceDocument::reviewer_ids() const {
  std::set<std::string> ids;
  for (const auto& r : rounds) {
    for (const auto& b : r.reviewer_blocks) ids.insert(b.reviewer_id);
  }
  return {ids.begin(), ids.end()};
}

const CorrespondenceDocument* Corpus::find(const std::string& paper_id) const {
  auto it = std::lower_bound(documents.begin(), documents.end(), paper_id,
                             [](const CorrespondenceDocument& d, const std::string& id) {
                               return d.paper_id < id;
                             });
  if (it != documents.end() && it->paper_id == paper_id) return &*it;
  return nullptr;
}

namespace {

[[noreturn]] void schema_error(const std::string& pointer, const std::string& what) {
  throw PipelineError(ErrorKind::SchemaViolation, pointer + ": " + what);
}

void validate_document(const CorrespondenceDocument& doc, const std::string& pointer) {
  if (doc.paper_id.empty()) schema_error(pointer + "/paper_id", "empty paper_id");
  if (doc.rounds.empty()) schema_error(pointer + "/rounds", "document has no rounds");
  for (size_t i = 0; i < doc.rounds.size(); ++i) {
    const auto& round = doc.rounds[i];
    const std::string rp = pointer + "/rounds/" + std::to_string(i);
    if (round.index != static_cast<int>(i) + 1) {
      schema_error(rp + "/index", "round indices must be 1-based, increasing and contiguous (got " +
                                      std::to_string(round.index) + " at position " +
                                      std::to_string(i + 1) + ")");
    }
    if (round.reviewer_blocks.empty()) schema_error(rp + "/reviewers", "round has no reviewers");
    std::set<std::string> seen;
    for (size_t j = 0; j < round.reviewer_blocks.size(); ++j) {
      const auto& block = round.reviewer_blocks[j];
      const std::string bp = rp + "/reviewers/" + std::to_string(j);
      if (block.reviewer_id.empty()) schema_error(bp + "/id", "empty reviewer id");
      if (!seen.insert(block.reviewer_id).second) {
        schema_error(bp + "/id", "duplicate reviewer id '" + block.reviewer_id + "' within round");
      }
      if (text::trim(block.comment_text).empty()) {
        schema_error(bp + "/comment_text", "empty comment text");
      }
    }
  }
}

void validate_team(const TeamAttributes& team, const std::string& pointer) {
  if (team.team_size < 1) schema_error(pointer + "/team_size", "team_size must be >= 1");
  if (team.institution_count < 1) {
    schema_error(pointer + "/institution_count", "institution_count must be >= 1");
  }
  for (auto [value, name] : {std::pair{team.avg_career_age_decile, "avg_career_age_decile"},
                             std::pair{team.max_career_age_decile, "max_career_age_decile"}}) {
    if (value && (*value < 1 || *value > 10)) {
      schema_error(pointer + "/" + name, "decile must be in [1,10]");
    }
  }
  if (team.avg_career_age_decile && team.max_career_age_decile &&
      *team.max_career_age_decile < *team.avg_career_age_decile) {
    schema_error(pointer + "/max_career_age_decile", "max decile below avg decile");
  }
}

}  // namespace

void validate_corpus(const Corpus& corpus) {
  std::set<std::string> ids;
  for (size_t i = 0; i < corpus.documents.size(); ++i) {
    const auto& doc = corpus.documents[i];
    if (!ids.insert(doc.paper_id).second) {
      throw PipelineError(ErrorKind::DuplicatePaperId, doc.paper_id);
    }
    validate_document(doc, "/" + std::to_string(i));
  }
  for (const auto& [paper_id, team] : corpus.team) {
    if (!ids.count(paper_id)) {
      schema_error("/team/" + paper_id, "team entry for unknown paper");
    }
    validate_team(team, "/team/" + paper_id);
  }
  for (const auto& [paper_id, c3] : corpus.impact) {
    if (!ids.count(paper_id)) {
      schema_error("/impact/" + paper_id, "impact entry for unknown paper");
    }
    if (c3 < 0) schema_error("/impact/" + paper_id, "negative c3");
  }
}

namespace {

template <typename T>
T require_field(const ordered_json& obj, const char* key, const std::string& pointer) {
  if (!obj.contains(key)) schema_error(pointer + "/" + key, "missing field");
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    schema_error(pointer + "/" + key, std::string("wrong type: ") + e.what());
  }
}

CorrespondenceDocument document_from_json(const ordered_json& j, const std::string& pointer) {
  if (!j.is_object()) schema_error(pointer, "expected object");
  CorrespondenceDocument doc;
  doc.paper_id = require_field<std::string>(j, "paper_id", pointer);
  if (j.contains("doi") && !j.at("doi").is_null()) {
    doc.doi = require_field<std::string>(j, "doi", pointer);
  }
  doc.year = require_field<int>(j, "year", pointer);
  if (j.contains("field") && !j.at("field").is_null()) {
    doc.field = require_field<std::string>(j, "field", pointer);
  }
  if (!j.contains("rounds") || !j.at("rounds").is_array()) {
    schema_error(pointer + "/rounds", "missing rounds array");
  }
  size_t ri = 0;
  for (const auto& rj : j.at("rounds")) {
    const std::string rp = pointer + "/rounds/" + std::to_string(ri++);
    if (!rj.is_object()) schema_error(rp, "expected object");
    ReviewRound round;
    round.index = require_field<int>(rj, "index", rp);
    if (!rj.contains("reviewers") || !rj.at("reviewers").is_array()) {
      schema_error(rp + "/reviewers", "missing reviewers array");
    }
    size_t bi = 0;
    for (const auto& bj : rj.at("reviewers")) {
      const std::string bp = rp + "/reviewers/" + std::to_string(bi++);
      if (!bj.is_object()) schema_error(bp, "expected object");
      ReviewerBlock block;
      block.reviewer_id = require_field<std::string>(bj, "id", bp);
      block.comment_text = require_field<std::string>(bj, "comment_text", bp);
      round.reviewer_blocks.push_back(std::move(block));
    }
    if (rj.contains("author_response_text") && !rj.at("author_response_text").is_null()) {
      round.author_response_text = require_field<std::string>(rj, "author_response_text", rp);
    }
    doc.rounds.push_back(std::move(round));
  }
  return doc;
}

TeamAttributes team_from_json(const ordered_json& j, const std::string& pointer) {
  TeamAttributes team;
  team.team_size = require_field<int>(j, "team_size", pointer);
  team.institution_count = require_field<int>(j, "institution_count", pointer);
  if (j.contains("avg_career_age_decile") && !j.at("avg_career_age_decile").is_null()) {
    team.avg_career_age_decile = require_field<int>(j, "avg_career_age_decile", pointer);
  }
  if (j.contains("max_career_age_decile") && !j.at("max_career_age_decile").is_null()) {
    team.max_career_age_decile = require_field<int>(j, "max_career_age_decile", pointer);
  }
  return team;
}

}  // namespace

Corpus manifest_from_json(const std::string& json_text, const std::string& origin) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw PipelineError(ErrorKind::SchemaViolation, origin + ": invalid JSON: " + e.what());
  }
  if (!j.is_array()) {
    throw PipelineError(ErrorKind::SchemaViolation, origin + ": manifest must be a JSON array");
  }
  Corpus corpus;
  std::set<std::string> ids;
  size_t i = 0;
  for (const auto& dj : j) {
    const std::string pointer = "/" + std::to_string(i++);
    CorrespondenceDocument doc = document_from_json(dj, pointer);
    if (!ids.insert(doc.paper_id).second) {
      throw PipelineError(ErrorKind::DuplicatePaperId, doc.paper_id);
    }
    if (dj.contains("team") && !dj.at("team").is_null()) {
      corpus.team[doc.paper_id] = team_from_json(dj.at("team"), pointer + "/team");
    }
    corpus.documents.push_back(std::move(doc));
  }
  std::sort(corpus.documents.begin(), corpus.documents.end(),
            [](const auto& a, const auto& b) { return a.paper_id < b.paper_id; });
  validate_corpus(corpus);
  return corpus;
}

Corpus load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PipelineError(ErrorKind::MissingFile, path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return manifest_from_json(buf.str(), path.string());
}

std::string manifest_to_json(const Corpus& corpus) {
  ordered_json root = ordered_json::array();
  for (const auto& doc : corpus.documents) {
    ordered_json dj;
    dj["paper_id"] = doc.paper_id;
    if (doc.doi) dj["doi"] = *doc.doi;
    dj["year"] = doc.year;
    if (doc.field) dj["field"] = *doc.field;
    if (auto it = corpus.team.find(doc.paper_id); it != corpus.team.end()) {
      ordered_json tj;
      tj["team_size"] = it->second.team_size;
      tj["institution_count"] = it->second.institution_count;
      if (it->second.avg_career_age_decile) {
        tj["avg_career_age_decile"] = *it->second.avg_career_age_decile;
      }
      if (it->second.max_career_age_decile) {
        tj["max_career_age_decile"] = *it->second.max_career_age_decile;
      }
      dj["team"] = std::move(tj);
    }
    ordered_json rounds = ordered_json::array();
    for (const auto& round : doc.rounds) {
      ordered_json rj;
      rj["index"] = round.index;
      ordered_json reviewers = ordered_json::array();
      for (const auto& block : round.reviewer_blocks) {
        reviewers.push_back({{"id", block.reviewer_id}, {"comment_text", block.comment_text}});
      }
      rj["reviewers"] = std::move(reviewers);
      rj["author_response_text"] = round.author_response_text;
      rounds.push_back(std::move(rj));
    }
    dj["rounds"] = std::move(rounds);
    root.push_back(std::move(dj));
  }
  return root.dump(2) + "\n";
}

void save_manifest(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PipelineError(ErrorKind::MissingFile, "cannot write " + path.string());
  out << manifest_to_json(corpus);
}

namespace {

const std::regex kReviewSectionRe(R"(^\s*reviewers?'?\s+comments?\b)", std::regex::icase);
const std::regex kResponseSectionRe(
    R"(^\s*(rebuttal\b|author\s+responses?\b|responses?\s+to\s+(the\s+)?reviewers?\b))",
    std::regex::icase);
const std::regex kReviewerRe(R"(^\s*(reviewer|referee)\s*#\s*(\d+))", std::regex::icase);

}  // namespace

CorrespondenceDocument parse_raw_correspondence(const std::string& raw_text,
                                                const std::string& paper_id, int year,
                                                ParseWarnings* warnings) {
  auto warn = [&](const std::string& msg) {
    if (warnings) warnings->messages.push_back(msg);
  };

  struct RawRound {
    std::vector<ReviewerBlock> blocks;
    std::string response;
  };
  std::vector<RawRound> raw_rounds;

  enum class State { Preamble, Review, Response };
  State state = State::Preamble;
  std::string current_reviewer;
  std::vector<std::string> buffer;

  auto flush_block = [&]() {
    if (current_reviewer.empty()) {
      buffer.clear();
      return;
    }
    std::string body;
    for (const auto& line : buffer) body += line + "\n";
    body = text::trim(body);
    auto& blocks = raw_rounds.back().blocks;
    if (body.empty()) {
      warn("paper " + paper_id + ": empty comment block for " + current_reviewer + ", dropped");
    } else if (auto it = std::find_if(blocks.begin(), blocks.end(),
                                      [&](const ReviewerBlock& b) {
                                        return b.reviewer_id == current_reviewer;
                                      });
               it != blocks.end()) {
      // Same reviewer marker twice in one round: merge.
      it->comment_text += "\n\n" + body;
    } else {
      blocks.push_back({current_reviewer, body});
    }
    current_reviewer.clear();
    buffer.clear();
  };

  auto flush_response = [&]() {
    std::string body;
    for (const auto& line : buffer) body += line + "\n";
    raw_rounds.back().response = text::trim(body);
    buffer.clear();
  };

  for (const auto& line : text::split_lines(raw_text)) {
    std::smatch m;
    if (std::regex_search(line, kReviewSectionRe)) {
      if (state == State::Review) flush_block();
      if (state == State::Response) flush_response();
      raw_rounds.emplace_back();
      state = State::Review;
      continue;
    }
    if (state != State::Preamble && std::regex_search(line, kResponseSectionRe)) {
      if (state == State::Review) flush_block();
      state = State::Response;
      buffer.clear();
      continue;
    }
    if (state == State::Review && std::regex_search(line, m, kReviewerRe)) {
      flush_block();
      current_reviewer = "R" + m[2].str();
      continue;
    }
    if (state == State::Review || state == State::Response) buffer.push_back(line);
  }
  if (state == State::Review) flush_block();
  if (state == State::Response) flush_response();

  if (raw_rounds.empty()) {
    throw PipelineError(ErrorKind::NoRoundsDetected, "paper " + paper_id);
  }

  CorrespondenceDocument doc;
  doc.paper_id = paper_id;
  doc.year = year;
  std::optional<int> first_empty;
  for (size_t i = 0; i < raw_rounds.size(); ++i) {
    if (raw_rounds[i].blocks.empty()) {
      if (!first_empty) first_empty = static_cast<int>(i) + 1;
      warn("paper " + paper_id + ": round " + std::to_string(i + 1) +
           " has no reviewer blocks, dropped");
      continue;
    }
    ReviewRound round;
    round.index = static_cast<int>(doc.rounds.size()) + 1;
    round.reviewer_blocks = std::move(raw_rounds[i].blocks);
    round.author_response_text = std::move(raw_rounds[i].response);
    doc.rounds.push_back(std::move(round));
  }
  if (doc.rounds.empty()) {
    throw PipelineError(ErrorKind::NoReviewersDetected,
                        "paper " + paper_id + ", round " + std::to_string(*first_empty));
  }
  return doc;
}

std::string normalize_doi(std::string doi) {
  doi = text::to_lower(text::trim(doi));
  for (std::string_view prefix : {"https://doi.org/", "http://doi.org/", "doi.org/"}) {
    if (doi.rfind(prefix, 0) == 0) {
      doi = doi.substr(prefix.size());
      break;
    }
  }
  return doi;
}

Corpus join_impact(Corpus corpus, const std::filesystem::path& impact_csv, JoinReport* report) {
  std::ifstream in(impact_csv, std::ios::binary);
  if (!in) throw PipelineError(ErrorKind::MissingFile, impact_csv.string());

  std::string line;
  if (!std::getline(in, line)) {
    throw PipelineError(ErrorKind::MalformedCsv, impact_csv.string() + ": empty file");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line = line.substr(3);
  if (text::to_lower(text::trim(line)) != "doi,c3") {
    throw PipelineError(ErrorKind::MalformedCsv,
                        impact_csv.string() + ": line 1: expected header \"doi,c3\"");
  }

  std::map<std::string, long long> by_doi;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    auto where = [&] { return impact_csv.string() + ": line " + std::to_string(line_no); };
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw PipelineError(ErrorKind::MalformedCsv, where() + ": expected doi,c3");
    }
    std::string doi = normalize_doi(line.substr(0, comma));
    std::string c3_text = text::trim(line.substr(comma + 1));
    if (doi.empty() || c3_text.empty() || c3_text.find(',') != std::string::npos) {
      throw PipelineError(ErrorKind::MalformedCsv, where() + ": expected doi,c3");
    }
    long long c3 = 0;
    try {
      size_t used = 0;
      c3 = std::stoll(c3_text, &used);
      if (used != c3_text.size()) throw std::invalid_argument(c3_text);
    } catch (const std::exception&) {
      throw PipelineError(ErrorKind::MalformedCsv, where() + ": c3 not an integer");
    }
    if (c3 < 0) throw PipelineError(ErrorKind::NegativeC3, where());
    if (!by_doi.emplace(doi, c3).second) {
      throw PipelineError(ErrorKind::MalformedCsv, where() + ": duplicate doi '" + doi + "'");
    }
  }

  JoinReport local;
  local.rows = by_doi.size();
  for (const auto& doc : corpus.documents) {
    if (!doc.doi) continue;
    auto it = by_doi.find(normalize_doi(*doc.doi));
    if (it != by_doi.end()) {
      corpus.impact[doc.paper_id] = it->second;
      ++local.matched_papers;
    }
  }
  if (report) *report = local;
  return corpus;
}

}  // namespace revpipe
