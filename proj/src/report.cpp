#include "revpipe/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <set>

#include "json.hpp"
#include "revpipe/consensus.hpp"
#include "revpipe/csv.hpp"
#include "revpipe/error.hpp"
#include "revpipe/metrics.hpp"
#include "revpipe/stats.hpp"
#include "revpipe/validation.hpp"

namespace revpipe {

namespace {

using nlohmann::ordered_json;

void check_toggles(const AnalysisToggles& toggles) {
  if (toggles.tail_pct <= 0.0 || toggles.tail_pct >= 0.5) {
    throw PipelineError(ErrorKind::OutOfRange, "tail_pct must lie in (0, 0.5)");
  }
  if (toggles.c3_tail_pct <= 0.0 || toggles.c3_tail_pct >= 0.5) {
    throw PipelineError(ErrorKind::OutOfRange, "c3_tail_pct must lie in (0, 0.5)");
  }
  if (toggles.consensus_threshold <= 0.0) {
    throw PipelineError(ErrorKind::OutOfRange, "consensus threshold must be > 0");
  }
}

void write_run_meta(const RunConfig& config, const std::string& command) {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm);

  ordered_json meta;
  meta["command"] = command;
  meta["generated_at"] = stamp;
  meta["corpus"] = config.corpus_path.string();
  meta["backend"] = config.backend;
  meta["seed"] = config.seed;
  std::ofstream out(config.out_dir / "run_meta.json", std::ios::binary);
  out << meta.dump(2) << "\n";
}

Corpus load_corpus(const RunConfig& config) {
  Corpus corpus = load_manifest(config.corpus_path);
  if (!config.impact_path.empty()) {
    JoinReport join;
    corpus = join_impact(std::move(corpus), config.impact_path, &join);
    std::cerr << "joined impact: " << join.matched_papers << " of " << corpus.documents.size()
              << " papers matched\n";
  }
  return corpus;
}

std::unique_ptr<ExtractionBackend> make_backend(const RunConfig& config) {
  if (config.backend == "mock") {
    return std::make_unique<MockBackend>(config.seed, MockOptions{config.mock_jitter});
  }
  if (config.backend == "http") return std::make_unique<HttpBackend>(config.http);
  throw PipelineError(ErrorKind::UnknownEnum, "backend '" + config.backend + "'");
}

MetricsOptions metrics_options(const RunConfig& config) {
  return MetricsOptions{config.toggles.exclude_accept};
}

constexpr std::array<SummaryQuantity, 6> kFocalQuantities = {
    SummaryQuantity::MeanS,         SummaryQuantity::MeanC, SummaryQuantity::MeanQ,
    SummaryQuantity::MeanR,         SummaryQuantity::PersuasionRate,
    SummaryQuantity::RebuttalRate,
};

// ---------------------------------------------------------------------------
// analyze emitters

void emit_fig2_rounds(const std::vector<CommentResponsePair>& pairs,
                      const MetricsOptions& options, const std::filesystem::path& out) {
  std::set<int> rounds;
  for (const auto& pair : pairs) rounds.insert(pair.round);
  csv::Writer writer(out / "fig2_rounds.csv");
  writer.header({"round", "n_pairs", "mean_s", "mean_c", "mean_q", "mean_r"});
  for (int round : rounds) {
    size_t n = 0;
    for (const auto& pair : pairs) {
      if (pair.round == round) ++n;
    }
    writer.row({std::to_string(round), std::to_string(n),
                csv::fmt(round_mean(pairs, round, Metric::OpinionStrength, options)),
                csv::fmt(round_mean(pairs, round, Metric::Constructiveness, options)),
                csv::fmt(round_mean(pairs, round, Metric::CommentQuality, options)),
                csv::fmt(round_mean(pairs, round, Metric::RevisionCost, options))});
  }
}

void emit_fig2_types(const std::vector<CommentResponsePair>& pairs,
                     const std::filesystem::path& out) {
  csv::Writer writer(out / "fig2_types.csv");
  writer.header(
      {"opinion_type", "n_pairs", "share", "round1_share", "mean_s", "mean_c", "mean_q"});
  size_t total = pairs.size(), round1_total = 0;
  for (const auto& pair : pairs) {
    if (pair.round == 1) ++round1_total;
  }
  for (OpinionType type : kAllOpinionTypes) {
    std::vector<const CommentResponsePair*> members;
    size_t round1 = 0;
    for (const auto& pair : pairs) {
      if (pair.opinion_type != type) continue;
      members.push_back(&pair);
      if (pair.round == 1) ++round1;
    }
    if (members.empty()) continue;
    double s = 0, c = 0, q = 0;
    for (const auto* pair : members) {
      s += pair->s;
      c += pair->c;
      q += pair->q;
    }
    const double n = static_cast<double>(members.size());
    writer.row({std::string(opinion_type_name(type)), std::to_string(members.size()),
                csv::fmt(n / static_cast<double>(total)),
                round1_total ? csv::fmt(static_cast<double>(round1) /
                                        static_cast<double>(round1_total))
                             : "",
                csv::fmt(s / n), csv::fmt(c / n), csv::fmt(q / n)});
  }
}

void emit_fig3_responses(const std::vector<CommentResponsePair>& pairs,
                         const std::filesystem::path& out) {
  csv::Writer writer(out / "fig3_responses.csv");
  std::vector<std::string> header = {"opinion_type", "n_pairs", "mean_r", "persuasion_rate",
                                     "rebuttal_rate"};
  for (ResponseType rt : kAllResponseTypes) {
    header.push_back("share_" + std::string(response_type_name(rt)));
  }
  writer.header(header);
  for (OpinionType type : kAllOpinionTypes) {
    std::vector<CommentResponsePair> members;
    for (const auto& pair : pairs) {
      if (pair.opinion_type == type) members.push_back(pair);
    }
    if (members.empty()) continue;
    std::vector<std::string> row = {std::string(opinion_type_name(type)),
                                    std::to_string(members.size()),
                                    csv::fmt(paper_mean(members, Metric::RevisionCost)),
                                    csv::fmt(persuasion_rate(members))};
    const bool any_response = std::any_of(members.begin(), members.end(), [](const auto& p) {
      return p.response_type.has_value();
    });
    row.push_back(any_response ? csv::fmt(rebuttal_rate(members)) : "");
    std::map<std::string, double> shares;
    if (any_response) shares = proportions_by(members, CategoricalKey::ResponseTypeKey);
    for (ResponseType rt : kAllResponseTypes) {
      auto it = shares.find(std::string(response_type_name(rt)));
      row.push_back(it != shares.end() ? csv::fmt(it->second) : "");
    }
    writer.row(row);
  }
}

void emit_table1_team(const std::vector<PaperSummary>& summaries,
                      const std::filesystem::path& out) {
  csv::Writer writer(out / "table1_team.csv");
  writer.header({"team_attribute", "metric", "rho", "p", "stars", "n"});

  struct Attribute {
    const char* name;
    std::function<std::optional<double>(const PaperSummary&)> get;
  };
  const std::vector<Attribute> attributes = {
      {"team_size",
       [](const PaperSummary& s) -> std::optional<double> {
         if (s.team) return s.team->team_size;
         return std::nullopt;
       }},
      {"institution_count",
       [](const PaperSummary& s) -> std::optional<double> {
         if (s.team) return s.team->institution_count;
         return std::nullopt;
       }},
      {"avg_career_age_decile",
       [](const PaperSummary& s) -> std::optional<double> {
         if (s.team && s.team->avg_career_age_decile) return *s.team->avg_career_age_decile;
         return std::nullopt;
       }},
      {"max_career_age_decile",
       [](const PaperSummary& s) -> std::optional<double> {
         if (s.team && s.team->max_career_age_decile) return *s.team->max_career_age_decile;
         return std::nullopt;
       }},
  };
  constexpr std::array<SummaryQuantity, 5> kTable1Metrics = {
      SummaryQuantity::MeanS, SummaryQuantity::MeanC, SummaryQuantity::MeanQ,
      SummaryQuantity::MeanR, SummaryQuantity::PersuasionRate};

  for (const auto& attribute : attributes) {
    for (SummaryQuantity quantity : kTable1Metrics) {
      std::vector<double> x, y;
      for (const auto& summary : summaries) {
        const auto a = attribute.get(summary);
        const auto m = summary_value(summary, quantity);
        if (a && m) {
          x.push_back(*a);
          y.push_back(*m);
        }
      }
      std::vector<std::string> row = {attribute.name,
                                      std::string(summary_quantity_name(quantity))};
      try {
        const auto result = stats::spearman(x, y);
        row.insert(row.end(), {csv::fmt(result.estimate), csv::fmt(result.p_value), result.stars,
                               std::to_string(result.n)});
      } catch (const PipelineError&) {
        row.insert(row.end(), {"", "", "", std::to_string(x.size())});
      }
      writer.row(row);
    }
  }
}

void emit_fig5_correlations(const std::vector<PaperSummary>& summaries,
                            const std::filesystem::path& out) {
  csv::Writer writer(out / "fig5_correlations.csv");
  writer.header({"metric", "rho", "p", "stars", "n"});
  for (SummaryQuantity quantity : kFocalQuantities) {
    std::vector<double> x, y;
    for (const auto& summary : summaries) {
      if (!summary.c3) continue;
      if (auto value = summary_value(summary, quantity)) {
        x.push_back(*value);
        y.push_back(static_cast<double>(*summary.c3));
      }
    }
    try {
      const auto result = stats::spearman(x, y);
      writer.row({std::string(summary_quantity_name(quantity)), csv::fmt(result.estimate),
                  csv::fmt(result.p_value), result.stars, std::to_string(result.n)});
    } catch (const PipelineError& e) {
      std::cerr << "fig5: skipping " << summary_quantity_name(quantity) << ": " << e.what()
                << "\n";
    }
  }
}

void emit_fig5_extreme_groups(
    const std::vector<PaperSummary>& summaries,
    const std::map<std::string, std::vector<CommentResponsePair>>& pairs_by_paper,
    const AnalysisToggles& toggles, const std::filesystem::path& out) {
  csv::Writer writer(out / "fig5_extreme_groups.csv");
  writer.header({"focal_metric", "stratum_type", "type", "diff_c3", "p", "stars", "n_top",
                 "n_bottom"});

  std::map<std::string, double> c3_outcome;
  std::map<std::string, std::string> year_of;
  for (const auto& summary : summaries) {
    if (!summary.c3) continue;
    c3_outcome[summary.paper_id] = static_cast<double>(*summary.c3);
    year_of[summary.paper_id] = std::to_string(summary.year);
  }

  auto emit_rows = [&](const std::string& focal_name, const std::string& stratum_kind,
                       const std::string& type_name,
                       const std::map<std::string, double>& values) {
    if (values.empty()) return;
    std::map<std::string, std::string> strata;
    for (const auto& [paper, value] : values) strata[paper] = year_of.at(paper);
    stats::TailSelection tails;
    try {
      tails = stats::stratified_tails(values, strata, toggles.tail_pct);
    } catch (const PipelineError&) {
      return;
    }
    if (tails.top.empty() || tails.bottom.empty()) return;
    const auto result = stats::extreme_group_diff(tails.top, tails.bottom, c3_outcome);
    writer.row({focal_name, stratum_kind, type_name, csv::fmt(result.diff),
                csv::fmt(result.p_value), stats::stars(result.p_value),
                std::to_string(result.n_top), std::to_string(result.n_bottom)});
  };

  for (OpinionType type : kAllOpinionTypes) {
    std::map<std::string, double> values;
    for (const auto& [paper, pairs] : pairs_by_paper) {
      if (!c3_outcome.count(paper)) continue;
      try {
        values[paper] = stats::per_type_paper_score(pairs, type, Metric::OpinionStrength);
      } catch (const PipelineError&) {
      }
    }
    emit_rows("opinion_strength", "opinion_type", std::string(opinion_type_name(type)), values);
  }
  for (ResponseType type : kAllResponseTypes) {
    std::map<std::string, double> values;
    for (const auto& [paper, pairs] : pairs_by_paper) {
      if (!c3_outcome.count(paper)) continue;
      try {
        values[paper] = stats::per_type_paper_score(pairs, type, Metric::RevisionCost);
      } catch (const PipelineError&) {
      }
    }
    emit_rows("revision_cost", "response_type", std::string(response_type_name(type)), values);
  }
}

struct OlsSampleRow {
  double outcome = 0;
  double focal = 0;
  std::array<double, 6> controls{};
  int year = 0;
};

std::optional<stats::OlsFit> fit_ols_rows(const std::vector<OlsSampleRow>& rows,
                                          const std::string& focal_name) {
  if (rows.size() < 12) return std::nullopt;
  std::vector<double> outcome, focal;
  std::vector<stats::NamedColumn> controls(6);
  const char* control_names[6] = {"team_size",          "institution_count",
                                  "avg_career_age_decile", "max_career_age_decile",
                                  "n_rounds",           "n_reviewers"};
  for (int c = 0; c < 6; ++c) controls[c].name = control_names[c];
  std::vector<int> years;
  for (const auto& row : rows) {
    outcome.push_back(row.outcome);
    focal.push_back(row.focal);
    for (int c = 0; c < 6; ++c) controls[c].values.push_back(row.controls[c]);
    years.push_back(row.year);
  }
  try {
    return stats::ols_fit(outcome, {focal_name, focal}, controls, years);
  } catch (const PipelineError&) {
    return std::nullopt;
  }
}

std::optional<OlsSampleRow> ols_base_row(const PaperSummary& summary) {
  if (!summary.c3 || !summary.team || !summary.team->avg_career_age_decile ||
      !summary.team->max_career_age_decile) {
    return std::nullopt;
  }
  OlsSampleRow row;
  row.outcome = stats::log1p_outcome(*summary.c3);
  row.controls = {static_cast<double>(summary.team->team_size),
                  static_cast<double>(summary.team->institution_count),
                  static_cast<double>(*summary.team->avg_career_age_decile),
                  static_cast<double>(*summary.team->max_career_age_decile),
                  static_cast<double>(summary.n_rounds),
                  static_cast<double>(summary.n_reviewers)};
  row.year = summary.year;
  return row;
}

void emit_si_ols_overall(const std::vector<PaperSummary>& summaries,
                         const std::filesystem::path& out) {
  csv::Writer writer(out / "si_ols_overall.csv");
  writer.header({"metric", "coef", "stars", "se", "p", "n", "r_squared"});
  for (SummaryQuantity quantity : kFocalQuantities) {
    const std::string name(summary_quantity_name(quantity));
    std::vector<OlsSampleRow> rows;
    for (const auto& summary : summaries) {
      auto row = ols_base_row(summary);
      const auto focal = summary_value(summary, quantity);
      if (!row || !focal) continue;
      row->focal = *focal;
      rows.push_back(*row);
    }
    const auto fit = fit_ols_rows(rows, name);
    if (!fit || !fit->coef.count(name)) {
      std::cerr << "si_ols_overall: skipping " << name << " (insufficient sample)\n";
      continue;
    }
    writer.row({name, csv::fmt(fit->coef.at(name), 4), fit->stars_for(name),
                csv::fmt(fit->std_err.at(name), 4), csv::fmt(fit->p_value.at(name)),
                std::to_string(fit->n), csv::fmt(fit->r_squared, 4)});
  }
}

void emit_si_ols_by_type(
    const std::vector<PaperSummary>& summaries,
    const std::map<std::string, std::vector<CommentResponsePair>>& pairs_by_paper,
    const std::filesystem::path& out) {
  csv::Writer writer(out / "si_ols_by_type.csv");
  writer.header({"focal_metric", "type", "coef", "stars", "se", "p", "n"});

  auto emit = [&](Metric metric, const std::string& type_name, auto score_of) {
    const std::string focal_name(metric_name(metric));
    std::vector<OlsSampleRow> rows;
    for (const auto& summary : summaries) {
      auto row = ols_base_row(summary);
      if (!row) continue;
      auto it = pairs_by_paper.find(summary.paper_id);
      if (it == pairs_by_paper.end()) continue;
      std::optional<double> focal;
      try {
        focal = score_of(it->second);
      } catch (const PipelineError&) {
        continue;
      }
      row->focal = *focal;
      rows.push_back(*row);
    }
    const auto fit = fit_ols_rows(rows, focal_name);
    if (!fit || !fit->coef.count(focal_name)) return;
    writer.row({focal_name, type_name, csv::fmt(fit->coef.at(focal_name), 4),
                fit->stars_for(focal_name), csv::fmt(fit->std_err.at(focal_name), 4),
                csv::fmt(fit->p_value.at(focal_name)), std::to_string(fit->n)});
  };

  for (Metric metric :
       {Metric::OpinionStrength, Metric::Constructiveness, Metric::CommentQuality}) {
    for (OpinionType type : kAllOpinionTypes) {
      if (type == OpinionType::Accept) continue;
      emit(metric, std::string(opinion_type_name(type)),
           [type, metric](const std::vector<CommentResponsePair>& pairs) {
             return stats::per_type_paper_score(pairs, type, metric);
           });
    }
  }
  for (ResponseType type : kAllResponseTypes) {
    emit(Metric::RevisionCost, std::string(response_type_name(type)),
         [type](const std::vector<CommentResponsePair>& pairs) {
           return stats::per_type_paper_score(pairs, type, Metric::RevisionCost);
         });
  }
}

void emit_fig6_fields(const std::vector<PaperSummary>& summaries,
                      const std::filesystem::path& out) {
  csv::Writer writer(out / "fig6_fields.csv");
  writer.header({"field", "n_papers", "mean_c3", "mean_rounds", "mean_s", "mean_c", "mean_q",
                 "mean_r", "persuasion_rate", "rebuttal_rate"});
  std::set<std::string> fields;
  for (const auto& summary : summaries) {
    if (summary.field) fields.insert(*summary.field);
  }
  for (const auto& field : fields) {
    size_t n = 0;
    for (const auto& summary : summaries) {
      if (summary.field && *summary.field == field) ++n;
    }
    auto mean_for = [&](SummaryQuantity quantity) -> std::string {
      try {
        return csv::fmt(field_mean(summaries, field, quantity));
      } catch (const PipelineError&) {
        return "";
      }
    };
    writer.row({field, std::to_string(n), mean_for(SummaryQuantity::C3),
                mean_for(SummaryQuantity::NRounds), mean_for(SummaryQuantity::MeanS),
                mean_for(SummaryQuantity::MeanC), mean_for(SummaryQuantity::MeanQ),
                mean_for(SummaryQuantity::MeanR), mean_for(SummaryQuantity::PersuasionRate),
                mean_for(SummaryQuantity::RebuttalRate)});
  }
}

void emit_sifig3_highlow(const std::vector<PaperSummary>& summaries,
                         const AnalysisToggles& toggles, const std::filesystem::path& out) {
  std::map<std::string, double> c3_values;
  std::map<std::string, std::string> strata;
  std::map<std::string, const PaperSummary*> by_id;
  for (const auto& summary : summaries) {
    if (!summary.c3) continue;
    c3_values[summary.paper_id] = static_cast<double>(*summary.c3);
    strata[summary.paper_id] =
        toggles.within_year_c3_tails ? std::to_string(summary.year) : "pooled";
    by_id[summary.paper_id] = &summary;
  }
  if (c3_values.empty()) return;
  stats::TailSelection tails;
  try {
    tails = stats::stratified_tails(c3_values, strata, toggles.c3_tail_pct);
  } catch (const PipelineError&) {
    return;
  }
  if (tails.top.empty() || tails.bottom.empty()) return;

  csv::Writer writer(out / "sifig3_highlow.csv");
  writer.header({"metric", "mean_top", "mean_bottom", "diff", "p", "stars", "n_top", "n_bottom"});
  for (SummaryQuantity quantity : kFocalQuantities) {
    std::map<std::string, double> outcome;
    for (const auto& [paper, summary] : by_id) {
      if (auto value = summary_value(*summary, quantity)) outcome[paper] = *value;
    }
    std::set<std::string> top, bottom;
    for (const auto& paper : tails.top) {
      if (outcome.count(paper)) top.insert(paper);
    }
    for (const auto& paper : tails.bottom) {
      if (outcome.count(paper)) bottom.insert(paper);
    }
    if (top.empty() || bottom.empty()) continue;
    const auto result = stats::extreme_group_diff(top, bottom, outcome);
    double top_mean = 0, bottom_mean = 0;
    for (const auto& paper : top) top_mean += outcome.at(paper);
    for (const auto& paper : bottom) bottom_mean += outcome.at(paper);
    top_mean /= static_cast<double>(top.size());
    bottom_mean /= static_cast<double>(bottom.size());
    writer.row({std::string(summary_quantity_name(quantity)), csv::fmt(top_mean),
                csv::fmt(bottom_mean), csv::fmt(result.diff), csv::fmt(result.p_value),
                stats::stars(result.p_value), std::to_string(result.n_top),
                std::to_string(result.n_bottom)});
  }
}

void emit_sifig4_yearly(const std::vector<PaperSummary>& summaries,
                        const std::filesystem::path& out) {
  csv::Writer writer(out / "sifig4_yearly.csv");
  writer.header({"year", "metric", "rho", "p", "stars", "n"});
  std::set<int> years;
  for (const auto& summary : summaries) {
    if (summary.c3) years.insert(summary.year);
  }
  for (int year : years) {
    for (SummaryQuantity quantity : kFocalQuantities) {
      std::vector<double> x, y;
      for (const auto& summary : summaries) {
        if (summary.year != year || !summary.c3) continue;
        if (auto value = summary_value(summary, quantity)) {
          x.push_back(*value);
          y.push_back(static_cast<double>(*summary.c3));
        }
      }
      try {
        const auto result = stats::spearman(x, y);
        writer.row({std::to_string(year), std::string(summary_quantity_name(quantity)),
                    csv::fmt(result.estimate), csv::fmt(result.p_value), result.stars,
                    std::to_string(result.n)});
      } catch (const PipelineError&) {
        // year too small or degenerate: row omitted
      }
    }
  }
}

}  // namespace

std::string ols_report_prefix(const std::string& metric, double coef, double p) {
  return metric + "," + csv::fmt(coef, 4) + "," + stats::stars(p);
}

// ---------------------------------------------------------------------------
// subcommands

int run_extract(const RunConfig& config) {
  check_toggles(config.toggles);
  std::filesystem::create_directories(config.out_dir);
  const Corpus corpus = load_corpus(config);
  auto backend = make_backend(config);

  std::vector<AuditRecord> audit;
  const auto results = extract_corpus(corpus, *backend, config.http, config.jobs, &audit);

  std::vector<CommentResponsePair> pairs;
  for (const auto& result : results) {
    pairs.insert(pairs.end(), result.pairs.begin(), result.pairs.end());
  }
  write_pairs_jsonl(pairs, config.out_dir / "pairs.jsonl");
  write_audit_jsonl(audit, config.out_dir / "audit.jsonl");

  ordered_json meta;
  meta["prompt_version"] = kPromptVersion;
  meta["backend"] = backend->name();
  meta["model"] = config.http.model_name;
  meta["temperature"] = config.http.temperature;
  meta["n_papers"] = corpus.documents.size();
  meta["n_pairs"] = pairs.size();
  {
    std::ofstream out(config.out_dir / "extraction_meta.json", std::ios::binary);
    out << meta.dump(2) << "\n";
  }
  write_run_meta(config, "extract");
  return 0;
}

namespace {

std::vector<CommentResponsePair> load_pairs(const RunConfig& config) {
  if (config.pairs_files.empty()) {
    throw PipelineError(ErrorKind::MissingFile, "no --pairs file given");
  }
  auto pairs = read_pairs_jsonl(config.pairs_files.front());
  if (pairs.empty()) {
    throw PipelineError(ErrorKind::EmptyCorpus,
                        "no pairs in " + config.pairs_files.front().string());
  }
  return pairs;
}

}  // namespace

int run_analyze(const RunConfig& config) {
  check_toggles(config.toggles);
  std::filesystem::create_directories(config.out_dir);
  const Corpus corpus = load_corpus(config);
  const auto pairs = load_pairs(config);
  const auto options = metrics_options(config);
  const auto summaries = summarize_corpus(corpus, pairs, options);
  if (summaries.empty()) {
    throw PipelineError(ErrorKind::EmptyCorpus, "no paper has both a document and pairs");
  }
  const auto pairs_by_paper = group_pairs_by_paper(pairs);

  write_paper_summaries_csv(summaries, config.out_dir / "paper_summaries.csv");
  emit_fig2_rounds(pairs, options, config.out_dir);
  emit_fig2_types(pairs, config.out_dir);
  emit_fig3_responses(pairs, config.out_dir);
  emit_table1_team(summaries, config.out_dir);
  emit_fig6_fields(summaries, config.out_dir);

  const bool have_impact = std::any_of(summaries.begin(), summaries.end(),
                                       [](const auto& s) { return s.c3.has_value(); });
  if (have_impact) {
    emit_fig5_correlations(summaries, config.out_dir);
    emit_fig5_extreme_groups(summaries, pairs_by_paper, config.toggles, config.out_dir);
    emit_si_ols_overall(summaries, config.out_dir);
    emit_si_ols_by_type(summaries, pairs_by_paper, config.out_dir);
    emit_sifig3_highlow(summaries, config.toggles, config.out_dir);
    emit_sifig4_yearly(summaries, config.out_dir);
  } else {
    std::cerr << "warning: no impact data; fig5/si_ols/sifig3/sifig4 skipped\n";
  }
  write_run_meta(config, "analyze");
  return 0;
}

int run_consensus(const RunConfig& config) {
  check_toggles(config.toggles);
  std::filesystem::create_directories(config.out_dir);
  const Corpus corpus = load_corpus(config);
  const auto pairs = load_pairs(config);
  const auto summaries = summarize_corpus(corpus, pairs, metrics_options(config));
  const auto tables = consensus_tables(summaries, group_pairs_by_paper(pairs),
                                       GroupSplit::MedianOpinionStrength,
                                       config.toggles.consensus_threshold);
  write_fig4_csvs(tables, config.out_dir);
  write_run_meta(config, "consensus");
  return 0;
}

int run_validate(const RunConfig& config) {
  check_toggles(config.toggles);
  std::filesystem::create_directories(config.out_dir);
  if (config.pairs_files.empty()) {
    throw PipelineError(ErrorKind::MissingFile, "validate needs at least one --pairs file");
  }
  const Corpus corpus = load_corpus(config);

  std::map<std::string, std::vector<PaperSummary>> runs;
  std::map<std::string, std::vector<CommentResponsePair>> run_pairs;
  std::vector<std::string> labels;
  for (const auto& path : config.pairs_files) {
    std::string label = path.stem().string();
    while (runs.count(label)) label += "+";
    const auto pairs = read_pairs_jsonl(path);
    if (pairs.empty()) {
      throw PipelineError(ErrorKind::EmptyCorpus, "no pairs in " + path.string());
    }
    runs[label] = summarize_corpus(corpus, pairs, metrics_options(config));
    run_pairs[label] = pairs;
    labels.push_back(label);
  }

  // fig1d/e: keyword prevalence on the first run.
  {
    csv::Writer writer(config.out_dir / "fig1de_keywords.csv");
    writer.header({"metric", "tail_pct", "top_prevalence", "bottom_prevalence", "ratio",
                   "n_tail"});
    for (Metric metric : kAllMetrics) {
      try {
        const auto prevalence = keyword_prevalence(run_pairs[labels.front()],
                                                   KeywordRuleSet::builtin(), metric,
                                                   config.toggles.tail_pct);
        writer.row({std::string(metric_name(metric)), csv::fmt(config.toggles.tail_pct, 2),
                    csv::fmt(prevalence.top), csv::fmt(prevalence.bottom),
                    prevalence.bottom > 0 ? csv::fmt(prevalence.top / prevalence.bottom) : "",
                    std::to_string(prevalence.tail_size)});
      } catch (const PipelineError& e) {
        std::cerr << "fig1de: skipping " << metric_name(metric) << ": " << e.what() << "\n";
      }
    }
  }

  if (runs.size() >= 2) {
    const auto report = cross_model_agreement(runs);
    csv::Writer writer(config.out_dir / "fig1c_crossmodel.csv");
    writer.header({"quantity", "model_a", "model_b", "pearson_r"});
    for (SummaryQuantity quantity : kCrossModelQuantities) {
      for (const auto& entry : report.matrices.at(quantity)) {
        writer.row({std::string(summary_quantity_name(quantity)), entry.model_a, entry.model_b,
                    csv::fmt_opt(entry.pearson_r, 12)});
      }
      writer.row({std::string(summary_quantity_name(quantity)), "mean_pairwise", "",
                  csv::fmt_opt(report.mean_pairwise.at(quantity), 12)});
    }

    csv::Writer agreement(config.out_dir / "fig1f_agreement.csv");
    agreement.header({"metric", "run_a", "run_b", "k", "accuracy"});
    const auto& reference_summaries = runs.at(labels.front());
    const int k = config.highlow_k > 0
                      ? config.highlow_k
                      : std::max(1, static_cast<int>(reference_summaries.size() / 10));
    for (Metric metric : kAllMetrics) {
      HighLowTasks reference;
      try {
        reference = highlow_tasks(reference_summaries, metric, k);
      } catch (const PipelineError& e) {
        std::cerr << "fig1f: skipping " << metric_name(metric) << ": " << e.what() << "\n";
        continue;
      }
      for (size_t i = 1; i < labels.size(); ++i) {
        const auto other = highlow_tasks(runs.at(labels[i]), metric, k);
        agreement.row({std::string(metric_name(metric)), labels.front(), labels[i],
                       std::to_string(k),
                       csv::fmt(agreement_accuracy(reference, other))});
      }
    }
  } else {
    std::cerr << "warning: single run; fig1c/fig1f need >= 2 pairs files\n";
  }
  write_run_meta(config, "validate");
  return 0;
}

int run_synth(const RunConfig& config, const PlantedTruth& truth, int n_papers) {
  std::filesystem::create_directories(config.out_dir);
  const auto synthetic = generate_synthetic_corpus(truth, n_papers);

  save_manifest(synthetic.corpus, config.out_dir / "corpus.json");
  write_pairs_jsonl(synthetic.pairs, config.out_dir / "pairs.jsonl");
  {
    csv::Writer writer(config.out_dir / "impact.csv");
    writer.header({"doi", "c3"});
    for (const auto& doc : synthetic.corpus.documents) {
      auto it = synthetic.corpus.impact.find(doc.paper_id);
      if (doc.doi && it != synthetic.corpus.impact.end()) {
        writer.row({*doc.doi, std::to_string(it->second)});
      }
    }
  }
  {
    std::ofstream out(config.out_dir / "truth.json", std::ios::binary);
    out << synthetic.ground_truth_json;
  }
  write_run_meta(config, "synth");
  return 0;
}

int run_report(RunConfig config) {
  check_toggles(config.toggles);
  std::filesystem::create_directories(config.out_dir);
  if (config.pairs_files.empty()) {
    run_extract(config);
    config.pairs_files = {config.out_dir / "pairs.jsonl"};
  }
  run_analyze(config);
  run_consensus(config);
  run_validate(config);
  write_run_meta(config, "report");
  return 0;
}

}  // namespace revpipe
