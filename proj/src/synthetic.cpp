#include "revpipe/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "revpipe/error.hpp"
#include "revpipe/random.hpp"

namespace revpipe {

namespace {

using nlohmann::ordered_json;

constexpr double kPi = 3.14159265358979323846;

constexpr const char* kFields[] = {"physics",     "chemistry", "biology",
                                   "medicine",    "engineering", "economics",
                                   "sociology",   "geology"};

// Topic bank kept free of every validation keyword pattern so base texts
// never hit the keyword tables by accident.
constexpr const char* kTopics[] = {
    "the theoretical setup",      "the estimation strategy",
    "the presentation of results", "the comparison with earlier studies",
    "the notation in section two", "the figure captions",
    "the treatment of outliers",   "the description of the cohort",
    "the derivation in the appendix", "the literature positioning",
};

constexpr const char* kAspects[] = {
    "a tighter argument", "a clearer exposition",   "a fuller justification",
    "a broader comparison", "a more careful reading", "a cleaner layout",
};

std::string response_sentence(ResponseType type) {
  switch (type) {
    case ResponseType::AcceptRevise:
      return "We agree and revised the relevant passage accordingly.";
    case ResponseType::ClarifyMisunderstanding:
      return "This material was already present in the submitted version; we now point to it "
             "explicitly.";
    case ResponseType::RebutDisagree:
      return "We respectfully disagree with this reading and keep our original analysis.";
    case ResponseType::PartiallyAccept:
      return "We partly agree and adjusted one half of the passage while keeping the rest.";
    case ResponseType::PromiseFutureWork:
      return "A full treatment of this point is beyond the scope of the present study.";
  }
  return "We revised the passage.";
}

std::string injection_sentence(Metric metric) {
  switch (metric) {
    case Metric::OpinionStrength:
      return "In its current form this is a serious concern.";
    case Metric::Constructiveness:
      return "It would be helpful to report the exact settings used.";
    case Metric::CommentQuality:
      return "A discussion of the underlying mechanism is needed.";
    case Metric::RevisionCost:
      return "We collected new data to settle this point.";
  }
  return "";
}

int clamp_score(double value) {
  return std::clamp(static_cast<int>(std::lround(value)), 1, 10);
}

OpinionType draw_opinion_type(Rng& rng) {
  const double u = rng.uniform();
  double acc = 0;
  const std::pair<OpinionType, double> weights[] = {
      {OpinionType::Presentation, 0.26},         {OpinionType::Methodology, 0.18},
      {OpinionType::AnalysisInterpretation, 0.15}, {OpinionType::Conceptual, 0.10},
      {OpinionType::Logic, 0.08},                {OpinionType::NoveltyContribution, 0.08},
      {OpinionType::Scope, 0.06},                {OpinionType::RecommendReference, 0.05},
      {OpinionType::Accept, 0.04},
  };
  for (const auto& [type, w] : weights) {
    acc += w;
    if (u < acc) return type;
  }
  return OpinionType::Presentation;
}

ResponseType draw_response_type(Rng& rng, double rebut_prob) {
  const double u = rng.uniform();
  if (u < rebut_prob) return ResponseType::RebutDisagree;
  const double v = (u - rebut_prob) / std::max(1e-12, 1.0 - rebut_prob);
  if (v < 0.14) return ResponseType::ClarifyMisunderstanding;
  if (v < 0.26) return ResponseType::PartiallyAccept;
  if (v < 0.33) return ResponseType::PromiseFutureWork;
  return ResponseType::AcceptRevise;
}

void validate_truth(const PlantedTruth& truth, int n_papers) {
  auto bad = [&](const std::string& what) {
    throw PipelineError(ErrorKind::InvalidTruthConfig, what);
  };
  if (n_papers < 10) bad("n_papers must be >= 10");
  if (truth.round_means.empty()) bad("round_means must be non-empty");
  for (double m : truth.round_means) {
    if (m < 1.0 || m > 10.0) bad("round means must lie in [1,10]");
  }
  for (double p : {truth.dissenter_prob_low, truth.dissenter_prob_high, truth.inject_high,
                   truth.inject_low}) {
    if (p < 0.0 || p > 1.0) bad("probabilities must lie in [0,1]");
  }
  if (!(std::fabs(truth.target_rho) < 1.0)) bad("|target_rho| must be < 1");
  if (truth.inject_tail_pct <= 0.0 || truth.inject_tail_pct >= 0.5) {
    bad("inject_tail_pct must lie in (0, 0.5)");
  }
}

struct PaperPlan {
  std::string paper_id;
  bool high_group = false;
  bool planted_dissenter = false;
  bool planted_no_consensus = false;
  int dissenter_reviewer = 0;
  bool dissenter_harsh = false;
  double z1 = 0, z2 = 0;
  long long c3 = 0;
};

}  // namespace

SyntheticCorpus generate_synthetic_corpus(const PlantedTruth& truth, int n_papers) {
  validate_truth(truth, n_papers);

  // Spearman -> latent Pearson for a bivariate Gaussian copula.
  const double rho_latent = 2.0 * std::sin(kPi * truth.target_rho / 6.0);

  SyntheticCorpus out;
  std::vector<PaperPlan> plans;

  for (int i = 0; i < n_papers; ++i) {
    Rng rng(splitmix64(truth.seed ^ static_cast<std::uint64_t>(i)));

    PaperPlan plan;
    char id[16];
    std::snprintf(id, sizeof(id), "S%05d", i + 1);
    plan.paper_id = id;
    plan.high_group = rng.bernoulli(0.5);
    plan.z1 = rng.normal();
    const double w = rng.normal();
    plan.z2 = rho_latent * plan.z1 + std::sqrt(1.0 - rho_latent * rho_latent) * w;
    plan.c3 = static_cast<long long>(std::floor(std::exp(2.5 + 0.9 * plan.z2)));
    if (plan.c3 < 0) plan.c3 = 0;

    const double dissenter_prob =
        plan.high_group ? truth.dissenter_prob_high : truth.dissenter_prob_low;
    plan.planted_dissenter = rng.bernoulli(dissenter_prob);
    if (plan.planted_dissenter) {
      plan.dissenter_reviewer = static_cast<int>(rng.uniform_int(0, 2));
      plan.dissenter_harsh = rng.bernoulli(0.5);
    } else {
      plan.planted_no_consensus = rng.bernoulli(0.05);
    }

    CorrespondenceDocument doc;
    doc.paper_id = plan.paper_id;
    doc.doi = "10.9999/synth." + std::to_string(i + 1);
    doc.year = 2017 + i % 8;
    doc.field = kFields[i % std::size(kFields)];

    const int max_rounds = static_cast<int>(truth.round_means.size());
    const int n_rounds = std::min(max_rounds, 2 + (rng.bernoulli(0.35) ? 1 : 0));

    const double s_base = (plan.high_group ? 6.5 : 4.0) + 0.35 * rng.normal();
    const double c_base = 5.5 + 0.7 * rng.normal();
    const double q_base = 5.5 + 0.7 * rng.normal();
    const double r_base = 5.5 + 1.6 * plan.z1;

    // Reviewer-level opinion-strength offsets implementing the planted
    // consensus configuration among the three first-round reviewers.
    double reviewer_offset[3];
    for (int rv = 0; rv < 3; ++rv) reviewer_offset[rv] = 0.25 * rng.normal();
    if (plan.planted_dissenter) {
      const double magnitude = 2.5 + 0.5 * std::fabs(rng.normal());
      reviewer_offset[plan.dissenter_reviewer] +=
          plan.dissenter_harsh ? magnitude : -magnitude;
    } else if (plan.planted_no_consensus) {
      reviewer_offset[0] -= 1.7;
      reviewer_offset[2] += 1.7;
    }

    const bool last_letter_empty = rng.bernoulli(0.25);
    const double rebut_prob = 0.10 + (plan.planted_dissenter ? 0.15 : 0.0) +
                              (plan.high_group ? 0.05 : 0.0);

    std::vector<CommentResponsePair> paper_pairs;
    for (int round = 1; round <= n_rounds; ++round) {
      const double round_offset = truth.round_means[round - 1] - truth.round_means[0];
      const int n_reviewers = round == 1 ? 3 : (round == 2 ? 1 + (rng.bernoulli(0.5) ? 1 : 0) : 1);
      const bool letter_present = !(round == n_rounds && last_letter_empty);

      ReviewRound review_round;
      review_round.index = round;

      std::vector<std::string> letter_parts;
      for (int rv = 0; rv < n_reviewers; ++rv) {
        const std::string reviewer_id = "R" + std::to_string(rv + 1);
        const int n_points = 2 + static_cast<int>(rng.uniform_int(0, 2));
        std::vector<std::string> comment_parts;

        for (int p = 0; p < n_points; ++p) {
          CommentResponsePair pair;
          pair.paper_id = plan.paper_id;
          pair.round = round;
          pair.reviewer_id = reviewer_id;
          pair.comment_index = p + 1;

          const char* topic = kTopics[rng.uniform_int(0, std::size(kTopics) - 1)];
          const char* aspect = kAspects[rng.uniform_int(0, std::size(kAspects) - 1)];
          pair.comment_text = std::string("The section on ") + topic +
                              " would benefit from " + aspect + ".";

          const double rv_offset = round == 1 && rv < 3 ? reviewer_offset[rv] : 0.0;
          pair.s = clamp_score(s_base + rv_offset + round_offset + 0.55 * rng.normal());
          pair.c = clamp_score(c_base + round_offset + 0.55 * rng.normal());
          pair.q = clamp_score(q_base + round_offset + 0.55 * rng.normal());
          pair.r = clamp_score(r_base + round_offset + 0.5 * rng.normal());
          pair.opinion_type = draw_opinion_type(rng);
          if (letter_present) {
            pair.response_type = draw_response_type(rng, rebut_prob);
            pair.response_text = response_sentence(*pair.response_type);
          }
          pair.persuaded = round < n_rounds ? (rng.bernoulli(0.85) ? 1 : 0) : 1;
          paper_pairs.push_back(std::move(pair));
          comment_parts.push_back(std::to_string(p + 1) + ". " +
                                  paper_pairs.back().comment_text);
        }

        std::string block_text;
        for (size_t part = 0; part < comment_parts.size(); ++part) {
          if (part) block_text += "\n\n";
          block_text += comment_parts[part];
        }
        review_round.reviewer_blocks.push_back({reviewer_id, block_text});
      }
      doc.rounds.push_back(std::move(review_round));
    }

    out.corpus.documents.push_back(std::move(doc));
    out.corpus.impact[plan.paper_id] = plan.c3;

    TeamAttributes team;
    team.team_size = 2 + static_cast<int>(rng.uniform_int(0, 8));
    team.institution_count =
        1 + static_cast<int>(rng.uniform_int(0, std::min(team.team_size - 1, 3)));
    const int avg_decile = 1 + static_cast<int>(rng.uniform_int(0, 8));
    team.avg_career_age_decile = avg_decile;
    team.max_career_age_decile = avg_decile + static_cast<int>(rng.uniform_int(0, 10 - avg_decile));
    out.corpus.team[plan.paper_id] = team;

    out.pairs.insert(out.pairs.end(), paper_pairs.begin(), paper_pairs.end());
    plans.push_back(std::move(plan));
  }

  // Tail-conditional keyword injection, ranked exactly like the prevalence
  // check: (paper mean, paper_id) ascending, k lowest and k highest.
  std::map<std::string, std::map<Metric, bool>> injected;
  const size_t k = std::max<size_t>(
      1, static_cast<size_t>(std::floor(truth.inject_tail_pct * static_cast<double>(n_papers))));
  if (truth.inject_high > 0.0 || truth.inject_low > 0.0) {
    std::map<std::string, std::vector<CommentResponsePair*>> by_paper;
    for (auto& pair : out.pairs) by_paper[pair.paper_id].push_back(&pair);

    for (Metric metric : kAllMetrics) {
      std::vector<std::pair<double, std::string>> ranked;
      for (const auto& [paper_id, pairs] : by_paper) {
        double sum = 0;
        for (const auto* pair : pairs) sum += pair->score(metric);
        ranked.push_back({sum / static_cast<double>(pairs.size()), paper_id});
      }
      std::sort(ranked.begin(), ranked.end());

      auto inject = [&](const std::string& paper_id, double prob, std::uint64_t salt) {
        Rng rng(splitmix64(truth.seed ^ fnv1a(paper_id) ^ salt ^
                           (static_cast<std::uint64_t>(metric) << 40)));
        if (!rng.bernoulli(prob)) return;
        auto& pairs = by_paper[paper_id];
        if (metric == Metric::RevisionCost) {
          for (auto* pair : pairs) {
            if (pair->response_text) {
              *pair->response_text += " " + injection_sentence(metric);
              injected[paper_id][metric] = true;
              return;
            }
          }
          return;  // no responses to carry the keyword
        }
        pairs.front()->comment_text += " " + injection_sentence(metric);
        injected[paper_id][metric] = true;
      };

      for (size_t i = 0; i < k; ++i) {
        inject(ranked[i].second, truth.inject_low, 0xB07ULL);
        inject(ranked[ranked.size() - 1 - i].second, truth.inject_high, 0x701ULL);
      }
    }

    // Rebuild document block texts so they match the injected pair texts.
    for (auto& doc : out.corpus.documents) {
      const auto& pairs = by_paper[doc.paper_id];
      for (auto& round : doc.rounds) {
        for (auto& block : round.reviewer_blocks) {
          std::string text;
          int index = 0;
          for (const auto* pair : pairs) {
            if (pair->round != round.index || pair->reviewer_id != block.reviewer_id) continue;
            if (index) text += "\n\n";
            text += std::to_string(pair->comment_index) + ". " + pair->comment_text;
            ++index;
          }
          block.comment_text = text;
        }
      }
    }
  }

  // Author letters echo the numbered points so the mock extractor can align.
  {
    std::map<std::string, std::vector<const CommentResponsePair*>> by_paper;
    for (const auto& pair : out.pairs) by_paper[pair.paper_id].push_back(&pair);
    for (auto& doc : out.corpus.documents) {
      for (auto& round : doc.rounds) {
        std::string letter;
        for (const auto* pair : by_paper[doc.paper_id]) {
          if (pair->round != round.index || !pair->response_text) continue;
          if (!letter.empty()) letter += "\n\n";
          letter += "Response to " + pair->reviewer_id + ", point " +
                    std::to_string(pair->comment_index) + ": " + *pair->response_text;
        }
        round.author_response_text = letter;
      }
    }
  }

  std::sort(out.pairs.begin(), out.pairs.end(), pair_order);
  validate_corpus(out.corpus);

  ordered_json truth_json;
  truth_json["seed"] = truth.seed;
  truth_json["n_papers"] = n_papers;
  truth_json["round_means"] = truth.round_means;
  truth_json["dissenter_prob_low"] = truth.dissenter_prob_low;
  truth_json["dissenter_prob_high"] = truth.dissenter_prob_high;
  truth_json["target_rho"] = truth.target_rho;
  truth_json["latent_pearson"] = rho_latent;
  truth_json["inject_high"] = truth.inject_high;
  truth_json["inject_low"] = truth.inject_low;
  truth_json["inject_tail_pct"] = truth.inject_tail_pct;
  ordered_json papers = ordered_json::array();
  for (const auto& plan : plans) {
    ordered_json pj;
    pj["paper_id"] = plan.paper_id;
    pj["group"] = plan.high_group ? "high" : "low";
    pj["planted_dissenter"] = plan.planted_dissenter;
    if (plan.planted_dissenter) {
      pj["dissenter_reviewer"] = "R" + std::to_string(plan.dissenter_reviewer + 1);
      pj["dissenter_polarity"] = plan.dissenter_harsh ? "harsh" : "supportive";
    }
    pj["planted_no_consensus"] = plan.planted_no_consensus;
    pj["z1"] = plan.z1;
    pj["z2"] = plan.z2;
    pj["c3"] = plan.c3;
    if (auto it = injected.find(plan.paper_id); it != injected.end()) {
      ordered_json ij;
      for (const auto& [metric, flag] : it->second) {
        ij[std::string(metric_name(metric))] = flag;
      }
      pj["injected"] = std::move(ij);
    }
    papers.push_back(std::move(pj));
  }
  truth_json["papers"] = std::move(papers);
  out.ground_truth_json = truth_json.dump(2) + "\n";
  return out;
}

}  // namespace revpipe
