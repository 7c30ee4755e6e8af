#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "revpipe/error.hpp"
#include "revpipe/report.hpp"

using namespace revpipe;

int main(int argc, char** argv) {
  CLI::App app{"Peer-review correspondence analysis pipeline"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat key=value config file; command-line flags win");

  RunConfig config;
  PlantedTruth truth;
  int n_papers = 100;

  // Options live on the main app so flat config-file keys resolve against
  // them; subcommands fall through.
  app.add_option("--corpus", config.corpus_path, "Corpus manifest JSON");
  app.add_option("--impact", config.impact_path, "Impact CSV (doi,c3) joined before analysis");
  app.add_option("--out", config.out_dir, "Output directory")->required();
  app.add_option("--pairs", config.pairs_files, "pairs.jsonl file (repeatable for validate)");
  app.add_option("--seed", config.seed, "Deterministic seed");
  app.add_option("--tail-pct", config.toggles.tail_pct, "Extreme-group tail share");
  app.add_option("--c3-tail-pct", config.toggles.c3_tail_pct, "C3 high/low tail share");
  app.add_option("--threshold", config.toggles.consensus_threshold, "Consensus threshold");
  app.add_flag("--exclude-accept", config.toggles.exclude_accept,
               "Drop Accept-type pairs from continuous-score means");
  app.add_flag("!--no-within-year-c3-tails", config.toggles.within_year_c3_tails,
               "Pool C3 tails across years instead of within year");
  app.add_option("--jobs", config.jobs, "Concurrent backend calls");
  app.add_option("--highlow-k", config.highlow_k, "Tail size for ranking-agreement tasks");

  app.add_option("--backend", config.backend, "mock | http");
  app.add_option("--endpoint", config.http.endpoint_url, "HTTP backend endpoint URL");
  app.add_option("--model", config.http.model_name, "Model name sent to the backend");
  app.add_option("--api-key-env", config.http.api_key_env,
                 "Environment variable holding the bearer token");
  app.add_option("--max-retries", config.http.max_retries, "Extraction attempts per paper");
  app.add_option("--timeout", config.http.timeout_seconds, "HTTP timeout in seconds");
  app.add_option("--mock-jitter", config.mock_jitter, "Mock score jitter probability");

  app.add_option("--n-papers", n_papers, "synth: number of papers");
  app.add_option("--target-rho", truth.target_rho,
                 "synth: planted Spearman between mean revision cost and C3");
  app.add_option("--round-means", truth.round_means, "synth: per-round target score levels");
  app.add_option("--dissenter-low", truth.dissenter_prob_low,
                 "synth: dissenter probability, low group");
  app.add_option("--dissenter-high", truth.dissenter_prob_high,
                 "synth: dissenter probability, high group");
  app.add_option("--inject-high", truth.inject_high,
                 "synth: keyword injection probability, top tail");
  app.add_option("--inject-low", truth.inject_low,
                 "synth: keyword injection probability, bottom tail");
  app.add_option("--inject-tail-pct", truth.inject_tail_pct, "synth: injection tail share");

  auto* extract = app.add_subcommand("extract", "Extract comment-response pairs");
  auto* analyze = app.add_subcommand("analyze", "Emit figure and table data files");
  auto* consensus = app.add_subcommand("consensus", "Emit reviewer-consensus tables");
  auto* validate = app.add_subcommand("validate", "Cross-model, keyword and ranking checks");
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus with planted structure");
  auto* report = app.add_subcommand("report", "analyze + consensus + validate in one pass");
  for (auto* cmd : {extract, analyze, consensus, validate, synth, report}) {
    cmd->fallthrough();
  }

  CLI11_PARSE(app, argc, argv);

  try {
    truth.seed = config.seed;
    if (!synth->parsed() && config.corpus_path.empty()) {
      throw PipelineError(ErrorKind::MissingFile, "no --corpus given");
    }
    if ((analyze->parsed() || consensus->parsed() || validate->parsed()) &&
        config.pairs_files.empty()) {
      throw PipelineError(ErrorKind::MissingFile, "no --pairs given");
    }
    if (extract->parsed()) return run_extract(config);
    if (analyze->parsed()) return run_analyze(config);
    if (consensus->parsed()) return run_consensus(config);
    if (validate->parsed()) return run_validate(config);
    if (synth->parsed()) return run_synth(config, truth, n_papers);
    if (report->parsed()) return run_report(config);
  } catch (const PipelineError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
