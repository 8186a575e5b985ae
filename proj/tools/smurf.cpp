// smurf: caption evaluation from the command line.

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <thread>

#include "smurf/cli/commands.hpp"

namespace {

void add_common(CLI::App* app, smurf::cli::CommonOptions& o, bool models) {
  app->add_option("--input", o.input, "Input file (JSONL, or text for degrade)")->required();
  app->add_option("--output", o.output, "Output path, '-' for stdout")->capture_default_str();
  app->add_option("--stopwords", o.stopwords, "Stopword list, one word per line");
  app->add_option("--threads", o.threads, "Worker threads")->capture_default_str();
  if (models) {
    app->add_option("--model-dir", o.model_dir, "Directory with grammar/ and style/ bundles");
    app->add_option("--baseline-stats", o.baseline_stats, "Human standardization stats JSON");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Caption evaluation with SPARCS, SPURTS, MIMA and SMURF"};
  app.set_version_flag("--version", smurf::cli::kToolVersion);
  app.require_subcommand(1);
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());

  smurf::cli::ScoreOptions score;
  score.common.threads = hw;
  auto* score_cmd = app.add_subcommand("score", "Score caption records");
  add_common(score_cmd, score.common, true);
  score_cmd->add_option("--metrics", score.metrics, "Comma-separated: sparcs,spurts,mima,smurf")
      ->capture_default_str();

  smurf::cli::StatsOptions stats;
  stats.common.threads = hw;
  auto* stats_cmd = app.add_subcommand("stats", "Compute human baseline statistics");
  add_common(stats_cmd, stats.common, true);
  stats_cmd->add_option("--corpus-id", stats.corpus_id, "Corpus identifier (default: input file stem)");

  smurf::cli::CorrelateOptions corr;
  corr.common.threads = hw;
  auto* corr_cmd = app.add_subcommand("correlate", "Correlate a metric with human judgments");
  add_common(corr_cmd, corr.common, true);
  corr_cmd->add_option("--metric", corr.metric, "sparcs, spurts, mima or smurf")->capture_default_str();
  corr_cmd->add_option("--method", corr.method, "pearson, spearman, kendall or all")->capture_default_str();
  corr_cmd->add_flag("--group-by-system", corr.group_by_system, "Average per system before correlating");

  smurf::cli::PairwiseOptions pair;
  pair.common.threads = hw;
  auto* pair_cmd = app.add_subcommand("pairwise", "Pairwise preference accuracy");
  add_common(pair_cmd, pair.common, true);
  pair_cmd->add_option("--metric", pair.metric, "sparcs, spurts, mima or smurf")->capture_default_str();
  pair_cmd->add_option("--max-refs", pair.max_refs, "References used per pair (0 = all)")->capture_default_str();

  smurf::cli::SystemOptions sys;
  sys.common.threads = hw;
  auto* sys_cmd = app.add_subcommand("system", "Per-captioner ellipses and overlap with humans");
  add_common(sys_cmd, sys.common, true);
  sys_cmd->add_option("--human-system", sys.human_system, "Name of the human captioner")->capture_default_str();
  sys_cmd->add_option("--seed", sys.seed, "Monte Carlo seed")->capture_default_str();
  sys_cmd->add_option("--samples", sys.samples, "Monte Carlo samples")->capture_default_str();
  sys_cmd->add_option("--svg", sys.svg, "Scatter plot path");
  sys_cmd->add_option("--csv", sys.csv, "Point table path");

  smurf::cli::DegradeOptions deg;
  auto* deg_cmd = app.add_subcommand("degrade", "Grammar score under random word substitution");
  add_common(deg_cmd, deg.common, false);
  deg_cmd->add_option("--model-dir", deg.common.model_dir, "Model directory or single bundle")->required();
  deg_cmd->add_option("--fractions", deg.fractions, "Substitution fractions")->delimiter(',')->capture_default_str();
  deg_cmd->add_option("--sentences", deg.sentences, "Sentences sampled")->capture_default_str();
  deg_cmd->add_option("--seed", deg.seed, "Sampling and substitution seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version exit 0; every usage error is a configuration error.
    return app.exit(e) == 0 ? 0 : smurf::cli::kExitConfig;
  }

  if (score_cmd->parsed()) return smurf::cli::cmd_score(score);
  if (stats_cmd->parsed()) return smurf::cli::cmd_stats(stats);
  if (corr_cmd->parsed()) return smurf::cli::cmd_correlate(corr);
  if (pair_cmd->parsed()) return smurf::cli::cmd_pairwise(pair);
  if (sys_cmd->parsed()) return smurf::cli::cmd_system(sys);
  if (deg_cmd->parsed()) return smurf::cli::cmd_degrade(deg);
  return 1;
}
