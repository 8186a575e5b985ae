#pragma once

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "smurf/error.hpp"
#include "smurf/fusion.hpp"
#include "smurf/harness/correlation.hpp"
#include "smurf/harness/degrade.hpp"
#include "smurf/harness/pairwise.hpp"
#include "smurf/harness/system.hpp"
#include "smurf/io/records.hpp"
#include "smurf/mima.hpp"
#include "smurf/runtime/bundle.hpp"
#include "smurf/sparcs.hpp"
#include "smurf/text/stopwords.hpp"

namespace smurf::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitRecordFailures = 2 };

enum class Metric { Sparcs, Spurts, Mima, Smurf };

inline std::string to_string(Metric m) {
  switch (m) {
    case Metric::Sparcs: return "sparcs";
    case Metric::Spurts: return "spurts";
    case Metric::Mima: return "mima";
    case Metric::Smurf: return "smurf";
  }
  return "?";
}

inline Metric parse_metric(std::string_view name) {
  if (name == "sparcs") return Metric::Sparcs;
  if (name == "spurts") return Metric::Spurts;
  if (name == "mima") return Metric::Mima;
  if (name == "smurf") return Metric::Smurf;
  throw Error(ErrorCode::Configuration, "unknown metric " + std::string(name));
}

/// Comma-separated metric names.
inline std::set<Metric> parse_metrics(std::string_view list) {
  std::set<Metric> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = std::min(list.find(',', start), list.size());
    std::string_view item = list.substr(start, comma - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) out.insert(parse_metric(item));
    start = comma + 1;
  }
  if (out.empty()) throw Error(ErrorCode::Configuration, "no metrics selected");
  return out;
}

/// Flags shared by every subcommand. Empty strings mean "not given".
struct CommonOptions {
  std::string input;
  std::string output = "-";
  std::string model_dir;
  std::string baseline_stats;
  std::string stopwords;
  std::size_t threads = 1;
};

namespace detail {

/// Writes to `path`, or stdout for "-".
inline void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Configuration, "cannot write " + path);
  out << text;
}

inline std::string with_extension(const std::string& path, const std::string& ext) {
  return std::filesystem::path(path).replace_extension(ext).string();
}

inline nlohmann::json error_json(const std::string& id, const Error& e) {
  return {{"id", id}, {"error", {{"code", std::string(to_string(e.code()))}, {"message", e.what()}}}};
}

/// Runs `fn(i)` for i in [0, n) on at most `threads` workers.
template <class Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  for (auto& th : pool) th.join();
}

/// A grammar/style directory pair, or a single bundle directory (config.json
/// at the top) used for both roles.
inline runtime::BundlePair load_bundles(const std::string& model_dir) {
  const std::filesystem::path dir(model_dir);
  if (std::filesystem::exists(dir / "config.json")) {
    runtime::ModelBundle b = runtime::ModelBundle::load(dir);
    return {b, b};
  }
  return runtime::BundlePair::load(dir);
}

}  // namespace detail

/// Everything needed to compute metrics for caption records.
class Scorer {
 public:
  Scorer(const CommonOptions& opts, const std::set<Metric>& metrics) : metrics_(metrics) {
    const bool needs_models = metrics.count(Metric::Spurts) || metrics.count(Metric::Mima) ||
                              metrics.count(Metric::Smurf);
    if (!opts.stopwords.empty()) stopwords_ = text::StopwordList::from_file(opts.stopwords);
    if (needs_models && opts.model_dir.empty())
      throw Error(ErrorCode::Configuration, "--model-dir is required for spurts, mima and smurf");
    if (!opts.model_dir.empty() && needs_models) bundles_ = detail::load_bundles(opts.model_dir);
    if (metrics.count(Metric::Smurf) && opts.baseline_stats.empty())
      throw Error(ErrorCode::Configuration, "--baseline-stats is required for smurf");
    if (!opts.baseline_stats.empty()) stats_ = BaselineStats::load(opts.baseline_stats);
  }

  MetricScores score(const io::CaptionRecord& r) const {
    if (metrics_.count(Metric::Smurf)) return score_smurf(r, *bundles_, *stats_, stopwords_);
    MetricScores s;
    if (metrics_.count(Metric::Sparcs)) {
      s.sparcs = sparcs(r.candidate, r.references, stopwords_);
      if (stats_) s.sparcs_std = standardize(s.sparcs->f1, stats_->sparcs);
    }
    if (metrics_.count(Metric::Spurts)) {
      TypicalityScore t = spurts(r.candidate, bundles_->style, stopwords_);
      s.spurts = t.value;
      s.warnings.insert(s.warnings.end(), t.warnings.begin(), t.warnings.end());
      if (stats_) s.spurts_std = standardize(t.value, stats_->spurts);
    }
    if (metrics_.count(Metric::Mima)) {
      TypicalityScore t = grammar_score(r.candidate, bundles_->grammar);
      s.mima = t.value;
      s.warnings.insert(s.warnings.end(), t.warnings.begin(), t.warnings.end());
      if (stats_) s.mima_std = standardize(t.value, stats_->mima);
    }
    return s;
  }

  /// The single number `metric` assigns to a record: SPARCS F1, raw SPURTS,
  /// raw grammar f_MIMA, or the fused score.
  double scalar(const io::CaptionRecord& r, Metric metric) const {
    switch (metric) {
      case Metric::Sparcs: return sparcs(r.candidate, r.references, stopwords_).f1;
      case Metric::Spurts: return spurts(r.candidate, bundles_->style, stopwords_).value;
      case Metric::Mima: return grammar_score(r.candidate, bundles_->grammar).value;
      case Metric::Smurf: return score_smurf(r, *bundles_, *stats_, stopwords_).fusion->smurf;
    }
    throw Error(ErrorCode::Configuration, "unknown metric");
  }

  nlohmann::json meta(std::optional<std::uint64_t> seed = std::nullopt) const {
    nlohmann::json j{{"tool_version", kToolVersion}};
    if (bundles_) {
      j["model_id"] = {{"grammar", bundles_->grammar.model_id()}, {"style", bundles_->style.model_id()}};
    } else {
      j["model_id"] = nullptr;
    }
    j["corpus_id"] = stats_ ? nlohmann::json(stats_->corpus_id) : nlohmann::json(nullptr);
    j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
    j["stopwords"] = stopwords_.size();
    return j;
  }

  const std::optional<runtime::BundlePair>& bundles() const { return bundles_; }
  const std::optional<BaselineStats>& stats() const { return stats_; }
  const text::StopwordList& stopwords() const { return stopwords_; }

 private:
  std::set<Metric> metrics_;
  text::StopwordList stopwords_;
  std::optional<runtime::BundlePair> bundles_;
  std::optional<BaselineStats> stats_;
};

// ---------------------------------------------------------------- score

struct ScoreOptions {
  CommonOptions common;
  std::string metrics = "sparcs";
};

/// One output line per nonblank input line, in input order. Lines that fail
/// to parse or score become error objects and make the exit code 2. The run
/// header goes to `<output>.meta.json` (stderr for stdout output).
inline int cmd_score(const ScoreOptions& opts, std::ostream& err = std::cerr) {
  std::vector<std::string> lines;
  std::optional<Scorer> scorer;
  try {
    scorer.emplace(opts.common, parse_metrics(opts.metrics));
    std::ifstream in(opts.common.input);
    if (!in) throw Error(ErrorCode::Configuration, "cannot open " + opts.common.input);
    for (std::string line; std::getline(in, line);)
      if (line.find_first_not_of(" \t\r") != std::string::npos) lines.push_back(std::move(line));
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  std::vector<nlohmann::json> results(lines.size());
  std::atomic<std::size_t> failures{0};
  detail::parallel_for(lines.size(), opts.common.threads, [&](std::size_t i) {
    std::string id = "line-" + std::to_string(i + 1);
    try {
      const auto j = nlohmann::json::parse(lines[i], nullptr, false);
      if (j.is_discarded()) throw Error(ErrorCode::MalformedInput, "line is not valid JSON");
      if (j.is_object() && j.contains("id")) id = j.at("id").is_string() ? j.at("id").get<std::string>() : j.at("id").dump();
      const io::CaptionRecord rec = io::record_from_json(j);
      nlohmann::json out{{"id", rec.id}};
      out.update(scorer->score(rec).to_json());
      results[i] = std::move(out);
    } catch (const Error& e) {
      results[i] = detail::error_json(id, e);
      ++failures;
    }
  });

  std::string text;
  for (const auto& r : results) text += r.dump() + '\n';
  nlohmann::json meta = scorer->meta();
  meta["metrics"] = opts.metrics;
  meta["records"] = results.size();
  meta["failures"] = failures.load();
  try {
    detail::write_text(opts.common.output, text);
    if (opts.common.output.empty() || opts.common.output == "-")
      err << meta.dump() << '\n';
    else
      detail::write_text(opts.common.output + ".meta.json", meta.dump(2) + '\n');
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  if (failures > 0) {
    err << failures.load() << " of " << results.size() << " records failed\n";
    return kExitRecordFailures;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- stats

struct StatsOptions {
  CommonOptions common;
  std::string corpus_id;  // defaults to the input file stem
};

/// Leave-one-out human records. A line is either a CaptionRecord (candidate
/// = held-out caption) or {"id", "captions": [...]}, which expands to one
/// record per caption scored against the others.
inline std::vector<io::CaptionRecord> read_human_corpus(const std::string& path) {
  std::vector<io::CaptionRecord> out;
  io::for_each_jsonl(path, [&](std::size_t line_no, const nlohmann::json& j) {
    try {
      if (j.is_object() && j.contains("captions")) {
        const auto caps = j.at("captions").get<std::vector<std::string>>();
        const std::string id = j.contains("id") ? (j.at("id").is_string() ? j.at("id").get<std::string>()
                                                                           : j.at("id").dump())
                                                : "line-" + std::to_string(line_no);
        for (std::size_t k = 0; k < caps.size(); ++k) {
          io::CaptionRecord r;
          r.id = id + "#" + std::to_string(k);
          r.candidate = caps[k];
          for (std::size_t m = 0; m < caps.size(); ++m)
            if (m != k) r.references.push_back(caps[m]);
          out.push_back(std::move(r));
        }
      } else {
        out.push_back(io::record_from_json(j));
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::MalformedInput, path + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::MalformedInput, path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  });
  return out;
}

inline int cmd_stats(const StatsOptions& opts, std::ostream& err = std::cerr) {
  try {
    const std::set<Metric> all{Metric::Sparcs, Metric::Spurts, Metric::Mima};
    Scorer scorer(opts.common, all);
    const auto records = read_human_corpus(opts.common.input);
    if (records.size() < 2) throw Error(ErrorCode::InsufficientData, "need at least two human captions");
    for (const auto& r : records)
      if (r.references.size() < kMinBaselineReferences)
        throw Error(ErrorCode::InsufficientData, "record " + r.id + " needs at least 2 other human captions");
    std::vector<RawTriple> raw(records.size());
    std::vector<std::optional<Error>> errors(records.size());
    detail::parallel_for(records.size(), opts.common.threads, [&](std::size_t i) {
      try {
        raw[i] = raw_metrics(records[i], *scorer.bundles(), scorer.stopwords());
      } catch (const Error& e) {
        errors[i] = e;
      }
    });
    for (std::size_t i = 0; i < records.size(); ++i)
      if (errors[i]) throw Error(errors[i]->code(), "record " + records[i].id + ": " + errors[i]->what());
    const std::string corpus =
        opts.corpus_id.empty() ? std::filesystem::path(opts.common.input).stem().string() : opts.corpus_id;
    const BaselineStats stats = baseline_from_raw(raw, corpus);
    detail::write_text(opts.common.output, stats.to_json().dump(2) + '\n');
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

// ---------------------------------------------------------------- correlate

struct CorrelateOptions {
  CommonOptions common;
  std::string metric = "sparcs";
  std::string method = "all";  // pearson, spearman, kendall or all
  bool group_by_system = false;
};

inline constexpr std::size_t kLowSampleWarning = 10;

/// Input lines carry either a precomputed {"metric_score", "human_score"} or
/// a CaptionRecord with human_score (or human_scores) to be scored here.
inline int cmd_correlate(const CorrelateOptions& opts, std::ostream& err = std::cerr) {
  try {
    const Metric metric = parse_metric(opts.metric);
    const auto lines = io::read_jsonl(opts.common.input);
    bool needs_scoring = false;
    for (const auto& j : lines)
      if (!j.is_object() || !j.contains("metric_score")) needs_scoring = true;
    std::optional<Scorer> scorer;
    if (needs_scoring) scorer.emplace(opts.common, std::set<Metric>{metric});

    struct Row {
      std::string system;
      double metric = 0.0, human = 0.0;
    };
    std::vector<Row> rows(lines.size());
    std::vector<std::optional<Error>> errors(lines.size());
    detail::parallel_for(lines.size(), opts.common.threads, [&](std::size_t i) {
      const auto& j = lines[i];
      try {
        if (j.is_object() && j.contains("metric_score")) {
          rows[i].metric = j.at("metric_score").get<double>();
          if (!j.contains("human_score")) throw Error(ErrorCode::MalformedInput, "missing human_score");
          rows[i].human = j.at("human_score").get<double>();
          if (j.contains("system")) rows[i].system = j.at("system").get<std::string>();
        } else {
          const io::CaptionRecord r = io::record_from_json(j);
          if (!r.human_score) throw Error(ErrorCode::MalformedInput, "record " + r.id + " has no human score");
          rows[i] = {r.system.value_or(""), scorer->scalar(r, metric), *r.human_score};
        }
      } catch (const nlohmann::json::exception& e) {
        errors[i] = Error(ErrorCode::MalformedInput, e.what());
      } catch (const Error& e) {
        errors[i] = e;
      }
    });
    for (std::size_t i = 0; i < lines.size(); ++i)
      if (errors[i]) throw Error(errors[i]->code(), "input line " + std::to_string(i + 1) + ": " + errors[i]->what());

    std::vector<harness::ScorePair> pairs;
    if (opts.group_by_system) {
      std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> groups;
      for (const auto& r : rows) {
        if (r.system.empty()) throw Error(ErrorCode::MalformedInput, "--group-by-system needs a system on every line");
        groups[r.system].first.push_back(r.metric);
        groups[r.system].second.push_back(r.human);
      }
      auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
      };
      for (const auto& [_, g] : groups) pairs.emplace_back(mean(g.first), mean(g.second));
    } else {
      for (const auto& r : rows) pairs.emplace_back(r.metric, r.human);
    }

    nlohmann::json report;
    report["meta"] = scorer ? scorer->meta() : nlohmann::json{{"tool_version", kToolVersion},
                                                              {"model_id", nullptr},
                                                              {"corpus_id", nullptr},
                                                              {"seed", nullptr}};
    report["metric"] = opts.metric;
    report["grouped_by_system"] = opts.group_by_system;
    report["n"] = pairs.size();
    report["low_n"] = pairs.size() < kLowSampleWarning;
    std::vector<harness::CorrelationMethod> methods;
    if (opts.method == "all")
      methods = {harness::CorrelationMethod::Pearson, harness::CorrelationMethod::Spearman,
                 harness::CorrelationMethod::Kendall};
    else
      methods = {harness::parse_method(opts.method)};
    for (auto m : methods) {
      const harness::Correlation c = harness::correlate(pairs, m);
      report[std::string(harness::to_string(m))] = {{"coefficient", c.coefficient}, {"p_value", c.p_value}};
    }
    if (pairs.size() < kLowSampleWarning)
      err << "warning: only " << pairs.size() << " points; p-values are unreliable\n";
    detail::write_text(opts.common.output, report.dump(2) + '\n');
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

// ---------------------------------------------------------------- pairwise

struct PairwiseOptions {
  CommonOptions common;
  std::string metric = "sparcs";
  std::size_t max_refs = 5;  // 0 keeps every reference
};

/// Lines: {"id", "references", "candidate_b", "candidate_c", "human_choice":
/// "B"|"C", "category"}; "score_b"/"score_c" may replace the candidates.
inline int cmd_pairwise(const PairwiseOptions& opts, std::ostream& err = std::cerr) {
  try {
    const Metric metric = parse_metric(opts.metric);
    const auto lines = io::read_jsonl(opts.common.input);
    bool needs_scoring = false;
    for (const auto& j : lines)
      if (!j.is_object() || !j.contains("score_b")) needs_scoring = true;
    std::optional<Scorer> scorer;
    if (needs_scoring) scorer.emplace(opts.common, std::set<Metric>{metric});

    std::vector<harness::CategorizedTriple> rows(lines.size());
    std::vector<std::optional<Error>> errors(lines.size());
    detail::parallel_for(lines.size(), opts.common.threads, [&](std::size_t i) {
      const auto& j = lines[i];
      try {
        if (!j.is_object()) throw Error(ErrorCode::MalformedInput, "line is not an object");
        const std::string choice = j.at("human_choice").get<std::string>();
        if (choice != "B" && choice != "C") throw Error(ErrorCode::MalformedInput, "human_choice must be B or C");
        rows[i].category = j.contains("category") ? j.at("category").get<std::string>() : "all";
        rows[i].triple.human_choice = choice == "B" ? harness::Choice::B : harness::Choice::C;
        if (j.contains("score_b")) {
          rows[i].triple.score_b = j.at("score_b").get<double>();
          rows[i].triple.score_c = j.at("score_c").get<double>();
        } else {
          io::CaptionRecord r;
          r.id = j.contains("id") ? j.at("id").dump() : std::to_string(i + 1);
          r.references = j.at("references").get<std::vector<std::string>>();
          if (opts.max_refs > 0 && r.references.size() > opts.max_refs) r.references.resize(opts.max_refs);
          r.candidate = j.at("candidate_b").get<std::string>();
          rows[i].triple.score_b = scorer->scalar(r, metric);
          r.candidate = j.at("candidate_c").get<std::string>();
          rows[i].triple.score_c = scorer->scalar(r, metric);
        }
      } catch (const nlohmann::json::exception& e) {
        errors[i] = Error(ErrorCode::MalformedInput, e.what());
      } catch (const Error& e) {
        errors[i] = e;
      }
    });
    for (std::size_t i = 0; i < lines.size(); ++i)
      if (errors[i]) throw Error(errors[i]->code(), "input line " + std::to_string(i + 1) + ": " + errors[i]->what());

    const harness::PairwiseReport rep = harness::pairwise_report(rows);
    nlohmann::json report;
    report["meta"] = scorer ? scorer->meta() : nlohmann::json{{"tool_version", kToolVersion},
                                                              {"model_id", nullptr},
                                                              {"corpus_id", nullptr},
                                                              {"seed", nullptr}};
    report["metric"] = opts.metric;
    report["max_refs"] = opts.max_refs;
    report["n"] = rep.n;
    report["overall"] = rep.overall;
    report["categories"] = nlohmann::json::object();
    for (const auto& [cat, acc] : rep.by_category)
      report["categories"][cat] = {{"accuracy", acc}, {"count", rep.counts.at(cat)}};
    detail::write_text(opts.common.output, report.dump(2) + '\n');
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

// ---------------------------------------------------------------- system

struct SystemOptions {
  CommonOptions common;
  std::string human_system = "human";
  std::uint64_t seed = harness::kOverlapSeed;
  std::size_t samples = harness::kOverlapSamples;
  std::string svg;  // defaults to the output path with .svg
  std::string csv;  // defaults to the output path with .csv
};

/// Lines: {"system", "sparcs_std", "spurts_std", "mima_std"} or a
/// CaptionRecord with "system", scored here with the full fusion.
inline int cmd_system(const SystemOptions& opts, std::ostream& err = std::cerr) {
  try {
    const auto lines = io::read_jsonl(opts.common.input);
    bool needs_scoring = false;
    for (const auto& j : lines)
      if (!j.is_object() || !j.contains("sparcs_std")) needs_scoring = true;
    std::optional<Scorer> scorer;
    if (needs_scoring) scorer.emplace(opts.common, std::set<Metric>{Metric::Smurf});

    std::vector<std::pair<std::string, harness::StandardizedTriple>> rows(lines.size());
    std::vector<std::optional<Error>> errors(lines.size());
    detail::parallel_for(lines.size(), opts.common.threads, [&](std::size_t i) {
      const auto& j = lines[i];
      try {
        if (j.is_object() && j.contains("sparcs_std")) {
          rows[i] = {j.at("system").get<std::string>(),
                     {j.at("sparcs_std").get<double>(), j.at("spurts_std").get<double>(),
                      j.at("mima_std").get<double>()}};
        } else {
          const io::CaptionRecord r = io::record_from_json(j);
          if (!r.system) throw Error(ErrorCode::MalformedInput, "record " + r.id + " has no system");
          const MetricScores s = scorer->score(r);
          rows[i] = {*r.system, {*s.sparcs_std, *s.spurts_std, *s.mima_std}};
        }
      } catch (const nlohmann::json::exception& e) {
        errors[i] = Error(ErrorCode::MalformedInput, e.what());
      } catch (const Error& e) {
        errors[i] = e;
      }
    });
    for (std::size_t i = 0; i < lines.size(); ++i)
      if (errors[i]) throw Error(errors[i]->code(), "input line " + std::to_string(i + 1) + ": " + errors[i]->what());

    std::map<std::string, std::vector<harness::StandardizedTriple>> by_system;
    for (auto& [name, t] : rows) by_system[name].push_back(t);
    harness::SystemAnalysisOptions ao;
    ao.human_system = opts.human_system;
    ao.seed = opts.seed;
    ao.samples = opts.samples;
    const auto summaries = harness::system_analysis(by_system, ao);

    nlohmann::json report;
    report["meta"] = scorer ? scorer->meta(opts.seed) : nlohmann::json{{"tool_version", kToolVersion},
                                                                       {"model_id", nullptr},
                                                                       {"corpus_id", nullptr},
                                                                       {"seed", opts.seed}};
    report["human_system"] = opts.human_system;
    report["samples"] = opts.samples;
    report["systems"] = harness::summaries_to_json(summaries);
    detail::write_text(opts.common.output, report.dump(2) + '\n');
    const bool to_stdout = opts.common.output.empty() || opts.common.output == "-";
    const std::string svg = !opts.svg.empty() ? opts.svg : to_stdout ? "" : detail::with_extension(opts.common.output, ".svg");
    const std::string csv = !opts.csv.empty() ? opts.csv : to_stdout ? "" : detail::with_extension(opts.common.output, ".csv");
    if (!svg.empty()) detail::write_text(svg, harness::scatter_svg(by_system, summaries));
    if (!csv.empty()) detail::write_text(csv, harness::points_csv(by_system));
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

// ---------------------------------------------------------------- degrade

struct DegradeOptions {
  CommonOptions common;
  std::vector<double> fractions{0.0, 0.02, 0.04, 0.06, 0.08, 0.10};
  std::size_t sentences = harness::kProbeSentences;
  std::uint64_t seed = harness::kDegradeSeed;
};

/// Input: plain text, one paragraph per nonblank line. Replacement words are
/// drawn from the vocabulary of all paragraphs.
inline int cmd_degrade(const DegradeOptions& opts, std::ostream& err = std::cerr) {
  try {
    if (opts.common.model_dir.empty()) throw Error(ErrorCode::Configuration, "--model-dir is required");
    const runtime::BundlePair bundles = detail::load_bundles(opts.common.model_dir);
    std::ifstream in(opts.common.input);
    if (!in) throw Error(ErrorCode::Configuration, "cannot open " + opts.common.input);
    std::vector<std::string> paragraphs;
    for (std::string line; std::getline(in, line);)
      if (line.find_first_not_of(" \t\r") != std::string::npos) paragraphs.push_back(line);
    const auto sample = harness::sample_sentences(paragraphs, opts.sentences, opts.seed);
    const auto report =
        harness::degradation_probe(sample, harness::word_set(paragraphs), opts.fractions, bundles.grammar, opts.seed,
                                   opts.sentences);
    nlohmann::json j;
    j["meta"] = {{"tool_version", kToolVersion},
                 {"model_id", bundles.grammar.model_id()},
                 {"corpus_id", std::filesystem::path(opts.common.input).stem().string()},
                 {"seed", opts.seed}};
    j["sentences"] = sample.size();
    j["paragraphs"] = paragraphs.size();
    j["curve"] = nlohmann::json::array();
    for (const auto& p : report.curve) j["curve"].push_back({{"fraction", p.fraction}, {"mean_f_mima", p.mean_f_mima}});
    j["non_increasing"] = report.non_increasing;
    j["spearman"] = report.spearman ? nlohmann::json(*report.spearman) : nlohmann::json(nullptr);
    detail::write_text(opts.common.output, j.dump(2) + '\n');
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace smurf::cli
