#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "smurf/error.hpp"
#include "smurf/io/records.hpp"
#include "smurf/mima.hpp"
#include "smurf/runtime/bundle.hpp"
#include "smurf/sparcs.hpp"

namespace smurf {

/// Lower bound of expected human performance in standardized units: the left
/// tail of a two-sided 95% interval.
inline constexpr double kSemanticThreshold = -1.96;

struct MomentPair {
  double mean = 0.0;
  double std = 1.0;
};

/// Human-caption distribution of each raw metric, used to z-score new captions.
struct BaselineStats {
  std::string corpus_id;
  std::size_t count = 0;
  MomentPair sparcs;
  MomentPair spurts;
  MomentPair mima;

  void validate() const {
    if (count < 2) throw Error(ErrorCode::InsufficientData, "baseline stats need count >= 2");
    for (const MomentPair* m : {&sparcs, &spurts, &mima})
      if (!(m->std > 0.0)) throw Error(ErrorCode::ZeroVariance, "baseline std must be positive");
  }

  nlohmann::json to_json() const {
    auto pair = [](const MomentPair& m) { return nlohmann::json{{"mean", m.mean}, {"std", m.std}}; };
    return {{"corpus_id", corpus_id}, {"count", count}, {"sparcs", pair(sparcs)},
            {"spurts", pair(spurts)}, {"mima", pair(mima)}};
  }

  static BaselineStats from_json(const nlohmann::json& j) {
    BaselineStats s;
    try {
      s.corpus_id = j.at("corpus_id").get<std::string>();
      s.count = j.at("count").get<std::size_t>();
      auto pair = [&](const char* key) {
        return MomentPair{j.at(key).at("mean").get<double>(), j.at(key).at("std").get<double>()};
      };
      s.sparcs = pair("sparcs");
      s.spurts = pair("spurts");
      s.mima = pair("mima");
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::Configuration, std::string("bad baseline stats: ") + e.what());
    }
    s.validate();
    return s;
  }

  static BaselineStats load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Configuration, "cannot open baseline stats " + path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::Configuration, "unreadable baseline stats " + path + ": " + e.what());
    }
    return from_json(j);
  }

  void save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Configuration, "cannot write " + path);
    out << to_json().dump(2) << '\n';
  }
};

inline double standardize(double raw, double mean, double std) {
  if (!(std > 0.0)) throw Error(ErrorCode::ZeroVariance, "standard deviation must be positive");
  return (raw - mean) / std;
}

inline double standardize(double raw, const MomentPair& m) { return standardize(raw, m.mean, m.std); }

/// Population mean and standard deviation.
inline MomentPair population_moments(const std::vector<double>& values) {
  if (values.size() < 2) throw Error(ErrorCode::InsufficientData, "need at least two values");
  // Exact for constant input; summation rounding would otherwise leave a ~1e-17 std.
  if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); }))
    return {values.front(), 0.0};
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size()))};
}

struct RawTriple {
  double sparcs = 0.0;
  double spurts = 0.0;
  double mima = 0.0;
};

inline BaselineStats baseline_from_raw(const std::vector<RawTriple>& raw, std::string corpus_id) {
  if (raw.size() < 2) throw Error(ErrorCode::InsufficientData, "baseline needs at least two captions");
  std::vector<double> a, b, c;
  for (const auto& t : raw) {
    a.push_back(t.sparcs);
    b.push_back(t.spurts);
    c.push_back(t.mima);
  }
  BaselineStats s;
  s.corpus_id = std::move(corpus_id);
  s.count = raw.size();
  s.sparcs = population_moments(a);
  s.spurts = population_moments(b);
  s.mima = population_moments(c);
  if (!(s.sparcs.std > 0.0)) throw Error(ErrorCode::ZeroVariance, "sparcs is constant over the corpus");
  if (!(s.spurts.std > 0.0)) throw Error(ErrorCode::ZeroVariance, "spurts is constant over the corpus");
  if (!(s.mima.std > 0.0)) throw Error(ErrorCode::ZeroVariance, "mima is constant over the corpus");
  return s;
}

/// Raw metrics of one human caption, which is scored against the remaining
/// human captions of its image.
inline RawTriple raw_metrics(const io::CaptionRecord& record, const runtime::BundlePair& bundles,
                             const text::StopwordList& stopwords = text::default_stopwords()) {
  return {sparcs(record.candidate, record.references, stopwords).f1,
          spurts(record.candidate, bundles.style, stopwords).value,
          grammar_score(record.candidate, bundles.grammar).value};
}

inline constexpr std::size_t kMinBaselineReferences = 2;

inline BaselineStats compute_baseline_stats(const std::vector<io::CaptionRecord>& human_captions,
                                            const runtime::BundlePair& bundles, std::string corpus_id,
                                            const text::StopwordList& stopwords = text::default_stopwords()) {
  if (human_captions.size() < 2) throw Error(ErrorCode::InsufficientData, "need at least two human captions");
  std::vector<RawTriple> raw;
  raw.reserve(human_captions.size());
  for (const auto& rec : human_captions) {
    if (rec.references.size() < kMinBaselineReferences)
      throw Error(ErrorCode::InsufficientData, "record " + rec.id + " needs at least 2 held-in references");
    raw.push_back(raw_metrics(rec, bundles, stopwords));
  }
  return baseline_from_raw(raw, std::move(corpus_id));
}

struct Fusion {
  double grammar_penalty = 0.0;  // G <= 0
  double style_reward = 0.0;     // D >= 0
  double smurf = 0.0;
};

/// Below the semantic threshold only the grammar penalty applies; at or
/// above it the style reward is added too.
inline Fusion smurf_fuse(double sparcs_std, double spurts_std, double mima_std) {
  Fusion f;
  f.grammar_penalty = std::min(mima_std - kSemanticThreshold, 0.0);
  f.style_reward = std::max(spurts_std - kSemanticThreshold, 0.0);
  f.smurf = sparcs_std < kSemanticThreshold ? sparcs_std + f.grammar_penalty
                                            : sparcs_std + f.style_reward + f.grammar_penalty;
  return f;
}

/// Everything computed for one caption. Fields are empty when the metric
/// was not requested or its inputs were unavailable.
struct MetricScores {
  std::optional<SparcsScore> sparcs;
  std::optional<double> spurts;
  std::optional<double> mima;
  std::optional<double> sparcs_std;
  std::optional<double> spurts_std;
  std::optional<double> mima_std;
  std::optional<Fusion> fusion;
  std::vector<std::string> warnings;

  nlohmann::json to_json() const {
    nlohmann::json j = nlohmann::json::object();
    if (sparcs) {
      j["sparcs"] = sparcs->f1;
      j["sparcs_precision"] = sparcs->precision;
      j["sparcs_recall"] = sparcs->recall;
    }
    if (spurts) j["spurts"] = *spurts;
    if (mima) j["mima"] = *mima;
    if (sparcs_std) j["sparcs_std"] = *sparcs_std;
    if (spurts_std) j["spurts_std"] = *spurts_std;
    if (mima_std) j["mima_std"] = *mima_std;
    if (fusion) {
      j["G"] = fusion->grammar_penalty;
      j["D"] = fusion->style_reward;
      j["smurf"] = fusion->smurf;
    }
    if (!warnings.empty()) j["warnings"] = warnings;
    return j;
  }
};

/// All three raw metrics standardized and fused.
inline MetricScores score_smurf(const io::CaptionRecord& record, const runtime::BundlePair& bundles,
                                const BaselineStats& stats,
                                const text::StopwordList& stopwords = text::default_stopwords()) {
  MetricScores s;
  s.sparcs = sparcs(record.candidate, record.references, stopwords);
  TypicalityScore style = spurts(record.candidate, bundles.style, stopwords);
  TypicalityScore grammar = grammar_score(record.candidate, bundles.grammar);
  s.spurts = style.value;
  s.mima = grammar.value;
  s.warnings = style.warnings;
  s.warnings.insert(s.warnings.end(), grammar.warnings.begin(), grammar.warnings.end());
  s.sparcs_std = standardize(s.sparcs->f1, stats.sparcs);
  s.spurts_std = standardize(*s.spurts, stats.spurts);
  s.mima_std = standardize(*s.mima, stats.mima);
  s.fusion = smurf_fuse(*s.sparcs_std, *s.spurts_std, *s.mima_std);
  return s;
}

}  // namespace smurf
