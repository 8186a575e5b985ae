#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "smurf/error.hpp"
#include "smurf/harness/correlation.hpp"
#include "smurf/mima.hpp"
#include "smurf/runtime/bundle.hpp"
#include "smurf/text/preprocess.hpp"

namespace smurf::harness {

inline constexpr std::uint64_t kDegradeSeed = 7;
inline constexpr std::size_t kProbeSentences = 25;

namespace detail {

// Unbiased index in [0, bound) by rejection; avoids implementation-defined distributions.
inline std::size_t draw_index(std::mt19937_64& gen, std::size_t bound) {
  const std::uint64_t b = bound;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % b;
  std::uint64_t x;
  do {
    x = gen();
  } while (x >= limit);
  return static_cast<std::size_t>(x % b);
}

}  // namespace detail

/// Replaces ceil(fraction * len) distinct positions with words drawn
/// uniformly from `corpus`. The position order and replacement words depend
/// only on (seed, len, corpus), so a larger fraction replaces a superset of
/// the positions a smaller one does.
inline text::WordSequence degrade(const text::WordSequence& sentence, double fraction,
                                  const std::vector<std::string>& corpus, std::uint64_t seed) {
  if (corpus.empty()) throw Error(ErrorCode::InsufficientData, "replacement corpus is empty");
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw Error(ErrorCode::Configuration, "fraction must lie in [0, 1]");
  const std::size_t len = sentence.size();
  std::mt19937_64 gen(seed);
  std::vector<std::size_t> order(len);
  for (std::size_t i = 0; i < len; ++i) order[i] = i;
  for (std::size_t i = len; i > 1; --i) std::swap(order[i - 1], order[detail::draw_index(gen, i)]);
  std::vector<std::size_t> picks(len);
  for (auto& p : picks) p = detail::draw_index(gen, corpus.size());

  // Tolerance keeps products like 0.3 * 10 from rounding up an extra position.
  const auto count = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(len) - 1e-9));
  text::WordSequence out = sentence;
  for (std::size_t k = 0; k < std::min(count, len); ++k) out.words[order[k]] = corpus[picks[k]];
  return out;
}

/// Unique words of all paragraphs, sorted.
inline std::vector<std::string> word_set(const std::vector<std::string>& paragraphs) {
  std::set<std::string> words;
  for (const auto& p : paragraphs)
    for (auto& w : text::tokenize_words(p).words) words.insert(std::move(w));
  return {words.begin(), words.end()};
}

/// Splits on '.', '!' and '?' followed by whitespace or end of text.
inline std::vector<std::string> split_sentences(const std::string& paragraph) {
  std::vector<std::string> out;
  std::string current;
  for (std::size_t i = 0; i < paragraph.size(); ++i) {
    current += paragraph[i];
    const char c = paragraph[i];
    if ((c == '.' || c == '!' || c == '?') &&
        (i + 1 == paragraph.size() || std::isspace(static_cast<unsigned char>(paragraph[i + 1])))) {
      if (!text::tokenize_words(current).empty()) out.push_back(current);
      current.clear();
    }
  }
  if (!text::tokenize_words(current).empty()) out.push_back(current);
  return out;
}

/// Seeded sample of `count` sentences (without replacement) across all paragraphs.
inline std::vector<text::WordSequence> sample_sentences(const std::vector<std::string>& paragraphs, std::size_t count,
                                                        std::uint64_t seed) {
  std::vector<text::WordSequence> pool;
  for (const auto& p : paragraphs)
    for (const auto& s : split_sentences(p)) pool.push_back(text::tokenize_words(s));
  if (pool.size() < count)
    throw Error(ErrorCode::InsufficientData, "only " + std::to_string(pool.size()) + " sentences available");
  std::mt19937_64 gen(seed);
  for (std::size_t i = 0; i < count; ++i) std::swap(pool[i], pool[i + detail::draw_index(gen, pool.size() - i)]);
  pool.resize(count);
  return pool;
}

struct DegradationPoint {
  double fraction = 0.0;
  double mean_f_mima = 0.0;
};

struct DegradationReport {
  std::vector<DegradationPoint> curve;
  bool non_increasing = true;
  std::optional<double> spearman;  // fraction vs mean, when defined
};

/// Mean grammar f_MIMA over the sentences at each substitution fraction.
/// Sentence i is degraded with seed + i at every fraction.
inline DegradationReport degradation_probe(const std::vector<text::WordSequence>& sentences,
                                           const std::vector<std::string>& corpus, const std::vector<double>& fractions,
                                           const runtime::ModelBundle& bundle, std::uint64_t seed = kDegradeSeed,
                                           std::size_t min_sentences = kProbeSentences) {
  if (sentences.size() < min_sentences)
    throw Error(ErrorCode::InsufficientData, "probe needs at least " + std::to_string(min_sentences) + " sentences");
  if (fractions.empty()) throw Error(ErrorCode::InsufficientData, "no fractions given");
  DegradationReport report;
  for (double f : fractions) {
    double sum = 0.0;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      const text::WordSequence degraded = degrade(sentences[i], f, corpus, seed + i);
      sum += grammar_score(degraded.joined(), bundle).value;
    }
    report.curve.push_back({f, sum / static_cast<double>(sentences.size())});
  }
  for (std::size_t i = 1; i < report.curve.size(); ++i)
    if (report.curve[i].mean_f_mima > report.curve[i - 1].mean_f_mima) report.non_increasing = false;
  if (report.curve.size() >= 3) {
    std::vector<double> xs, ys;
    for (const auto& p : report.curve) {
      xs.push_back(p.fraction);
      ys.push_back(p.mean_f_mima);
    }
    try {
      report.spearman = spearman(xs, ys).coefficient;
    } catch (const Error&) {
      // constant curve: rank correlation undefined
    }
  }
  return report;
}

}  // namespace smurf::harness
