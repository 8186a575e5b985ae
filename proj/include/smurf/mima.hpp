#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "smurf/error.hpp"
#include "smurf/runtime/attention.hpp"
#include "smurf/runtime/bundle.hpp"
#include "smurf/text/preprocess.hpp"

namespace smurf {

enum class TypicalityVariant { Grammar, Style };

struct TypicalityScore {
  double value = 0.0;
  std::string model_id;
  TypicalityVariant variant = TypicalityVariant::Grammar;
  std::vector<std::string> warnings;
};

namespace detail {

// Shannon entropy in nats with 0 log 0 = 0.
inline double entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log(v);
  return h;
}

}  // namespace detail

/// Normalized mutual information between the row and column marginals of one
/// attention head, with the head rescaled by 1/n into a joint distribution:
///
///   NMI = 2 (H(rows) + H(cols) - H(joint)) / (H(rows) + H(cols))
///
/// Returns 0 when both marginals have zero entropy (n = 1).
inline double head_information_flow(const runtime::HeadView& head) {
  if (head.size() == 0) throw Error(ErrorCode::BadDistribution, "empty attention head");
  if (!runtime::is_row_stochastic(head))
    throw Error(ErrorCode::BadDistribution, "attention rows must be nonnegative and sum to 1");
  const std::size_t n = head.size();
  const double scale = 1.0 / static_cast<double>(n);
  std::vector<double> rows(n, 0.0), cols(n, 0.0), joint;
  joint.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double p = head(i, j) * scale;
      joint.push_back(p);
      rows[i] += p;
      cols[j] += p;
    }
  const double h_rows = detail::entropy(rows);
  const double h_cols = detail::entropy(cols);
  const double denom = h_rows + h_cols;
  if (denom <= 0.0) return 0.0;
  const double nmi = 2.0 * (h_rows + h_cols - detail::entropy(joint)) / denom;
  return std::clamp(nmi, 0.0, 1.0);
}

inline double median(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::InsufficientData, "median of empty set");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

/// Per-layer maximum of head information flow.
inline std::vector<double> layer_max_flow(const runtime::AttentionStack& stack) {
  std::vector<double> maxima;
  maxima.reserve(stack.num_layers());
  for (std::size_t l = 0; l < stack.num_layers(); ++l) {
    double best = 0.0;
    for (std::size_t h = 0; h < stack.num_heads(); ++h)
      best = std::max(best, head_information_flow(stack.head(l, h)));
    maxima.push_back(best);
  }
  return maxima;
}

/// Typicality of a sequence: 1 - median over layers of the max over heads of
/// head information flow. Higher means more typical.
inline double f_mima(const runtime::AttentionStack& stack) {
  if (stack.num_layers() == 0 || stack.num_heads() == 0 || stack.seq_len() == 0)
    throw Error(ErrorCode::BadDistribution, "empty attention stack");
  return 1.0 - median(layer_max_flow(stack));
}

/// Grammar typicality of the full text (stopwords included).
inline TypicalityScore grammar_score(std::string_view text, const runtime::ModelBundle& grammar_bundle) {
  runtime::SubwordEncoding enc = runtime::encode(text, grammar_bundle);
  TypicalityScore score;
  score.value = f_mima(runtime::attention_forward(enc, grammar_bundle));
  score.model_id = grammar_bundle.model_id();
  score.variant = TypicalityVariant::Grammar;
  score.warnings = std::move(enc.warnings);
  return score;
}

/// Style score: 1 - f_mima on the stopword-free words re-joined with single
/// spaces. Text with no surviving words scores 0 with a warning.
inline TypicalityScore spurts(std::string_view text, const runtime::ModelBundle& style_bundle,
                              const text::StopwordList& stopwords = text::default_stopwords()) {
  TypicalityScore score;
  score.model_id = style_bundle.model_id();
  score.variant = TypicalityVariant::Style;
  const text::WordSequence content = text::remove_stopwords(text::tokenize_words(text), stopwords);
  if (content.empty()) {
    score.value = 0.0;
    score.warnings.push_back("no words left after stopword removal; SPURTS set to 0");
    return score;
  }
  runtime::SubwordEncoding enc = runtime::encode(content.joined(), style_bundle);
  score.value = 1.0 - f_mima(runtime::attention_forward(enc, style_bundle));
  score.warnings = std::move(enc.warnings);
  return score;
}

}  // namespace smurf
