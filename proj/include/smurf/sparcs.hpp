#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "smurf/error.hpp"
#include "smurf/text/preprocess.hpp"

namespace smurf {

/// Document frequency of each concept over a reference caption set.
/// References with no concepts are not counted as documents.
struct ReferenceIndex {
  std::size_t num_refs = 0;
  std::map<std::string, std::size_t> df;

  std::size_t frequency(const std::string& concept_stem) const {
    auto it = df.find(concept_stem);
    return it == df.end() ? 0 : it->second;
  }

  text::ConceptSet all_concepts() const {
    text::ConceptSet out;
    for (const auto& [c, _] : df) out.insert(c);
    return out;
  }
};

struct SparcsScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

inline ReferenceIndex build_reference_index(const std::vector<std::string>& references,
                                            const text::StopwordList& stopwords = text::default_stopwords()) {
  ReferenceIndex index;
  for (const auto& ref : references) {
    const text::ConceptSet concepts = text::extract_concepts(ref, stopwords);
    if (concepts.empty()) continue;
    ++index.num_refs;
    for (const auto& c : concepts) ++index.df[c];
  }
  if (index.num_refs == 0)
    throw Error(ErrorCode::NoReferences, "no reference caption yields any concept");
  return index;
}

/// Precision where a correct concept earns df/|refs| and an unseen concept costs 1.
inline double sparcs_precision(const text::ConceptSet& candidate, const ReferenceIndex& index) {
  if (candidate.empty() || index.num_refs == 0) return 0.0;
  const double refs = static_cast<double>(index.num_refs);
  double num = 0.0, den = 0.0;
  for (const auto& c : candidate) {
    const std::size_t f = index.frequency(c);
    const double weight = static_cast<double>(f) / refs;
    num += weight;
    den += weight + (f == 0 ? 1.0 : 0.0);
  }
  return num / den;
}

/// df mass of the candidate's concepts over the df mass of all reference concepts.
inline double sparcs_recall(const text::ConceptSet& candidate, const ReferenceIndex& index) {
  double total = 0.0;
  for (const auto& [c, f] : index.df) total += static_cast<double>(f);
  if (total == 0.0) return 0.0;
  double hit = 0.0;
  for (const auto& c : candidate) hit += static_cast<double>(index.frequency(c));
  return hit / total;
}

inline SparcsScore sparcs(const text::ConceptSet& candidate, const ReferenceIndex& index) {
  SparcsScore s;
  s.precision = sparcs_precision(candidate, index);
  s.recall = sparcs_recall(candidate, index);
  const double sum = s.precision + s.recall;
  s.f1 = sum > 0.0 ? 2.0 * s.precision * s.recall / sum : 0.0;
  return s;
}

inline SparcsScore sparcs(std::string_view candidate_text, const std::vector<std::string>& references,
                          const text::StopwordList& stopwords = text::default_stopwords()) {
  const ReferenceIndex index = build_reference_index(references, stopwords);
  return sparcs(text::extract_concepts(candidate_text, stopwords), index);
}

}  // namespace smurf
