#pragma once

#include <map>
#include <string>
#include <vector>

#include "smurf/error.hpp"

namespace smurf::harness {

enum class Choice { B, C };

struct PairwiseTriple {
  double score_b = 0.0;
  double score_c = 0.0;
  Choice human_choice = Choice::B;
};

/// Fraction of triples where the higher-scored candidate is the one humans
/// preferred. Exact score ties count one half.
inline double pairwise_accuracy(const std::vector<PairwiseTriple>& triples) {
  if (triples.empty()) throw Error(ErrorCode::InsufficientData, "no pairwise judgments");
  double hits = 0.0;
  for (const auto& t : triples) {
    if (t.score_b == t.score_c) {
      hits += 0.5;
    } else if ((t.score_b > t.score_c) == (t.human_choice == Choice::B)) {
      hits += 1.0;
    }
  }
  return hits / static_cast<double>(triples.size());
}

struct CategorizedTriple {
  std::string category;  // e.g. HC, HI, HM, MM
  PairwiseTriple triple;
};

struct PairwiseReport {
  std::map<std::string, double> by_category;
  std::map<std::string, std::size_t> counts;
  double overall = 0.0;
  std::size_t n = 0;
};

/// Per-category accuracy plus the overall figure, which is the unweighted mean
/// of the category accuracies when categories are present.
inline PairwiseReport pairwise_report(const std::vector<CategorizedTriple>& rows) {
  if (rows.empty()) throw Error(ErrorCode::InsufficientData, "no pairwise judgments");
  std::map<std::string, std::vector<PairwiseTriple>> groups;
  std::vector<PairwiseTriple> all;
  for (const auto& r : rows) {
    groups[r.category].push_back(r.triple);
    all.push_back(r.triple);
  }
  PairwiseReport rep;
  rep.n = rows.size();
  double sum = 0.0;
  for (const auto& [cat, triples] : groups) {
    rep.by_category[cat] = pairwise_accuracy(triples);
    rep.counts[cat] = triples.size();
    sum += rep.by_category[cat];
  }
  rep.overall = groups.size() > 1 ? sum / static_cast<double>(groups.size()) : pairwise_accuracy(all);
  return rep;
}

}  // namespace smurf::harness
