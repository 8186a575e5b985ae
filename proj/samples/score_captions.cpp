// Scores a few captions with SPARCS, then runs the typicality metrics on a
// fixture bundle. Pass a model directory to use real bundles instead.

#include <iostream>

#include "smurf/smurf.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> refs = {"A dog runs across the grass.", "A brown dog is running on a lawn."};
  for (const char* cand : {"A dog running on grass.", "A cat sleeping on a sofa.", "dog dog dog"}) {
    const smurf::SparcsScore s = smurf::sparcs(cand, refs);
    std::cout << cand << "\n  sparcs P=" << s.precision << " R=" << s.recall << " F1=" << s.f1 << '\n';
  }

  const smurf::runtime::BundlePair bundles =
      argc > 1 ? smurf::runtime::BundlePair::load(argv[1])
               : smurf::runtime::BundlePair{smurf::runtime::ModelBundle::fixture("seeded-random", 6, 12),
                                            smurf::runtime::ModelBundle::fixture("seeded-random", 6, 12)};
  for (const char* text : {"A dog running on grass.", "grass on running dog a a"}) {
    std::cout << text << "\n  grammar=" << smurf::grammar_score(text, bundles.grammar).value
              << " spurts=" << smurf::spurts(text, bundles.style).value << '\n';
  }
  return 0;
}
