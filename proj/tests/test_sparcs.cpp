#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <set>

#include "smurf/error.hpp"
#include "smurf/sparcs.hpp"
#include "smurf/text/porter_stemmer.hpp"

using namespace smurf;
using text::ConceptSet;

namespace {

const std::vector<std::string> kRefs = {"a dog runs", "the dog is running"};

// Words that are non-stopwords and stem to themselves, so set overlap over
// the raw words is an oracle for overlap over concepts.
const std::vector<std::string> kPool = {"dog", "cat", "tree", "car", "red", "cup", "kite", "field", "girl",
                                        "ball", "street", "plate", "cake", "pig", "train", "sky", "wall",
                                        "bench", "boat", "man"};

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no smurf::Error thrown";
  return ErrorCode::Configuration;
}

}  // namespace

TEST(ReferenceIndex, DocumentFrequencies) {
  const ReferenceIndex idx = build_reference_index(kRefs);
  EXPECT_EQ(idx.num_refs, 2u);
  EXPECT_EQ(idx.df, (std::map<std::string, std::size_t>{{"dog", 2}, {"run", 2}}));
  EXPECT_EQ(idx.all_concepts(), (ConceptSet{"dog", "run"}));
}

TEST(ReferenceIndex, CountsDocumentsNotOccurrences) {
  const ReferenceIndex rep = build_reference_index({"x", "x", "x"});
  EXPECT_EQ(rep.num_refs, 3u);
  EXPECT_EQ(rep.df, (std::map<std::string, std::size_t>{{"x", 3}}));
  const ReferenceIndex once = build_reference_index({"dog dog dog"});
  EXPECT_EQ(once.df, (std::map<std::string, std::size_t>{{"dog", 1}}));
}

TEST(ReferenceIndex, DropsContentlessReferences) {
  const ReferenceIndex idx = build_reference_index({"the of a", "a dog", "!!"});
  EXPECT_EQ(idx.num_refs, 1u);
  EXPECT_EQ(code_of([] { build_reference_index({}); }), ErrorCode::NoReferences);
  EXPECT_EQ(code_of([] { build_reference_index({"the", "of a", ""}); }), ErrorCode::NoReferences);
  EXPECT_EQ(code_of([] { sparcs("a dog", {}); }), ErrorCode::NoReferences);
}

TEST(SparcsPrecision, Examples) {
  const ReferenceIndex idx = build_reference_index(kRefs);
  EXPECT_EQ(sparcs_precision({"dog", "run"}, idx), 1.0);
  EXPECT_EQ(sparcs_precision({"dog", "cat"}, idx), 0.5);
  EXPECT_EQ(sparcs_precision({"cat"}, idx), 0.0);
  EXPECT_EQ(sparcs_precision({}, idx), 0.0);
}

TEST(SparcsPrecision, PartialDocumentFrequency) {
  // df/N = 1/3 for "cat": P = (1 + 1/3) / (1 + 1/3 + 1) with an unseen concept.
  const ReferenceIndex idx = build_reference_index({"a dog", "the dog and a cat", "dog"});
  EXPECT_DOUBLE_EQ(sparcs_precision({"dog", "cat", "tree"}, idx), (1.0 + 1.0 / 3) / (1.0 + 1.0 / 3 + 1.0));
}

TEST(SparcsRecall, Examples) {
  const ReferenceIndex idx = build_reference_index(kRefs);
  EXPECT_EQ(sparcs_recall(idx.all_concepts(), idx), 1.0);
  EXPECT_EQ(sparcs_recall({"dog"}, idx), 0.5);
  EXPECT_EQ(sparcs_recall({}, idx), 0.0);
  EXPECT_EQ(sparcs_recall({"cat", "dog"}, idx), 0.5);
}

TEST(Sparcs, Examples) {
  const SparcsScore full = sparcs("a dog running", kRefs);
  EXPECT_EQ(full.precision, 1.0);
  EXPECT_EQ(full.recall, 1.0);
  EXPECT_EQ(full.f1, 1.0);
  EXPECT_EQ(sparcs("a cat", kRefs).f1, 0.0);
  const SparcsScore half = sparcs("a dog and a cat", kRefs);
  EXPECT_EQ(half.precision, 0.5);
  EXPECT_EQ(half.recall, 0.5);
  EXPECT_EQ(half.f1, 0.5);
}

TEST(Sparcs, EmptyCandidateScoresZero) {
  const SparcsScore s = sparcs("the of", kRefs);
  EXPECT_EQ(s.precision, 0.0);
  EXPECT_EQ(s.recall, 0.0);
  EXPECT_EQ(s.f1, 0.0);
  EXPECT_EQ(sparcs("", kRefs).f1, 0.0);
}

TEST(Sparcs, IdenticalSingleReference) {
  EXPECT_EQ(sparcs("A man riding a wave on a surfboard.", {"A man riding a wave on a surfboard."}).f1, 1.0);
}

TEST(Sparcs, SingleReferenceMatchesSetOverlap) {
  for (const auto& w : kPool) ASSERT_EQ(text::porter_stem(w), w);
  std::mt19937 gen(2021);
  for (int trial = 0; trial < 1000; ++trial) {
    auto draw = [&](std::size_t max) {
      std::vector<std::string> words;
      const std::size_t k = 1 + gen() % max;
      for (std::size_t i = 0; i < k; ++i) words.push_back(kPool[gen() % kPool.size()]);
      return words;
    };
    const auto cand_words = draw(6), ref_words = draw(8);
    std::string cand_text, ref_text;
    for (const auto& w : cand_words) cand_text += "the " + w + " ";
    for (const auto& w : ref_words) ref_text += w + " of a ";
    const std::set<std::string> c(cand_words.begin(), cand_words.end()), r(ref_words.begin(), ref_words.end());
    std::size_t overlap = 0;
    for (const auto& w : c) overlap += r.count(w);
    const double p = static_cast<double>(overlap) / static_cast<double>(c.size());
    const double rec = static_cast<double>(overlap) / static_cast<double>(r.size());
    const double f1 = p + rec > 0 ? 2 * p * rec / (p + rec) : 0.0;

    const SparcsScore s = sparcs(cand_text, {ref_text});
    ASSERT_EQ(s.precision, p) << cand_text << " | " << ref_text;
    ASSERT_EQ(s.recall, rec);
    ASSERT_EQ(s.f1, f1);
    ASSERT_NEAR(s.f1, 2.0 * static_cast<double>(overlap) / static_cast<double>(c.size() + r.size()), 1e-15);
  }
}

TEST(Sparcs, BoundsMonotonicityAndOrderInvariance) {
  std::mt19937 gen(7);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::string> refs;
    const std::size_t nrefs = 1 + gen() % 5;
    for (std::size_t i = 0; i < nrefs; ++i) {
      std::string ref;
      for (std::size_t k = 0, len = 1 + gen() % 6; k < len; ++k) ref += kPool[gen() % kPool.size()] + " ";
      refs.push_back(ref);
    }
    ConceptSet cand;
    for (std::size_t k = 0, len = gen() % 6; k < len; ++k) cand.insert(kPool[gen() % kPool.size()]);
    const ReferenceIndex idx = build_reference_index(refs);
    const SparcsScore s = sparcs(cand, idx);
    for (double v : {s.precision, s.recall, s.f1}) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
    }
    for (const auto& [c, f] : idx.df) {
      ASSERT_GE(f, 1u);
      ASSERT_LE(f, idx.num_refs);
      ConceptSet more = cand;
      more.insert(c);
      ASSERT_GE(sparcs_recall(more, idx), s.recall);
    }
    std::vector<std::string> shuffled = refs;
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    const SparcsScore t = sparcs(cand, build_reference_index(shuffled));
    ASSERT_EQ(t.precision, s.precision);
    ASSERT_EQ(t.recall, s.recall);
    ASSERT_EQ(t.f1, s.f1);
  }
}

TEST(Sparcs, CustomStopwords) {
  const text::StopwordList none(std::unordered_set<std::string>{});
  const SparcsScore s = sparcs("the dog", {"a dog"}, none);
  EXPECT_EQ(s.precision, 0.5);  // "the" becomes an unmatched concept
  EXPECT_EQ(s.recall, 0.5);
}
