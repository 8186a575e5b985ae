#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>
#include <set>

#include "smurf/error.hpp"
#include "smurf/harness/correlation.hpp"
#include "smurf/harness/degrade.hpp"
#include "smurf/harness/ellipse.hpp"
#include "smurf/harness/failure.hpp"
#include "smurf/harness/pairwise.hpp"
#include "smurf/harness/system.hpp"
#include "smurf/runtime/bundle.hpp"

using namespace smurf;
using namespace smurf::harness;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no smurf::Error thrown";
  return ErrorCode::Configuration;
}

std::vector<ScorePair> zip(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<ScorePair> out;
  for (std::size_t i = 0; i < x.size(); ++i) out.emplace_back(x[i], y[i]);
  return out;
}

/// Textbook tau-b from pair signs.
double kendall_oracle(const std::vector<double>& x, const std::vector<double>& y) {
  long s = 0, nx = 0, ny = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const int sx = (x[i] > x[j]) - (x[i] < x[j]);
      const int sy = (y[i] > y[j]) - (y[i] < y[j]);
      s += sx * sy;
      nx += sx != 0;
      ny += sy != 0;
    }
  return static_cast<double>(s) / std::sqrt(static_cast<double>(nx) * static_cast<double>(ny));
}

/// |M n H| / |M| by midpoint integration on a fine grid over M's box.
double overlap_grid(const Ellipse& m, const Ellipse& h, int steps = 1200) {
  const Point2 half = m.half_extent(), lo = m.center - half;
  const double dx = 2 * half.x() / steps, dy = 2 * half.y() / steps;
  long in_m = 0, in_both = 0;
  for (int i = 0; i < steps; ++i)
    for (int j = 0; j < steps; ++j) {
      const Point2 p{lo.x() + (i + 0.5) * dx, lo.y() + (j + 0.5) * dy};
      if (!m.contains(p)) continue;
      ++in_m;
      in_both += h.contains(p);
    }
  return static_cast<double>(in_both) / static_cast<double>(in_m);
}

Ellipse random_ellipse(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> c(-1.5, 1.5), sd(0.3, 1.5), rho(-0.8, 0.8);
  const double sx = sd(gen), sy = sd(gen), r = rho(gen);
  Eigen::Matrix2d cov;
  cov << sx * sx, r * sx * sy, r * sx * sy, sy * sy;
  return Ellipse(Point2(c(gen), c(gen)), cov);
}

}  // namespace

TEST(Correlation, PerfectAndReversedOrder) {
  const std::vector<double> x = {1, 2, 3, 4, 5}, y = {2, 4, 6, 8, 10}, r = {10, 8, 6, 4, 2};
  const CorrelationReport up = correlation_report(zip(x, y));
  EXPECT_DOUBLE_EQ(up.pearson.coefficient, 1.0);
  EXPECT_DOUBLE_EQ(up.spearman.coefficient, 1.0);
  EXPECT_DOUBLE_EQ(up.kendall.coefficient, 1.0);
  EXPECT_EQ(up.pearson.p_value, 0.0);
  const CorrelationReport down = correlation_report(zip(x, r));
  EXPECT_DOUBLE_EQ(down.pearson.coefficient, -1.0);
  EXPECT_DOUBLE_EQ(down.spearman.coefficient, -1.0);
  EXPECT_DOUBLE_EQ(down.kendall.coefficient, -1.0);
}

TEST(Correlation, SmallExample) {
  const std::vector<double> x = {1, 2, 3, 4}, y = {2, 1, 3, 4};
  EXPECT_NEAR(kendall(x, y).coefficient, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(spearman(x, y).coefficient, 0.8, 1e-12);
  EXPECT_NEAR(pearson(x, y).coefficient, 0.8, 1e-12);
}

TEST(Correlation, PearsonPValue) {
  // r = 0.8 with n = 4: t = 0.8 * sqrt(2 / 0.36) = 1.8856, two-sided p = 0.2.
  const std::vector<double> x = {1, 2, 3, 4}, y = {2, 1, 3, 4};
  EXPECT_NEAR(pearson(x, y).p_value, 0.2, 1e-9);
  EXPECT_NEAR(spearman(x, y).p_value, 0.2, 1e-9);
}

TEST(Correlation, KendallMatchesBruteForceWithTies) {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 3 + gen() % 6;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(gen() % 4);
      y[i] = static_cast<double>(gen() % 4);
    }
    const auto tied = [](const std::vector<double>& v) { return std::set<double>(v.begin(), v.end()).size() == 1; };
    if (tied(x) || tied(y)) {
      ASSERT_EQ(code_of([&] { kendall(x, y); }), ErrorCode::DegenerateInput);
      continue;
    }
    const Correlation k = kendall(x, y);
    ASSERT_NEAR(k.coefficient, kendall_oracle(x, y), 1e-12);
    ASSERT_GE(k.p_value, 0.0);
    ASSERT_LE(k.p_value, 1.0);
  }
}

TEST(Correlation, RankMethodsInvariantUnderMonotoneMaps) {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> d;
  std::vector<double> x(40), y(40), fx(40);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = d(gen);
    y[i] = x[i] + d(gen);
    fx[i] = std::exp(3 * x[i]) + 7;
  }
  EXPECT_NEAR(spearman(fx, y).coefficient, spearman(x, y).coefficient, 1e-12);
  EXPECT_NEAR(kendall(fx, y).coefficient, kendall(x, y).coefficient, 1e-12);
}

TEST(Correlation, Errors) {
  EXPECT_EQ(code_of([] { pearson({1, 2}, {1, 2}); }), ErrorCode::InsufficientData);
  EXPECT_EQ(code_of([] { pearson({1, 1, 1}, {1, 2, 3}); }), ErrorCode::DegenerateInput);
  EXPECT_EQ(code_of([] { spearman({1, 2, 3}, {4, 4, 4}); }), ErrorCode::DegenerateInput);
  EXPECT_EQ(code_of([] { kendall({1, 1, 1}, {1, 2, 3}); }), ErrorCode::DegenerateInput);
  EXPECT_EQ(code_of([] { parse_method("tau"); }), ErrorCode::Configuration);
  EXPECT_EQ(parse_method("kendall"), CorrelationMethod::Kendall);
}

TEST(FractionalRanks, AveragesTies) {
  EXPECT_EQ(fractional_ranks({10, 20, 10, 30}), (std::vector<double>{1.5, 3, 1.5, 4}));
}

TEST(PairwiseAccuracy, Examples) {
  EXPECT_EQ(pairwise_accuracy({{0.9, 0.1, Choice::B}, {0.2, 0.8, Choice::C}}), 1.0);
  EXPECT_EQ(pairwise_accuracy({{0.9, 0.1, Choice::C}, {0.2, 0.8, Choice::C}}), 0.5);
  EXPECT_EQ(pairwise_accuracy({{0.5, 0.5, Choice::B}, {0.2, 0.8, Choice::C}}), 0.75);
  EXPECT_EQ(code_of([] { pairwise_accuracy({}); }), ErrorCode::InsufficientData);
}

TEST(PairwiseAccuracy, InvariantUnderMonotoneTransform) {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(-2, 2);
  std::vector<PairwiseTriple> t, mapped;
  for (int i = 0; i < 500; ++i) {
    const double b = std::round(u(gen) * 4) / 4, c = std::round(u(gen) * 4) / 4;
    const Choice ch = gen() % 2 ? Choice::B : Choice::C;
    t.push_back({b, c, ch});
    mapped.push_back({std::tanh(b) * 5 + 1, std::tanh(c) * 5 + 1, ch});
  }
  EXPECT_EQ(pairwise_accuracy(t), pairwise_accuracy(mapped));
}

TEST(PairwiseReport, CategoryMean) {
  const PairwiseReport r = pairwise_report({{"HC", {1, 0, Choice::B}},
                                            {"HC", {1, 0, Choice::B}},
                                            {"HI", {1, 0, Choice::C}},
                                            {"HI", {1, 0, Choice::B}},
                                            {"HI", {1, 1, Choice::B}},
                                            {"HI", {0, 1, Choice::C}}});
  EXPECT_EQ(r.by_category.at("HC"), 1.0);
  EXPECT_EQ(r.by_category.at("HI"), 0.625);
  EXPECT_EQ(r.counts.at("HI"), 4u);
  EXPECT_EQ(r.overall, 0.8125);
  EXPECT_EQ(r.n, 6u);
}

TEST(Ellipse, ContainsAndArea) {
  Eigen::Matrix2d cov;
  cov << 4, 0, 0, 1;
  const Ellipse e(Point2(1, 1), cov, 1.0);
  EXPECT_TRUE(e.contains(Point2(2.99, 1)));
  EXPECT_FALSE(e.contains(Point2(3.01, 1)));
  EXPECT_TRUE(e.contains(Point2(1, 1.99)));
  EXPECT_NEAR(e.area(), 2 * std::numbers::pi, 1e-12);
  EXPECT_EQ(code_of([] { Ellipse(Point2::Zero(), Eigen::Matrix2d::Zero()); }), ErrorCode::DegenerateInput);
}

TEST(FitMoments, PopulationCovariance) {
  const Moments2 m = fit_moments({Point2(0, 0), Point2(2, 0), Point2(0, 2), Point2(2, 2)});
  EXPECT_TRUE(m.mean.isApprox(Point2(1, 1)));
  EXPECT_NEAR(m.covariance(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(m.covariance(0, 1), 0.0, 1e-15);
  EXPECT_EQ(code_of([] { fit_moments({Point2(0, 0)}); }), ErrorCode::InsufficientPoints);
}

TEST(OverlapFraction, MatchesGridIntegration) {
  std::mt19937_64 gen(1234);
  for (int trial = 0; trial < 20; ++trial) {
    const Ellipse m = random_ellipse(gen), h = random_ellipse(gen);
    EXPECT_NEAR(overlap_fraction(m, h, 400'000, 100 + trial), overlap_grid(m, h), 0.005) << trial;
  }
}

TEST(OverlapFraction, IdenticalAndDisjoint) {
  Eigen::Matrix2d cov;
  cov << 1, 0.3, 0.3, 0.5;
  const Ellipse a(Point2(0, 0), cov), far(Point2(50, 50), cov);
  EXPECT_NEAR(overlap_fraction(a, a), 1.0, 0.002);
  EXPECT_EQ(overlap_fraction(a, far, 10'000), 0.0);
  EXPECT_EQ(code_of([&] { overlap_fraction(a, a, 0); }), ErrorCode::InsufficientData);
}

TEST(OverlapFraction, SeedReproducibleAndShiftInvariant) {
  std::mt19937_64 gen(77);
  const Ellipse m = random_ellipse(gen), h = random_ellipse(gen);
  const double a = overlap_fraction(m, h, 100'000, 5);
  EXPECT_EQ(overlap_fraction(m, h, 100'000, 5), a);
  const Point2 shift(3.25, -1.5);
  const Ellipse ms(m.center + shift, m.covariance), hs(h.center + shift, h.covariance);
  EXPECT_NEAR(overlap_fraction(ms, hs, 100'000, 5), a, 0.005);
}

namespace {

std::map<std::string, std::vector<StandardizedTriple>> two_captioners() {
  std::map<std::string, std::vector<StandardizedTriple>> s;
  std::mt19937_64 gen(3);
  std::normal_distribution<double> d;
  for (int i = 0; i < 200; ++i) {
    s["human"].push_back({d(gen), d(gen), d(gen)});
    s["model"].push_back({d(gen) * 0.5 - 1, d(gen) * 0.5 - 1, d(gen) - 2});
  }
  return s;
}

}  // namespace

TEST(SystemAnalysis, Summaries) {
  const auto scores = two_captioners();
  SystemAnalysisOptions opt;
  opt.samples = 100'000;
  const auto out = system_analysis(scores, opt);
  ASSERT_EQ(out.size(), 2u);
  const auto& human = out[0].name == "human" ? out[0] : out[1];
  const auto& model = out[0].name == "human" ? out[1] : out[0];
  EXPECT_EQ(human.overlap_with_human, 1.0);
  EXPECT_GT(model.overlap_with_human, 0.0);
  EXPECT_LT(model.overlap_with_human, 1.0);
  double penalty = 0;
  for (const auto& t : scores.at("model")) penalty += std::min(t.mima - kSemanticThreshold, 0.0);
  EXPECT_DOUBLE_EQ(model.total_grammar_penalty, penalty);
  EXPECT_LT(model.total_grammar_penalty, 0.0);
  EXPECT_EQ(model.count, 200u);
  EXPECT_EQ(system_analysis(scores, opt)[1].overlap_with_human, out[1].overlap_with_human);

  const nlohmann::json j = summaries_to_json(out);
  EXPECT_EQ(j.size(), 2u);
  EXPECT_TRUE(j[0].contains("overlap_with_human"));
  const std::string csv = points_csv(scores);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 401);
  const std::string svg = scatter_svg(scores, out);
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(SystemAnalysis, Errors) {
  auto scores = two_captioners();
  SystemAnalysisOptions opt;
  opt.human_system = "people";
  EXPECT_EQ(code_of([&] { system_analysis(scores, opt); }), ErrorCode::MissingHumanBaseline);
  scores["tiny"] = {{0, 0, 0}};
  EXPECT_EQ(code_of([&] { system_analysis(scores); }), ErrorCode::InsufficientPoints);
}

TEST(SystemAnalysis, SvgEscapesNames) {
  std::map<std::string, std::vector<StandardizedTriple>> s = {{"human", {{0, 0, 0}, {1, 1, 0}, {0, 1, 0}}},
                                                              {"a<b&c", {{0, 0, 0}, {1, 1, 0}, {1, 0, 0}}}};
  SystemAnalysisOptions opt;
  opt.samples = 1000;
  const std::string svg = scatter_svg(s, system_analysis(s, opt));
  EXPECT_NE(svg.find("a&lt;b&amp;c"), std::string::npos);
  EXPECT_EQ(svg.find("a<b"), std::string::npos);
}

namespace {

text::WordSequence words(const std::string& s) { return text::tokenize_words(s); }

const std::vector<std::string> kCorpus = {"alpha", "beta", "gamma", "delta", "epsilon"};

}  // namespace

TEST(Degrade, ZeroAndFullFractions) {
  const auto s = words("the quick brown fox jumps over the lazy dog");
  EXPECT_EQ(degrade(s, 0.0, kCorpus, 7).words, s.words);
  const auto all = degrade(s, 1.0, kCorpus, 7);
  for (const auto& w : all.words) EXPECT_NE(std::find(kCorpus.begin(), kCorpus.end(), w), kCorpus.end());
  EXPECT_EQ(code_of([&] { degrade(s, 1.5, kCorpus, 7); }), ErrorCode::Configuration);
  EXPECT_EQ(code_of([&] { degrade(s, 0.5, {}, 7); }), ErrorCode::InsufficientData);
}

TEST(Degrade, CountUsesCeiling) {
  const std::vector<std::string> other = {"zzz"};
  const auto s = words("a b c d e f g h i j");
  auto changed = [&](double f) {
    const auto d = degrade(s, f, other, 7);
    std::size_t n = 0;
    for (std::size_t i = 0; i < s.size(); ++i) n += d.words[i] != s.words[i];
    return n;
  };
  EXPECT_EQ(changed(0.02), 1u);
  EXPECT_EQ(changed(0.3), 3u);
  EXPECT_EQ(changed(0.31), 4u);
  EXPECT_EQ(changed(1.0), 10u);
}

TEST(Degrade, Golden) {
  EXPECT_EQ(degrade(words("one two three four"), 0.5, kCorpus, kDegradeSeed).joined(), "one beta beta four");
}

TEST(Degrade, LargerFractionReplacesSuperset) {
  const std::vector<std::string> other = {"zzz"};
  std::mt19937_64 gen(2);
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    for (std::size_t k = 0, n = 1 + gen() % 30; k < n; ++k) text += "w" + std::to_string(k) + " ";
    const auto s = words(text);
    std::vector<std::size_t> prev;
    for (double f : {0.0, 0.1, 0.25, 0.5, 0.75, 1.0}) {
      const auto d = degrade(s, f, other, trial);
      std::vector<std::size_t> pos;
      for (std::size_t i = 0; i < s.size(); ++i)
        if (d.words[i] != s.words[i]) pos.push_back(i);
      ASSERT_TRUE(std::includes(pos.begin(), pos.end(), prev.begin(), prev.end()));
      prev = pos;
    }
  }
}

TEST(SampleSentences, SplitsAndSamples) {
  EXPECT_EQ(split_sentences("A dog ran. It was 3.5 m away! Why? end"),
            (std::vector<std::string>{"A dog ran.", " It was 3.5 m away!", " Why?", " end"}));
  const std::vector<std::string> paras = {"One. Two. Three.", "Four. Five."};
  const auto s = sample_sentences(paras, 5, 1);
  EXPECT_EQ(s.size(), 5u);
  EXPECT_EQ(sample_sentences(paras, 3, 1)[0].words, sample_sentences(paras, 3, 1)[0].words);
  EXPECT_EQ(code_of([&] { sample_sentences(paras, 6, 1); }), ErrorCode::InsufficientData);
  EXPECT_EQ(word_set(paras), (std::vector<std::string>{"five", "four", "one", "three", "two"}));
}

TEST(DegradationProbe, UniformFixtureIsFlat) {
  std::vector<text::WordSequence> sentences;
  for (int i = 0; i < 25; ++i) sentences.push_back(words("a dog number " + std::to_string(i) + " runs far"));
  const auto bundle = runtime::ModelBundle::fixture("uniform", 2, 2);
  const DegradationReport r = degradation_probe(sentences, kCorpus, {0.0, 0.1, 0.5, 1.0}, bundle);
  ASSERT_EQ(r.curve.size(), 4u);
  for (const auto& p : r.curve) EXPECT_EQ(p.mean_f_mima, 1.0);
  EXPECT_TRUE(r.non_increasing);
  EXPECT_FALSE(r.spearman.has_value());
  sentences.pop_back();
  EXPECT_EQ(code_of([&] { degradation_probe(sentences, kCorpus, {0.0}, bundle); }), ErrorCode::InsufficientData);
}

TEST(CriticalFailure, Counts) {
  const std::vector<double> human = {1, 2, 3, 4};
  const std::vector<ImageCaptionSet> images = {
      {{1, 2, 3, 4}, {4, 3, 2, 1}},  // disparity 2: failure
      {{1, 2, 3, 4}, {1, 2, 3, 4}},  // 0
      {{1, 2, 3, 4}, {2, 2, 2, 2}},  // skipped
      {{1, 2, 3, 4}, {1, 3, 2, 4}}};
  const FailureReport r = critical_failure_rate(human, images);
  EXPECT_EQ(r.evaluated, 3u);
  EXPECT_EQ(r.failures, 1u);
  EXPECT_NEAR(r.rate, 1.0 / 3, 1e-15);
  EXPECT_NEAR(r.disparities[0], 2.0, 1e-12);
  EXPECT_EQ(code_of([&] { critical_failure_rate(human, {{{1, 2}, {1, 2}}}); }), ErrorCode::MalformedInput);
}
