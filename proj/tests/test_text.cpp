#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "smurf/error.hpp"
#include "smurf/text/porter_stemmer.hpp"
#include "smurf/text/preprocess.hpp"
#include "smurf/text/stopwords.hpp"
#include "test_support.hpp"

using namespace smurf;
using namespace smurf::text;
using Words = std::vector<std::string>;

TEST(TokenizeWords, BasicSplit) { EXPECT_EQ(tokenize_words("A dog runs.").words, (Words{"a", "dog", "runs"})); }

TEST(TokenizeWords, EmptyInput) {
  EXPECT_TRUE(tokenize_words("").empty());
  EXPECT_TRUE(tokenize_words("  \t\n ").empty());
  EXPECT_TRUE(tokenize_words("... -- !?").empty());
}

TEST(TokenizeWords, KeepsInteriorHyphensAndApostrophes) {
  EXPECT_EQ(tokenize_words("state-of-the-art, really").words, (Words{"state-of-the-art", "really"}));
  EXPECT_EQ(tokenize_words("Don't stop; it's the dog's bone").words,
            (Words{"don't", "stop", "it's", "the", "dog's", "bone"}));
}

TEST(TokenizeWords, DropsEdgeJoiners) {
  EXPECT_EQ(tokenize_words("'quoted' well- -ish dogs'").words, (Words{"quoted", "well", "ish", "dogs"}));
  EXPECT_EQ(tokenize_words("a--b").words, (Words{"a", "b"}));
}

TEST(TokenizeWords, DigitsAndNonAscii) {
  EXPECT_EQ(tokenize_words("2 Cafés, 10:30").words, (Words{"2", "cafés", "10", "30"}));
}

TEST(TokenizeWords, KeepsOriginalText) {
  const std::string text = "Hello, World";
  EXPECT_EQ(tokenize_words(text).original_text, text);
}

TEST(TokenizeWords, PropertiesOnRandomText) {
  std::mt19937 gen(11);
  const std::string alphabet = "abcXYZ019 ,.;'-\t\n!?\"()";
  for (int trial = 0; trial < 2000; ++trial) {
    std::string text;
    const int len = static_cast<int>(gen() % 40);
    for (int i = 0; i < len; ++i) text += alphabet[gen() % alphabet.size()];
    const WordSequence seq = tokenize_words(text);
    for (const auto& w : seq.words) {
      ASSERT_FALSE(w.empty());
      ASSERT_EQ(w.find_first_of(" \t\n"), std::string::npos);
      ASSERT_FALSE(w.front() == '\'' || w.front() == '-' || w.back() == '\'' || w.back() == '-') << w;
      std::string lowered = w;
      std::transform(lowered.begin(), lowered.end(), lowered.begin(), [](unsigned char c) { return std::tolower(c); });
      ASSERT_EQ(lowered, w);
    }
    // Re-tokenizing the joined words is a fixed point.
    ASSERT_EQ(tokenize_words(seq.joined()).words, seq.words);
  }
}

TEST(RemoveStopwords, Examples) {
  EXPECT_EQ(remove_stopwords(tokenize_words("a dog runs")).words, (Words{"dog", "runs"}));
  EXPECT_TRUE(remove_stopwords(tokenize_words("the of a")).empty());
  EXPECT_EQ(remove_stopwords(tokenize_words("a brown schnauzer eats lasagna")).words,
            (Words{"brown", "schnauzer", "eats", "lasagna"}));
}

TEST(RemoveStopwords, IdempotentAndOrderPreserving) {
  const WordSequence seq = tokenize_words("The cat and the dog were sitting on top of a very old red wall");
  const WordSequence once = remove_stopwords(seq);
  EXPECT_EQ(remove_stopwords(once), once);
  EXPECT_EQ(once.words, (Words{"cat", "dog", "sitting", "top", "old", "red", "wall"}));
}

TEST(ExtractConcepts, Examples) {
  EXPECT_EQ(extract_concepts("the dog is running"), (ConceptSet{"dog", "run"}));
  EXPECT_TRUE(extract_concepts("").empty());
  // The stemmer keeps agentive forms apart.
  EXPECT_EQ(extract_concepts("runs running runner"), (ConceptSet{"run", "runner"}));
}

TEST(ExtractConcepts, PossessivesCollapse) {
  EXPECT_EQ(extract_concepts("the dog's bone"), (ConceptSet{"dog", "bone"}));
  EXPECT_EQ(extract_concepts("the dogs' bones"), extract_concepts("dogs bones"));
}

TEST(ExtractConcepts, StopwordPaddingAndSizeBound) {
  std::mt19937 gen(5);
  const Words content = {"dog", "running", "grass", "children", "played", "kites", "beach", "sunny", "red", "bus"};
  const auto& stop = kEnglishStopwords;
  for (int trial = 0; trial < 500; ++trial) {
    std::string text, padded;
    const int len = 1 + static_cast<int>(gen() % 8);
    for (int i = 0; i < len; ++i) {
      const std::string w = content[gen() % content.size()];
      text += w + " ";
      padded += std::string(stop[gen() % stop.size()]) + " " + w + " ";
    }
    padded += std::string(stop[gen() % stop.size()]);
    const WordSequence seq = tokenize_words(text);
    ASSERT_EQ(extract_concepts(seq), extract_concepts(padded));
    ASSERT_LE(extract_concepts(seq).size(), remove_stopwords(seq).size());
    for (const auto& c : extract_concepts(seq)) {
      bool found = false;
      for (const auto& w : remove_stopwords(seq).words) found = found || porter_stem(w) == c;
      ASSERT_TRUE(found) << c;
    }
  }
}

TEST(PorterStemmer, KnownStems) {
  const std::pair<const char*, const char*> cases[] = {
      {"caresses", "caress"}, {"ponies", "poni"},       {"ties", "ti"},          {"cats", "cat"},
      {"agreed", "agre"},     {"plastered", "plaster"}, {"motoring", "motor"},   {"sing", "sing"},
      {"hopping", "hop"},     {"falling", "fall"},      {"filing", "file"},      {"happy", "happi"},
      {"relational", "relat"}, {"generalizations", "gener"}, {"running", "run"}, {"runner", "runner"},
      {"archaeology", "archaeolog"}, {"a", "a"}, {"is", "is"}};
  for (const auto& [word, stem] : cases) EXPECT_EQ(porter_stem(word), stem) << word;
}

TEST(PorterStemmer, MatchesReferenceImplementation) {
  std::istringstream in(testutil::read_file(testutil::data_dir() / "porter_golden.tsv"));
  std::string line;
  std::size_t checked = 0;
  while (std::getline(in, line)) {
    const auto tab = line.find('\t');
    ASSERT_NE(tab, std::string::npos);
    const std::string word = line.substr(0, tab), stem = line.substr(tab + 1);
    EXPECT_EQ(porter_stem(word), stem) << word;
    ++checked;
  }
  EXPECT_GT(checked, 4000u);
}

TEST(Stopwords, DataFileMatchesEmbeddedList) {
  std::istringstream in(testutil::read_file(std::filesystem::path(SMURF_SOURCE_DIR) / "data" / "stopwords-en-v1.txt"));
  std::vector<std::string> file_words;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) file_words.push_back(line);
  ASSERT_EQ(file_words.size(), kEnglishStopwords.size());
  for (std::size_t i = 0; i < file_words.size(); ++i) EXPECT_EQ(file_words[i], kEnglishStopwords[i]);
  EXPECT_EQ(default_stopwords().size(), kEnglishStopwords.size());
}

TEST(Stopwords, FromFile) {
  testutil::TempDir dir;
  testutil::write_file(dir / "stop.txt", "# custom list\nfoo\n\n  bar \r\n");
  const StopwordList list = StopwordList::from_file((dir / "stop.txt").string());
  EXPECT_EQ(list.size(), 2u);
  EXPECT_TRUE(list.contains("foo"));
  EXPECT_TRUE(list.contains("bar"));
  EXPECT_FALSE(list.contains("the"));
  EXPECT_EQ(remove_stopwords(tokenize_words("the foo bar dog"), list).words, (Words{"the", "dog"}));
}

TEST(Stopwords, MissingFileIsConfigurationError) {
  try {
    StopwordList::from_file("/nonexistent/stopwords.txt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Configuration);
  }
}
