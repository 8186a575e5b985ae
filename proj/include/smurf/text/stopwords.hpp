#pragma once

#include <array>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_set>

#include "smurf/error.hpp"

namespace smurf::text {

inline constexpr std::string_view kStopwordListVersion = "en-v1";

// Mirrors data/stopwords-en-v1.txt; tests keep the two in sync.
inline constexpr std::array<std::string_view, 153> kEnglishStopwords = {
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "your",
    "yours", "yourself", "yourselves", "he", "him", "his", "himself", "she", "her",
    "hers", "herself", "it", "its", "itself", "they", "them", "their", "theirs",
    "themselves", "what", "which", "who", "whom", "this", "that", "these", "those",
    "am", "is", "are", "was", "were", "be", "been", "being", "have", "has", "had",
    "having", "do", "does", "did", "doing", "a", "an", "the", "and", "but", "if", "or",
    "because", "as", "until", "while", "of", "at", "by", "for", "with", "about",
    "against", "between", "into", "through", "during", "before", "after", "above",
    "below", "to", "from", "up", "down", "in", "out", "on", "off", "over", "under",
    "again", "further", "then", "once", "here", "there", "when", "where", "why", "how",
    "all", "any", "both", "each", "few", "more", "most", "other", "some", "such", "no",
    "nor", "not", "only", "own", "same", "so", "than", "too", "very", "s", "t", "can",
    "will", "just", "don", "should", "now", "don't", "should've", "aren't", "couldn't",
    "didn't", "doesn't", "hadn't", "hasn't", "haven't", "isn't", "mightn't", "mustn't",
    "needn't", "shan't", "shouldn't", "wasn't", "weren't", "won't", "wouldn't", "it's",
    "you're", "you've", "you'll", "you'd", "she's", "that'll"};

class StopwordList {
 public:
  StopwordList() {
    for (std::string_view w : kEnglishStopwords) words_.emplace(w);
  }

  explicit StopwordList(std::unordered_set<std::string> words) : words_(std::move(words)) {}

  /// One lowercase word per line; blank lines and `#` comments are skipped.
  static StopwordList from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Configuration, "cannot open stopword list " + path);
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
        line.pop_back();
      std::size_t start = line.find_first_not_of(" \t");
      if (start == std::string::npos || line[start] == '#') continue;
      words.insert(line.substr(start));
    }
    return StopwordList(std::move(words));
  }

  bool contains(std::string_view word) const { return words_.count(std::string(word)) != 0; }
  std::size_t size() const { return words_.size(); }
  const std::unordered_set<std::string>& words() const { return words_; }

 private:
  std::unordered_set<std::string> words_;
};

inline const StopwordList& default_stopwords() {
  static const StopwordList list;
  return list;
}

}  // namespace smurf::text
