#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "smurf/text/porter_stemmer.hpp"
#include "smurf/text/stopwords.hpp"

namespace smurf::text {

struct WordSequence {
  std::vector<std::string> words;
  std::string original_text;

  bool empty() const { return words.empty(); }
  std::size_t size() const { return words.size(); }

  std::string joined(char separator = ' ') const {
    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (i) out += separator;
      out += words[i];
    }
    return out;
  }

  friend bool operator==(const WordSequence& a, const WordSequence& b) { return a.words == b.words; }
};

/// Sorted set of unique stems.
using ConceptSet = std::set<std::string>;

namespace detail {

// Bytes >= 0x80 belong to multi-byte UTF-8 sequences and are kept inside words.
inline bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

inline bool is_joiner(unsigned char c) { return c == '\'' || c == '-'; }

inline char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

}  // namespace detail

/// Words are maximal runs of letters/digits; an apostrophe or hyphen is kept
/// only when it sits between two word characters. Everything else separates.
inline WordSequence tokenize_words(std::string_view text) {
  WordSequence seq;
  seq.original_text = std::string(text);
  std::string current;
  const std::size_t n = text.size();
  for (std::size_t i = 0; i < n; ++i) {
    auto c = static_cast<unsigned char>(text[i]);
    if (detail::is_word_byte(c)) {
      current += detail::ascii_lower(static_cast<char>(c));
    } else if (detail::is_joiner(c) && !current.empty() && i + 1 < n &&
               detail::is_word_byte(static_cast<unsigned char>(text[i + 1]))) {
      current += static_cast<char>(c);
    } else if (!current.empty()) {
      seq.words.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) seq.words.push_back(std::move(current));
  return seq;
}

inline WordSequence remove_stopwords(const WordSequence& seq,
                                     const StopwordList& stopwords = default_stopwords()) {
  WordSequence out;
  out.original_text = seq.original_text;
  std::copy_if(seq.words.begin(), seq.words.end(), std::back_inserter(out.words),
               [&](const std::string& w) { return !stopwords.contains(w); });
  return out;
}

/// Drops a trailing possessive ("dog's" -> "dog", "dogs'" -> "dogs") so the stemmer
/// sees a plain word.
inline std::string strip_possessive(std::string word) {
  if (word.size() > 2 && word.compare(word.size() - 2, 2, "'s") == 0) {
    word.resize(word.size() - 2);
  } else if (word.size() > 1 && word.back() == '\'') {
    word.pop_back();
  }
  return word;
}

inline ConceptSet extract_concepts(const WordSequence& seq,
                                   const StopwordList& stopwords = default_stopwords()) {
  ConceptSet concepts;
  const PorterStemmer stem;
  for (const std::string& word : remove_stopwords(seq, stopwords).words) {
    std::string stemmed = stem(strip_possessive(word));
    if (!stemmed.empty()) concepts.insert(std::move(stemmed));
  }
  return concepts;
}

inline ConceptSet extract_concepts(std::string_view text,
                                   const StopwordList& stopwords = default_stopwords()) {
  return extract_concepts(tokenize_words(text), stopwords);
}

}  // namespace smurf::text
