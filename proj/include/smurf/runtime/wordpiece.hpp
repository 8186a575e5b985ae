#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "smurf/error.hpp"
#include "smurf/runtime/utf8.hpp"

namespace smurf::runtime {

/// BERT-style tokenizer: basic cleanup and punctuation splitting followed by
/// greedy longest-match-first WordPiece with "##" continuation pieces.
///
/// Accent stripping covers the Latin-1 range only; other code points pass
/// through lowercasing untouched.
class WordPieceTokenizer {
 public:
  struct Options {
    bool lowercase = true;
    std::string unk_token = "[UNK]";
    std::string start_token = "[CLS]";
    std::string end_token = "[SEP]";
    std::size_t max_chars_per_word = 100;
  };

  WordPieceTokenizer(std::unordered_map<std::string, std::int64_t> vocab, Options options)
      : vocab_(std::move(vocab)), options_(std::move(options)) {
    unk_id_ = require(options_.unk_token);
    start_id_ = require(options_.start_token);
    end_id_ = require(options_.end_token);
  }

  static WordPieceTokenizer from_file(const std::string& vocab_path, Options options) {
    std::ifstream in(vocab_path);
    if (!in) throw Error(ErrorCode::RuntimeFailure, "cannot open vocabulary " + vocab_path);
    std::unordered_map<std::string, std::int64_t> vocab;
    std::string line;
    std::int64_t id = 0;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      vocab.emplace(line, id++);
    }
    return WordPieceTokenizer(std::move(vocab), std::move(options));
  }

  /// Pieces for `text` without specials.
  std::vector<std::string> tokenize(std::string_view text) const {
    std::vector<std::string> pieces;
    for (const auto& word : basic_tokenize(text)) word_piece(word, pieces);
    return pieces;
  }

  std::int64_t id_of(const std::string& piece) const {
    auto it = vocab_.find(piece);
    return it == vocab_.end() ? unk_id_ : it->second;
  }

  std::int64_t start_id() const { return start_id_; }
  std::int64_t end_id() const { return end_id_; }
  const std::string& start_token() const { return options_.start_token; }
  const std::string& end_token() const { return options_.end_token; }

 private:
  std::int64_t require(const std::string& token) const {
    auto it = vocab_.find(token);
    if (it == vocab_.end())
      throw Error(ErrorCode::RuntimeFailure, "vocabulary lacks special token " + token);
    return it->second;
  }

  static char32_t fold(char32_t cp, bool lowercase) {
    if (!lowercase) return cp;
    if (cp >= 'A' && cp <= 'Z') return cp + 32;
    if (cp < 0xC0 || cp > 0xFF) return cp;
    // NFD base letter for Latin-1 letters with combining marks.
    static constexpr char32_t table[64] = {
        'a', 'a', 'a', 'a', 'a', 'a', 0xE6, 'c', 'e', 'e', 'e', 'e', 'i', 'i', 'i', 'i',
        0xF0, 'n', 'o', 'o', 'o', 'o', 'o', 0xD7, 0xF8, 'u', 'u', 'u', 'u', 'y', 0xFE, 0xDF,
        'a', 'a', 'a', 'a', 'a', 'a', 0xE6, 'c', 'e', 'e', 'e', 'e', 'i', 'i', 'i', 'i',
        0xF0, 'n', 'o', 'o', 'o', 'o', 'o', 0xF7, 0xF8, 'u', 'u', 'u', 'u', 'y', 0xFE, 'y'};
    return table[cp - 0xC0];
  }

  std::vector<std::vector<char32_t>> basic_tokenize(std::string_view text) const {
    std::vector<std::vector<char32_t>> words;
    std::vector<char32_t> current;
    auto flush = [&] {
      if (!current.empty()) words.push_back(std::move(current));
      current.clear();
    };
    for (char32_t cp : utf8::decode(text)) {
      if (cp == 0 || utf8::is_control(cp)) continue;
      // Combining diacritics vanish under lowercase+NFD.
      if (options_.lowercase && cp >= 0x300 && cp <= 0x36F) continue;
      if (utf8::is_whitespace(cp)) {
        flush();
      } else if (utf8::is_punctuation(cp) || utf8::is_cjk(cp)) {
        flush();
        words.push_back({cp});
      } else {
        current.push_back(fold(cp, options_.lowercase));
      }
    }
    flush();
    return words;
  }

  void word_piece(const std::vector<char32_t>& word, std::vector<std::string>& out) const {
    if (word.size() > options_.max_chars_per_word) {
      out.push_back(options_.unk_token);
      return;
    }
    std::vector<std::string> pieces;
    std::size_t start = 0;
    while (start < word.size()) {
      std::size_t end = word.size();
      std::string found;
      while (start < end) {
        std::string candidate = utf8::encode({word.begin() + static_cast<std::ptrdiff_t>(start),
                                              word.begin() + static_cast<std::ptrdiff_t>(end)});
        if (start > 0) candidate = "##" + candidate;
        if (vocab_.count(candidate)) {
          found = std::move(candidate);
          break;
        }
        --end;
      }
      if (found.empty()) {
        out.push_back(options_.unk_token);
        return;
      }
      pieces.push_back(std::move(found));
      start = end;
    }
    out.insert(out.end(), pieces.begin(), pieces.end());
  }

  std::unordered_map<std::string, std::int64_t> vocab_;
  Options options_;
  std::int64_t unk_id_ = 0;
  std::int64_t start_id_ = 0;
  std::int64_t end_id_ = 0;
};

}  // namespace smurf::runtime
