#pragma once

#include <array>
#include <climits>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "smurf/error.hpp"
#include "smurf/runtime/utf8.hpp"

namespace smurf::runtime {

/// Byte-level BPE in the GPT-2 / RoBERTa style (vocab.json + merges.txt).
///
/// Pre-tokenization follows the GPT-2 splitting pattern. Letter detection is
/// ASCII letters plus every non-ASCII code point that is not whitespace or
/// punctuation, which matches the full Unicode classes on caption text.
class ByteLevelBpeTokenizer {
 public:
  struct Options {
    std::string unk_token = "<unk>";
    std::string start_token = "<s>";
    std::string end_token = "</s>";
  };

  ByteLevelBpeTokenizer(std::unordered_map<std::string, std::int64_t> vocab,
                        std::vector<std::pair<std::string, std::string>> merges, Options options)
      : vocab_(std::move(vocab)), options_(std::move(options)) {
    for (std::size_t rank = 0; rank < merges.size(); ++rank)
      ranks_.emplace(merges[rank].first + '\x01' + merges[rank].second, static_cast<int>(rank));
    start_id_ = require(options_.start_token);
    end_id_ = require(options_.end_token);
    auto unk = vocab_.find(options_.unk_token);
    unk_id_ = unk == vocab_.end() ? -1 : unk->second;
    build_byte_table();
  }

  static ByteLevelBpeTokenizer from_files(const std::string& vocab_path, const std::string& merges_path,
                                          Options options) {
    std::ifstream vin(vocab_path);
    if (!vin) throw Error(ErrorCode::RuntimeFailure, "cannot open vocabulary " + vocab_path);
    nlohmann::json vocab_json;
    try {
      vin >> vocab_json;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::RuntimeFailure, "bad vocabulary " + vocab_path + ": " + e.what());
    }
    std::unordered_map<std::string, std::int64_t> vocab;
    for (auto it = vocab_json.begin(); it != vocab_json.end(); ++it)
      vocab.emplace(it.key(), it.value().get<std::int64_t>());

    std::ifstream min(merges_path);
    if (!min) throw Error(ErrorCode::RuntimeFailure, "cannot open merges " + merges_path);
    std::vector<std::pair<std::string, std::string>> merges;
    std::string line;
    while (std::getline(min, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line.rfind("#version", 0) == 0) continue;
      auto space = line.find(' ');
      if (space == std::string::npos) continue;
      merges.emplace_back(line.substr(0, space), line.substr(space + 1));
    }
    return ByteLevelBpeTokenizer(std::move(vocab), std::move(merges), std::move(options));
  }

  std::vector<std::string> tokenize(std::string_view text) const {
    std::vector<std::string> out;
    for (const std::string& chunk : pre_tokenize(text)) {
      std::string mapped;
      for (unsigned char byte : chunk) mapped += byte_symbols_[byte];
      for (auto& piece : bpe(mapped)) out.push_back(std::move(piece));
    }
    return out;
  }

  std::int64_t id_of(const std::string& piece) const {
    auto it = vocab_.find(piece);
    if (it != vocab_.end()) return it->second;
    if (unk_id_ < 0) throw Error(ErrorCode::RuntimeFailure, "piece not in vocabulary: " + piece);
    return unk_id_;
  }

  std::int64_t start_id() const { return start_id_; }
  std::int64_t end_id() const { return end_id_; }
  const std::string& start_token() const { return options_.start_token; }
  const std::string& end_token() const { return options_.end_token; }

  /// GPT-2 splitting: contractions, ` ?letters`, ` ?digits`, ` ?other`, whitespace runs.
  static std::vector<std::string> pre_tokenize(std::string_view text) {
    const std::vector<char32_t> cps = utf8::decode(text);
    const std::size_t n = cps.size();
    std::vector<std::string> out;
    auto emit = [&](std::size_t b, std::size_t e) {
      out.push_back(utf8::encode({cps.begin() + static_cast<std::ptrdiff_t>(b),
                                  cps.begin() + static_cast<std::ptrdiff_t>(e)}));
    };
    auto run_of = [&](std::size_t from, auto pred) {
      std::size_t e = from;
      while (e < n && pred(cps[e])) ++e;
      return e;
    };
    std::size_t i = 0;
    while (i < n) {
      if (cps[i] == '\'') {
        std::size_t len = contraction_length(cps, i);
        if (len) {
          emit(i, i + len);
          i += len;
          continue;
        }
      }
      std::size_t body = (cps[i] == ' ' && i + 1 < n && !utf8::is_whitespace(cps[i + 1])) ? i + 1 : i;
      if (body < n && !utf8::is_whitespace(cps[body])) {
        std::size_t e;
        if (is_letter(cps[body]))
          e = run_of(body, is_letter);
        else if (is_digit(cps[body]))
          e = run_of(body, is_digit);
        else
          e = run_of(body, [](char32_t c) { return !utf8::is_whitespace(c) && !is_letter(c) && !is_digit(c); });
        emit(i, e);
        i = e;
        continue;
      }
      std::size_t e = run_of(i, utf8::is_whitespace);
      // Leave the final space of a run to prefix the following word.
      if (e < n && e - i >= 2) --e;
      emit(i, e);
      i = e;
    }
    return out;
  }

 private:
  static bool is_digit(char32_t c) { return c >= '0' && c <= '9'; }

  static bool is_letter(char32_t c) {
    if (c < 0x80) return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
    return !utf8::is_whitespace(c) && !utf8::is_punctuation(c) && !utf8::is_control(c);
  }

  static std::size_t contraction_length(const std::vector<char32_t>& cps, std::size_t i) {
    auto at = [&](std::size_t k) -> char32_t { return i + k < cps.size() ? cps[i + k] : 0; };
    if (at(1) == 'r' && at(2) == 'e') return 3;
    if (at(1) == 'v' && at(2) == 'e') return 3;
    if (at(1) == 'l' && at(2) == 'l') return 3;
    if (at(1) == 's' || at(1) == 't' || at(1) == 'm' || at(1) == 'd') return 2;
    return 0;
  }

  std::int64_t require(const std::string& token) const {
    auto it = vocab_.find(token);
    if (it == vocab_.end())
      throw Error(ErrorCode::RuntimeFailure, "vocabulary lacks special token " + token);
    return it->second;
  }

  // GPT-2 bytes_to_unicode: printable bytes map to themselves, the rest to U+0100 onward.
  void build_byte_table() {
    int next = 0;
    for (int b = 0; b < 256; ++b) {
      bool printable = (b >= '!' && b <= '~') || (b >= 0xA1 && b <= 0xAC) || (b >= 0xAE && b <= 0xFF);
      char32_t cp = printable ? static_cast<char32_t>(b) : static_cast<char32_t>(256 + next++);
      std::string s;
      utf8::append(s, cp);
      byte_symbols_[static_cast<std::size_t>(b)] = s;
    }
  }

  std::vector<std::string> bpe(const std::string& mapped) const {
    std::vector<std::string> symbols;
    for (char32_t cp : utf8::decode(mapped)) {
      std::string s;
      utf8::append(s, cp);
      symbols.push_back(std::move(s));
    }
    while (symbols.size() > 1) {
      int best_rank = INT_MAX;
      std::size_t best = 0;
      for (std::size_t k = 0; k + 1 < symbols.size(); ++k) {
        auto it = ranks_.find(symbols[k] + '\x01' + symbols[k + 1]);
        if (it != ranks_.end() && it->second < best_rank) {
          best_rank = it->second;
          best = k;
        }
      }
      if (best_rank == INT_MAX) break;
      const std::string first = symbols[best];
      const std::string second = symbols[best + 1];
      std::vector<std::string> merged;
      for (std::size_t k = 0; k < symbols.size();) {
        if (k + 1 < symbols.size() && symbols[k] == first && symbols[k + 1] == second) {
          merged.push_back(first + second);
          k += 2;
        } else {
          merged.push_back(symbols[k]);
          ++k;
        }
      }
      symbols = std::move(merged);
    }
    return symbols;
  }

  std::unordered_map<std::string, std::int64_t> vocab_;
  std::unordered_map<std::string, int> ranks_;
  Options options_;
  std::array<std::string, 256> byte_symbols_;
  std::int64_t start_id_ = 0;
  std::int64_t end_id_ = 0;
  std::int64_t unk_id_ = -1;
};

}  // namespace smurf::runtime
