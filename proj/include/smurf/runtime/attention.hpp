#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "smurf/error.hpp"

namespace smurf::runtime {

struct SubwordEncoding {
  std::vector<std::int64_t> token_ids;  // includes start and end specials
  std::vector<std::string> tokens;
  bool truncated = false;
  std::vector<std::string> warnings;

  std::size_t length() const { return token_ids.size(); }
};

/// Read-only view of one n x n head matrix stored row-major.
class HeadView {
 public:
  HeadView(std::span<const double> values, std::size_t n) : values_(values), n_(n) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  std::span<const double> values() const { return values_; }
  std::span<const double> row(std::size_t i) const { return values_.subspan(i * n_, n_); }

 private:
  std::span<const double> values_;
  std::size_t n_;
};

/// Attention probabilities for every layer and head, [layer][head][i][j] row-major.
class AttentionStack {
 public:
  AttentionStack() = default;
  AttentionStack(std::size_t num_layers, std::size_t num_heads, std::size_t seq_len,
                 std::string model_id = {})
      : num_layers_(num_layers),
        num_heads_(num_heads),
        seq_len_(seq_len),
        data_(num_layers * num_heads * seq_len * seq_len, 0.0),
        model_id_(std::move(model_id)) {}

  std::size_t num_layers() const { return num_layers_; }
  std::size_t num_heads() const { return num_heads_; }
  std::size_t seq_len() const { return seq_len_; }
  const std::string& model_id() const { return model_id_; }
  void set_model_id(std::string id) { model_id_ = std::move(id); }

  HeadView head(std::size_t layer, std::size_t h) const {
    return HeadView(std::span<const double>(data_).subspan(offset(layer, h), seq_len_ * seq_len_),
                    seq_len_);
  }

  std::span<double> mutable_head(std::size_t layer, std::size_t h) {
    return std::span<double>(data_).subspan(offset(layer, h), seq_len_ * seq_len_);
  }

  const std::vector<double>& data() const { return data_; }

  friend bool operator==(const AttentionStack& a, const AttentionStack& b) {
    return a.num_layers_ == b.num_layers_ && a.num_heads_ == b.num_heads_ &&
           a.seq_len_ == b.seq_len_ && a.data_ == b.data_;
  }

 private:
  std::size_t offset(std::size_t layer, std::size_t h) const {
    return (layer * num_heads_ + h) * seq_len_ * seq_len_;
  }

  std::size_t num_layers_ = 0;
  std::size_t num_heads_ = 0;
  std::size_t seq_len_ = 0;
  std::vector<double> data_;
  std::string model_id_;
};

inline constexpr double kRowSumTolerance = 1e-4;

inline bool is_row_stochastic(const HeadView& head, double tolerance = kRowSumTolerance) {
  for (std::size_t i = 0; i < head.size(); ++i) {
    double sum = 0.0;
    for (double v : head.row(i)) {
      if (!(v >= 0.0)) return false;
      sum += v;
    }
    if (std::abs(sum - 1.0) > tolerance) return false;
  }
  return true;
}

inline void require_row_stochastic(const AttentionStack& stack, double tolerance = kRowSumTolerance) {
  for (std::size_t l = 0; l < stack.num_layers(); ++l)
    for (std::size_t h = 0; h < stack.num_heads(); ++h)
      if (!is_row_stochastic(stack.head(l, h), tolerance))
        throw Error(ErrorCode::BadDistribution, "layer " + std::to_string(l) + " head " +
                                                    std::to_string(h) + " is not row-stochastic");
}

}  // namespace smurf::runtime
