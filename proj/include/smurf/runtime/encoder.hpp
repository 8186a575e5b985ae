#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "smurf/error.hpp"
#include "smurf/runtime/attention.hpp"
#include "smurf/runtime/safetensors.hpp"

namespace smurf::runtime {

enum class Architecture { DistilBert, Bert };

struct EncoderOptions {
  Architecture architecture = Architecture::DistilBert;
  std::size_t num_heads = 12;
  double layer_norm_eps = 1e-12;
  // Added to every position index (RoBERTa reserves the first padding_idx + 1 rows).
  std::int64_t position_offset = 0;
};

/// Post-LayerNorm transformer encoder (BERT / RoBERTa / DistilBERT layout)
/// evaluated only as far as needed to emit every layer's attention
/// probabilities. The final feed-forward block is skipped since no attention
/// depends on it.
class TransformerEncoder {
 public:
  using Matrix = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using Vector = Eigen::VectorXf;

  TransformerEncoder(const std::map<std::string, Tensor>& tensors, EncoderOptions options)
      : options_(options) {
    const std::string prefix = detect_prefix(tensors);
    auto get = [&](const std::string& name) -> const Tensor& { return fetch(tensors, prefix + name); };
    auto get_ln = [&](const std::string& base, Vector& gamma, Vector& beta) {
      gamma = to_vector(first_of(tensors, {prefix + base + ".weight", prefix + base + ".gamma"}));
      beta = to_vector(first_of(tensors, {prefix + base + ".bias", prefix + base + ".beta"}));
    };

    word_embeddings_ = to_matrix(get("embeddings.word_embeddings.weight"));
    position_embeddings_ = to_matrix(get("embeddings.position_embeddings.weight"));
    if (auto it = tensors.find(prefix + "embeddings.token_type_embeddings.weight"); it != tensors.end())
      token_type_row_ = to_matrix(it->second).row(0).transpose();
    get_ln("embeddings.LayerNorm", emb_ln_gamma_, emb_ln_beta_);
    hidden_ = static_cast<std::size_t>(word_embeddings_.cols());
    if (options_.num_heads == 0 || hidden_ % options_.num_heads != 0)
      throw Error(ErrorCode::ShapeMismatch, "hidden size " + std::to_string(hidden_) +
                                                " not divisible by " + std::to_string(options_.num_heads) +
                                                " heads");

    for (std::size_t l = 0;; ++l) {
      const std::string base = layer_base(l);
      if (!tensors.count(prefix + base + (options_.architecture == Architecture::DistilBert
                                               ? "attention.q_lin.weight"
                                               : "attention.self.query.weight")))
        break;
      Layer layer;
      if (options_.architecture == Architecture::DistilBert) {
        load_linear(get(base + "attention.q_lin.weight"), get(base + "attention.q_lin.bias"), layer.q);
        load_linear(get(base + "attention.k_lin.weight"), get(base + "attention.k_lin.bias"), layer.k);
        load_linear(get(base + "attention.v_lin.weight"), get(base + "attention.v_lin.bias"), layer.v);
        load_linear(get(base + "attention.out_lin.weight"), get(base + "attention.out_lin.bias"), layer.out);
        get_ln(base + "sa_layer_norm", layer.ln1_gamma, layer.ln1_beta);
        load_linear(get(base + "ffn.lin1.weight"), get(base + "ffn.lin1.bias"), layer.ffn_in);
        load_linear(get(base + "ffn.lin2.weight"), get(base + "ffn.lin2.bias"), layer.ffn_out);
        get_ln(base + "output_layer_norm", layer.ln2_gamma, layer.ln2_beta);
      } else {
        load_linear(get(base + "attention.self.query.weight"), get(base + "attention.self.query.bias"), layer.q);
        load_linear(get(base + "attention.self.key.weight"), get(base + "attention.self.key.bias"), layer.k);
        load_linear(get(base + "attention.self.value.weight"), get(base + "attention.self.value.bias"), layer.v);
        load_linear(get(base + "attention.output.dense.weight"), get(base + "attention.output.dense.bias"),
                    layer.out);
        get_ln(base + "attention.output.LayerNorm", layer.ln1_gamma, layer.ln1_beta);
        load_linear(get(base + "intermediate.dense.weight"), get(base + "intermediate.dense.bias"),
                    layer.ffn_in);
        load_linear(get(base + "output.dense.weight"), get(base + "output.dense.bias"), layer.ffn_out);
        get_ln(base + "output.LayerNorm", layer.ln2_gamma, layer.ln2_beta);
      }
      if (static_cast<std::size_t>(layer.q.weight.rows()) != hidden_)
        throw Error(ErrorCode::ShapeMismatch, "query projection width differs from hidden size");
      layers_.push_back(std::move(layer));
    }
    if (layers_.empty()) throw Error(ErrorCode::ShapeMismatch, "no encoder layers found in weights");
  }

  std::size_t num_layers() const { return layers_.size(); }
  std::size_t num_heads() const { return options_.num_heads; }
  std::size_t hidden_size() const { return hidden_; }
  std::size_t vocab_size() const { return static_cast<std::size_t>(word_embeddings_.rows()); }
  std::size_t max_positions() const {
    auto rows = static_cast<std::int64_t>(position_embeddings_.rows()) - options_.position_offset;
    return rows > 0 ? static_cast<std::size_t>(rows) : 0;
  }

  AttentionStack forward(std::span<const std::int64_t> ids) const {
    const auto n = static_cast<Eigen::Index>(ids.size());
    if (ids.size() > max_positions())
      throw Error(ErrorCode::RuntimeFailure, "sequence longer than position table");
    const std::size_t heads = options_.num_heads;
    const auto head_dim = static_cast<Eigen::Index>(hidden_ / heads);
    const float scale = 1.0f / std::sqrt(static_cast<float>(head_dim));

    Matrix x(n, static_cast<Eigen::Index>(hidden_));
    for (Eigen::Index i = 0; i < n; ++i) {
      const std::int64_t id = ids[static_cast<std::size_t>(i)];
      if (id < 0 || id >= word_embeddings_.rows())
        throw Error(ErrorCode::RuntimeFailure, "token id " + std::to_string(id) + " outside vocabulary");
      x.row(i) = word_embeddings_.row(id) + position_embeddings_.row(i + options_.position_offset);
      if (token_type_row_) x.row(i) += token_type_row_->transpose();
    }
    layer_norm(x, emb_ln_gamma_, emb_ln_beta_);

    AttentionStack stack(layers_.size(), heads, ids.size());
    Matrix context(n, static_cast<Eigen::Index>(hidden_));
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      const Layer& layer = layers_[l];
      const Matrix q = apply(layer.q, x);
      const Matrix k = apply(layer.k, x);
      const Matrix v = apply(layer.v, x);
      for (std::size_t h = 0; h < heads; ++h) {
        const Eigen::Index c0 = static_cast<Eigen::Index>(h) * head_dim;
        Matrix scores = (q.middleCols(c0, head_dim) * scale) * k.middleCols(c0, head_dim).transpose();
        for (Eigen::Index i = 0; i < n; ++i) {
          const float m = scores.row(i).maxCoeff();
          scores.row(i) = (scores.row(i).array() - m).exp();
          scores.row(i) /= scores.row(i).sum();
        }
        context.middleCols(c0, head_dim) = scores * v.middleCols(c0, head_dim);
        auto out = stack.mutable_head(l, h);
        for (Eigen::Index i = 0; i < n; ++i)
          for (Eigen::Index j = 0; j < n; ++j) out[static_cast<std::size_t>(i * n + j)] = scores(i, j);
      }
      if (l + 1 == layers_.size()) break;
      x += apply(layer.out, context);
      layer_norm(x, layer.ln1_gamma, layer.ln1_beta);
      Matrix ff = apply(layer.ffn_in, x);
      ff = ff.unaryExpr([](float t) { return 0.5f * t * (1.0f + std::erf(t * 0.70710678118654752f)); });
      x += apply(layer.ffn_out, ff);
      layer_norm(x, layer.ln2_gamma, layer.ln2_beta);
    }
    return stack;
  }

 private:
  struct Linear {
    Matrix weight;  // [out, in]
    Vector bias;
  };

  struct Layer {
    Linear q, k, v, out, ffn_in, ffn_out;
    Vector ln1_gamma, ln1_beta, ln2_gamma, ln2_beta;
  };

  std::string layer_base(std::size_t l) const {
    return (options_.architecture == Architecture::DistilBert ? "transformer.layer." : "encoder.layer.") +
           std::to_string(l) + ".";
  }

  static std::string detect_prefix(const std::map<std::string, Tensor>& tensors) {
    for (const char* prefix : {"", "distilbert.", "roberta.", "bert."})
      if (tensors.count(std::string(prefix) + "embeddings.word_embeddings.weight")) return prefix;
    throw Error(ErrorCode::RuntimeFailure, "weights lack embeddings.word_embeddings.weight");
  }

  static const Tensor& fetch(const std::map<std::string, Tensor>& tensors, const std::string& name) {
    auto it = tensors.find(name);
    if (it == tensors.end()) throw Error(ErrorCode::RuntimeFailure, "missing tensor " + name);
    return it->second;
  }

  static const Tensor& first_of(const std::map<std::string, Tensor>& tensors,
                                std::initializer_list<std::string> names) {
    for (const auto& name : names)
      if (auto it = tensors.find(name); it != tensors.end()) return it->second;
    throw Error(ErrorCode::RuntimeFailure, "missing tensor " + *names.begin());
  }

  static Matrix to_matrix(const Tensor& t) {
    if (t.shape.size() != 2) throw Error(ErrorCode::ShapeMismatch, "expected a 2-d tensor");
    return Eigen::Map<const Matrix>(t.values.data(), t.dim(0), t.dim(1));
  }

  static Vector to_vector(const Tensor& t) {
    if (t.shape.size() != 1) throw Error(ErrorCode::ShapeMismatch, "expected a 1-d tensor");
    return Eigen::Map<const Vector>(t.values.data(), t.dim(0));
  }

  static void load_linear(const Tensor& w, const Tensor& b, Linear& out) {
    out.weight = to_matrix(w);
    out.bias = to_vector(b);
    if (out.bias.size() != out.weight.rows())
      throw Error(ErrorCode::ShapeMismatch, "bias length differs from projection width");
  }

  static Matrix apply(const Linear& lin, const Matrix& x) {
    Matrix y = x * lin.weight.transpose();
    y.rowwise() += lin.bias.transpose();
    return y;
  }

  void layer_norm(Matrix& x, const Vector& gamma, const Vector& beta) const {
    const auto eps = static_cast<float>(options_.layer_norm_eps);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      auto row = x.row(i);
      const float mean = row.mean();
      const float var = (row.array() - mean).square().mean();
      row = ((row.array() - mean) / std::sqrt(var + eps)).matrix();
      row = (row.array() * gamma.transpose().array() + beta.transpose().array()).matrix();
    }
  }

  EncoderOptions options_;
  std::size_t hidden_ = 0;
  Matrix word_embeddings_;
  Matrix position_embeddings_;
  std::optional<Vector> token_type_row_;
  Vector emb_ln_gamma_, emb_ln_beta_;
  std::vector<Layer> layers_;
};

}  // namespace smurf::runtime
