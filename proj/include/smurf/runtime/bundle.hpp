#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include <nlohmann/json.hpp>

#include "smurf/error.hpp"
#include "smurf/runtime/attention.hpp"
#include "smurf/runtime/bpe.hpp"
#include "smurf/runtime/encoder.hpp"
#include "smurf/runtime/fixture.hpp"
#include "smurf/runtime/safetensors.hpp"
#include "smurf/runtime/wordpiece.hpp"
#include "smurf/text/preprocess.hpp"

namespace smurf::runtime {

/// Parsed `config.json`. The first four fields are the required manifest;
/// the rest select and parameterize the backend.
struct BundleConfig {
  std::string model_id;
  std::size_t num_layers = 0;
  std::size_t num_heads = 0;
  std::size_t max_len = 512;

  std::string backend = "transformer";  // or "fixture"
  std::string architecture = "distilbert";
  std::string tokenizer = "wordpiece";
  std::string weights = "model.safetensors";
  double layer_norm_eps = 1e-12;
  std::int64_t position_offset = 0;
  bool lowercase = true;
  std::string recipe = "uniform";  // fixture backend only
  std::uint64_t seed = kFixtureSeed;

  static BundleConfig from_json(const nlohmann::json& j) {
    BundleConfig c;
    try {
      c.model_id = j.at("model_id").get<std::string>();
      c.num_layers = j.at("num_layers").get<std::size_t>();
      c.num_heads = j.at("num_heads").get<std::size_t>();
      c.max_len = j.at("max_len").get<std::size_t>();
      c.backend = j.value("backend", c.backend);
      c.architecture = j.value("architecture", c.architecture);
      c.tokenizer = j.value("tokenizer", c.architecture == "roberta" ? std::string("bpe") : c.tokenizer);
      c.weights = j.value("weights", c.weights);
      c.layer_norm_eps = j.value("layer_norm_eps", c.architecture == "roberta" ? 1e-5 : c.layer_norm_eps);
      c.position_offset = j.value("position_offset", c.architecture == "roberta" ? std::int64_t{2} : std::int64_t{0});
      c.lowercase = j.value("lowercase", c.tokenizer == "wordpiece");
      c.recipe = j.value("recipe", c.recipe);
      c.seed = j.value("seed", c.seed);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::Configuration, std::string("bad bundle config: ") + e.what());
    }
    if (c.model_id.empty() || c.num_layers == 0 || c.num_heads == 0 || c.max_len < 3)
      throw Error(ErrorCode::Configuration, "bundle config needs model_id, num_layers, num_heads, max_len >= 3");
    return c;
  }
};

/// Backend contract. Implementations are immutable after construction, so a
/// single instance may serve concurrent callers.
class AttentionModel {
 public:
  virtual ~AttentionModel() = default;
  virtual SubwordEncoding encode(std::string_view text) const = 0;
  virtual AttentionStack attention(const SubwordEncoding& encoding) const = 0;
  virtual const BundleConfig& config() const = 0;
};

namespace detail {

inline std::string trim(std::string_view text) {
  const auto b = text.find_first_not_of(" \t\r\n\f\v");
  if (b == std::string_view::npos) return {};
  const auto e = text.find_last_not_of(" \t\r\n\f\v");
  return std::string(text.substr(b, e - b + 1));
}

// Hard truncation that keeps the end special in the last slot.
inline void truncate_keep_end(SubwordEncoding& enc, std::size_t max_len) {
  if (enc.token_ids.size() <= max_len) return;
  const auto end_id = enc.token_ids.back();
  const auto end_tok = enc.tokens.back();
  const std::size_t original = enc.token_ids.size();
  enc.token_ids.resize(max_len);
  enc.tokens.resize(max_len);
  enc.token_ids.back() = end_id;
  enc.tokens.back() = end_tok;
  enc.truncated = true;
  enc.warnings.push_back("input truncated from " + std::to_string(original) + " to " +
                         std::to_string(max_len) + " tokens");
}

template <class Tokenizer>
SubwordEncoding encode_with(const Tokenizer& tok, std::string_view text, std::size_t max_len) {
  const std::string trimmed = trim(text);
  if (trimmed.empty()) throw Error(ErrorCode::EmptyInput, "text is empty");
  SubwordEncoding enc;
  enc.tokens.push_back(tok.start_token());
  enc.token_ids.push_back(tok.start_id());
  for (auto& piece : tok.tokenize(trimmed)) {
    enc.token_ids.push_back(tok.id_of(piece));
    enc.tokens.push_back(std::move(piece));
  }
  enc.tokens.push_back(tok.end_token());
  enc.token_ids.push_back(tok.end_id());
  truncate_keep_end(enc, max_len);
  return enc;
}

}  // namespace detail

/// Attention from a fixture recipe. Encoding is word-level with hashed ids;
/// only the resulting length matters to the recipe.
class FixtureModel final : public AttentionModel {
 public:
  explicit FixtureModel(BundleConfig config) : config_(std::move(config)) {
    fixture_backend(config_.recipe, 1, 1, 1);  // validates the recipe name
  }

  SubwordEncoding encode(std::string_view text) const override {
    if (detail::trim(text).empty()) throw Error(ErrorCode::EmptyInput, "text is empty");
    SubwordEncoding enc;
    enc.tokens.push_back("<s>");
    enc.token_ids.push_back(0);
    for (const auto& w : text::tokenize_words(text).words) {
      std::uint64_t h = 1469598103934665603ull;  // FNV-1a
      for (unsigned char c : w) h = (h ^ c) * 1099511628211ull;
      enc.token_ids.push_back(2 + static_cast<std::int64_t>(h % 30000));
      enc.tokens.push_back(w);
    }
    enc.tokens.push_back("</s>");
    enc.token_ids.push_back(1);
    detail::truncate_keep_end(enc, config_.max_len);
    return enc;
  }

  AttentionStack attention(const SubwordEncoding& enc) const override {
    AttentionStack stack =
        fixture_backend(config_.recipe, config_.num_layers, config_.num_heads, enc.length(), config_.seed);
    stack.set_model_id(config_.model_id);
    return stack;
  }

  const BundleConfig& config() const override { return config_; }

 private:
  BundleConfig config_;
};

class TransformerModel final : public AttentionModel {
 public:
  using Tokenizer = std::variant<WordPieceTokenizer, ByteLevelBpeTokenizer>;

  TransformerModel(BundleConfig config, Tokenizer tokenizer, TransformerEncoder encoder)
      : config_(std::move(config)), tokenizer_(std::move(tokenizer)), encoder_(std::move(encoder)) {
    if (encoder_.num_layers() != config_.num_layers)
      throw Error(ErrorCode::ShapeMismatch, "config declares " + std::to_string(config_.num_layers) +
                                                " layers, weights hold " +
                                                std::to_string(encoder_.num_layers()));
    if (config_.max_len > encoder_.max_positions())
      throw Error(ErrorCode::ShapeMismatch, "max_len exceeds the position table");
  }

  SubwordEncoding encode(std::string_view text) const override {
    SubwordEncoding enc =
        std::visit([&](const auto& tok) { return detail::encode_with(tok, text, config_.max_len); }, tokenizer_);
    for (auto id : enc.token_ids)
      if (id < 0 || static_cast<std::size_t>(id) >= encoder_.vocab_size())
        throw Error(ErrorCode::RuntimeFailure, "tokenizer produced id outside embedding table");
    return enc;
  }

  AttentionStack attention(const SubwordEncoding& enc) const override {
    AttentionStack stack = encoder_.forward(enc.token_ids);
    if (stack.num_layers() != config_.num_layers || stack.num_heads() != config_.num_heads ||
        stack.seq_len() != enc.length())
      throw Error(ErrorCode::ShapeMismatch, "emitted attention shape contradicts config");
    stack.set_model_id(config_.model_id);
    return stack;
  }

  const BundleConfig& config() const override { return config_; }

 private:
  BundleConfig config_;
  Tokenizer tokenizer_;
  TransformerEncoder encoder_;
};

/// A loaded model directory: `config.json` plus, for the transformer
/// backend, the weights file and tokenizer files (`vocab.txt` for WordPiece,
/// `vocab.json` + `merges.txt` for byte-level BPE). Cheap to copy; copies
/// share the immutable model.
class ModelBundle {
 public:
  explicit ModelBundle(std::shared_ptr<const AttentionModel> model) : model_(std::move(model)) {}

  static ModelBundle load(const std::filesystem::path& dir) {
    const auto config_path = dir / "config.json";
    std::ifstream in(config_path);
    if (!in) throw Error(ErrorCode::Configuration, "missing bundle manifest " + config_path.string());
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::Configuration, "unreadable " + config_path.string() + ": " + e.what());
    }
    BundleConfig config = BundleConfig::from_json(j);
    if (config.backend == "fixture") return ModelBundle(std::make_shared<FixtureModel>(std::move(config)));
    if (config.backend != "transformer")
      throw Error(ErrorCode::Configuration, "unknown backend " + config.backend);

    TransformerModel::Tokenizer tokenizer = [&]() -> TransformerModel::Tokenizer {
      if (config.tokenizer == "wordpiece") {
        WordPieceTokenizer::Options opts;
        opts.lowercase = config.lowercase;
        return WordPieceTokenizer::from_file((dir / "vocab.txt").string(), opts);
      }
      if (config.tokenizer == "bpe")
        return ByteLevelBpeTokenizer::from_files((dir / "vocab.json").string(), (dir / "merges.txt").string(), {});
      throw Error(ErrorCode::Configuration, "unknown tokenizer " + config.tokenizer);
    }();

    EncoderOptions opts;
    opts.architecture = config.architecture == "distilbert" ? Architecture::DistilBert : Architecture::Bert;
    if (config.architecture != "distilbert" && config.architecture != "bert" && config.architecture != "roberta")
      throw Error(ErrorCode::Configuration, "unknown architecture " + config.architecture);
    opts.num_heads = config.num_heads;
    opts.layer_norm_eps = config.layer_norm_eps;
    opts.position_offset = config.position_offset;
    TransformerEncoder encoder(load_safetensors((dir / config.weights).string()), opts);
    return ModelBundle(std::make_shared<TransformerModel>(std::move(config), std::move(tokenizer), std::move(encoder)));
  }

  static ModelBundle fixture(std::string recipe, std::size_t num_layers, std::size_t num_heads,
                             std::string model_id = {}) {
    BundleConfig c;
    c.backend = "fixture";
    c.recipe = std::move(recipe);
    c.num_layers = num_layers;
    c.num_heads = num_heads;
    c.model_id = model_id.empty() ? "fixture-" + c.recipe : std::move(model_id);
    return ModelBundle(std::make_shared<FixtureModel>(std::move(c)));
  }

  const AttentionModel& model() const { return *model_; }
  const BundleConfig& config() const { return model_->config(); }
  const std::string& model_id() const { return model_->config().model_id; }

 private:
  std::shared_ptr<const AttentionModel> model_;
};

inline SubwordEncoding encode(std::string_view text, const ModelBundle& bundle) {
  return bundle.model().encode(text);
}

inline AttentionStack attention_forward(const SubwordEncoding& enc, const ModelBundle& bundle) {
  return bundle.model().attention(enc);
}

/// Grammar (`grammar/`) and style (`style/`) bundles under one model directory.
struct BundlePair {
  ModelBundle grammar;
  ModelBundle style;

  static BundlePair load(const std::filesystem::path& model_dir) {
    return {ModelBundle::load(model_dir / "grammar"), ModelBundle::load(model_dir / "style")};
  }
};

}  // namespace smurf::runtime
