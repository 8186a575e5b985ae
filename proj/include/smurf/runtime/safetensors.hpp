#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "smurf/error.hpp"

namespace smurf::runtime {

struct Tensor {
  std::vector<std::int64_t> shape;
  std::vector<float> values;

  std::int64_t dim(std::size_t i) const { return shape.at(i); }
  std::size_t numel() const { return values.size(); }
};

namespace detail {

inline float half_to_float(std::uint16_t h) {
  const std::uint32_t sign = static_cast<std::uint32_t>(h & 0x8000) << 16;
  std::uint32_t exponent = (h >> 10) & 0x1F;
  std::uint32_t mantissa = h & 0x3FF;
  std::uint32_t bits;
  if (exponent == 0) {
    if (mantissa == 0) {
      bits = sign;
    } else {
      exponent = 127 - 15 + 1;
      while ((mantissa & 0x400) == 0) {
        mantissa <<= 1;
        --exponent;
      }
      bits = sign | (exponent << 23) | ((mantissa & 0x3FF) << 13);
    }
  } else if (exponent == 0x1F) {
    bits = sign | 0x7F800000 | (mantissa << 13);
  } else {
    bits = sign | ((exponent + 127 - 15) << 23) | (mantissa << 13);
  }
  float out;
  std::memcpy(&out, &bits, sizeof out);
  return out;
}

inline float bf16_to_float(std::uint16_t h) {
  std::uint32_t bits = static_cast<std::uint32_t>(h) << 16;
  float out;
  std::memcpy(&out, &bits, sizeof out);
  return out;
}

}  // namespace detail

/// Reads a .safetensors file (little-endian u64 header length, JSON header,
/// raw tensor bytes). F32, F16 and BF16 tensors are widened to float.
inline std::map<std::string, Tensor> load_safetensors(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::RuntimeFailure, "cannot open weights " + path);
  unsigned char len_bytes[8];
  if (!in.read(reinterpret_cast<char*>(len_bytes), 8))
    throw Error(ErrorCode::RuntimeFailure, "truncated weights header in " + path);
  std::uint64_t header_len = 0;
  for (int i = 7; i >= 0; --i) header_len = (header_len << 8) | len_bytes[i];
  if (header_len > (std::uint64_t{1} << 32))
    throw Error(ErrorCode::RuntimeFailure, "implausible header length in " + path);
  std::string header(header_len, '\0');
  if (!in.read(header.data(), static_cast<std::streamsize>(header_len)))
    throw Error(ErrorCode::RuntimeFailure, "truncated weights header in " + path);
  std::vector<char> payload((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(header);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::RuntimeFailure, "bad weights header in " + path + ": " + e.what());
  }

  std::map<std::string, Tensor> tensors;
  for (auto it = meta.begin(); it != meta.end(); ++it) {
    if (it.key() == "__metadata__") continue;
    const auto& entry = it.value();
    const std::string dtype = entry.at("dtype").get<std::string>();
    const auto offsets = entry.at("data_offsets").get<std::vector<std::uint64_t>>();
    if (offsets.size() != 2 || offsets[1] < offsets[0] || offsets[1] > payload.size())
      throw Error(ErrorCode::RuntimeFailure, "bad offsets for tensor " + it.key());
    Tensor t;
    t.shape = entry.at("shape").get<std::vector<std::int64_t>>();
    std::size_t count = 1;
    for (auto d : t.shape) count *= static_cast<std::size_t>(d);
    const char* src = payload.data() + offsets[0];
    const std::size_t bytes = offsets[1] - offsets[0];
    t.values.resize(count);
    if (dtype == "F32") {
      if (bytes != count * 4) throw Error(ErrorCode::RuntimeFailure, "size mismatch for " + it.key());
      std::memcpy(t.values.data(), src, bytes);
    } else if (dtype == "F16" || dtype == "BF16") {
      if (bytes != count * 2) throw Error(ErrorCode::RuntimeFailure, "size mismatch for " + it.key());
      for (std::size_t i = 0; i < count; ++i) {
        std::uint16_t h;
        std::memcpy(&h, src + 2 * i, 2);
        t.values[i] = dtype == "F16" ? detail::half_to_float(h) : detail::bf16_to_float(h);
      }
    } else {
      // Integer buffers (e.g. position_ids) are not needed for inference.
      continue;
    }
    tensors.emplace(it.key(), std::move(t));
  }
  return tensors;
}

}  // namespace smurf::runtime
