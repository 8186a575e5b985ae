#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "smurf/error.hpp"
#include "smurf/runtime/attention.hpp"

namespace smurf::runtime {

inline constexpr std::uint64_t kFixtureSeed = 42;

namespace detail {

// Top 53 bits of a 64-bit draw scaled into (0, 1]; avoids the
// implementation-defined std::uniform_real_distribution so goldens are portable.
inline double unit_interval(std::mt19937_64& gen) {
  return (static_cast<double>(gen() >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace detail

/// Deterministic attention stacks for tests and model-free runs.
/// Recipes: "identity", "uniform", "seeded-random".
inline AttentionStack fixture_backend(std::string_view recipe, std::size_t num_layers,
                                      std::size_t num_heads, std::size_t n,
                                      std::uint64_t seed = kFixtureSeed) {
  AttentionStack stack(num_layers, num_heads, n, "fixture-" + std::string(recipe));
  if (recipe == "identity") {
    for (std::size_t l = 0; l < num_layers; ++l)
      for (std::size_t h = 0; h < num_heads; ++h) {
        auto head = stack.mutable_head(l, h);
        for (std::size_t i = 0; i < n; ++i) head[i * n + i] = 1.0;
      }
  } else if (recipe == "uniform") {
    const double value = 1.0 / static_cast<double>(n);
    for (std::size_t l = 0; l < num_layers; ++l)
      for (std::size_t h = 0; h < num_heads; ++h)
        for (double& v : stack.mutable_head(l, h)) v = value;
  } else if (recipe == "seeded-random") {
    std::mt19937_64 gen(seed);
    for (std::size_t l = 0; l < num_layers; ++l)
      for (std::size_t h = 0; h < num_heads; ++h) {
        auto head = stack.mutable_head(l, h);
        for (std::size_t i = 0; i < n; ++i) {
          double sum = 0.0;
          for (std::size_t j = 0; j < n; ++j) sum += head[i * n + j] = detail::unit_interval(gen);
          for (std::size_t j = 0; j < n; ++j) head[i * n + j] /= sum;
        }
      }
  } else {
    throw Error(ErrorCode::UnknownRecipe, std::string(recipe));
  }
  return stack;
}

}  // namespace smurf::runtime
