#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace smurf {

enum class ErrorCode {
  EmptyInput,
  RuntimeFailure,
  ShapeMismatch,
  UnknownRecipe,
  BadDistribution,
  NoReferences,
  InsufficientData,
  ZeroVariance,
  DegenerateInput,
  InsufficientPoints,
  MissingHumanBaseline,
  MalformedInput,
  Configuration,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::RuntimeFailure: return "RuntimeFailure";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::UnknownRecipe: return "UnknownRecipe";
    case ErrorCode::BadDistribution: return "BadDistribution";
    case ErrorCode::NoReferences: return "NoReferences";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::InsufficientPoints: return "InsufficientPoints";
    case ErrorCode::MissingHumanBaseline: return "MissingHumanBaseline";
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::Configuration: return "Configuration";
  }
  return "Unknown";
}

/// All library failures are reported through this exception; `code()` is
/// what callers branch on, `what()` carries the diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace smurf
