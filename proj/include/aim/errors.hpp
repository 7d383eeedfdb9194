#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace aim {

enum class ErrorCode {
  CenterMismatch,
  SingularPivot,
  OrderExhausted,
  Overflow,
  ParseError,
  EvalError,
  InvalidSpec,
  InvalidArgument,
  IndexOutOfRange,
  ZeroDenominator,
  ZeroPartialNumerator,
  NonPositiveP,
  HypothesisViolated,
  NoConvergence,
  ZeroQ,
  ZeroP,
  InsufficientData,
  ZeroB0,
  DegenerateDenominator,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

/// True for errors caused by malformed input rather than by the numerics.
[[nodiscard]] constexpr bool is_input_error(ErrorCode code) noexcept {
  return code == ErrorCode::ParseError || code == ErrorCode::InvalidSpec ||
         code == ErrorCode::InvalidArgument;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Non-fatal diagnostics collected along a computation.
using Warnings = std::vector<std::string>;

inline void warn(Warnings* sink, std::string message) {
  if (sink != nullptr) {
    sink->push_back(std::move(message));
  }
}

}  // namespace aim
