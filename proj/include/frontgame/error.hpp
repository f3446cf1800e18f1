#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace frontgame {

enum class ErrorCode {
  NonPositiveMobility,
  NegativeForcing,
  UnsupportedDimension,
  ZeroGradient,
  AsymmetricMatrix,
  DegenerateForcing,
  OutOfRange,
  TooManySigns,
  TargetOutsideBox,
  EmptyTarget,
  GridTooLarge,
  StepUnresolved,
  InvalidConfig,
  StartInsideTarget,
  StartOutsideBox,
  RadiusTooSmall,
  StalledFront,
  BadT0,
  DigestMismatch,
  MaxIterationsExceeded,
  ConfigParse,
  Io,
};

std::string_view to_string(ErrorCode code);

//! Library error carrying a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace frontgame
