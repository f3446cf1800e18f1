#include "frontgame/error.hpp"

namespace frontgame {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveMobility: return "NonPositiveMobility";
    case ErrorCode::NegativeForcing: return "NegativeForcing";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::ZeroGradient: return "ZeroGradient";
    case ErrorCode::AsymmetricMatrix: return "AsymmetricMatrix";
    case ErrorCode::DegenerateForcing: return "DegenerateForcing";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::TooManySigns: return "TooManySigns";
    case ErrorCode::TargetOutsideBox: return "TargetOutsideBox";
    case ErrorCode::EmptyTarget: return "EmptyTarget";
    case ErrorCode::GridTooLarge: return "GridTooLarge";
    case ErrorCode::StepUnresolved: return "StepUnresolved";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::StartInsideTarget: return "StartInsideTarget";
    case ErrorCode::StartOutsideBox: return "StartOutsideBox";
    case ErrorCode::RadiusTooSmall: return "RadiusTooSmall";
    case ErrorCode::StalledFront: return "StalledFront";
    case ErrorCode::BadT0: return "BadT0";
    case ErrorCode::DigestMismatch: return "DigestMismatch";
    case ErrorCode::MaxIterationsExceeded: return "MaxIterationsExceeded";
    case ErrorCode::ConfigParse: return "ConfigParse";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace frontgame
