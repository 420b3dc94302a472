#pragma once

#include <stdexcept>
#include <string>

namespace wearmon {

/// Typed failure reasons raised by the library. The CLI maps the category
/// of a code to its process exit code (data -> 2, numeric -> 3).
enum class ErrorCode {
  // spectral
  InvalidSignal,
  FrequencyOutOfRange,
  NoNoiseDetected,
  DegenerateSpec,
  // regress
  Underdetermined,
  SingularSystem,
  OrderCapExceeded,
  ZeroVariance,
  InsufficientData,
  // iirdesign
  NyquistEdge,
  InvalidSpec,
  OrderOutOfRange,
  DegenerateMapping,
  // iirruntime
  InvalidSample,
  NumericalOverflow,
  SampleRateMismatch,
  PoleAtDC,
  UnstableFilter,
  // rig
  OutOfSurfaceRange,
  NoBracket,
  RangeExceeded,
  AliasingRisk,
  // pipeline / io
  ParseError,
  SchemaError,
  DivisionDomain,
  IoError,
};

enum class ErrorCategory { Data, Numeric };

constexpr ErrorCategory category(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSignal:
    case ErrorCode::FrequencyOutOfRange:
    case ErrorCode::Underdetermined:
    case ErrorCode::OrderCapExceeded:
    case ErrorCode::InsufficientData:
    case ErrorCode::NyquistEdge:
    case ErrorCode::InvalidSpec:
    case ErrorCode::OrderOutOfRange:
    case ErrorCode::InvalidSample:
    case ErrorCode::SampleRateMismatch:
    case ErrorCode::RangeExceeded:
    case ErrorCode::AliasingRisk:
    case ErrorCode::ParseError:
    case ErrorCode::SchemaError:
    case ErrorCode::DivisionDomain:
    case ErrorCode::IoError:
      return ErrorCategory::Data;
    default:
      return ErrorCategory::Numeric;
  }
}

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSignal: return "InvalidSignal";
    case ErrorCode::FrequencyOutOfRange: return "FrequencyOutOfRange";
    case ErrorCode::NoNoiseDetected: return "NoNoiseDetected";
    case ErrorCode::DegenerateSpec: return "DegenerateSpec";
    case ErrorCode::Underdetermined: return "Underdetermined";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::OrderCapExceeded: return "OrderCapExceeded";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::NyquistEdge: return "NyquistEdge";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::OrderOutOfRange: return "OrderOutOfRange";
    case ErrorCode::DegenerateMapping: return "DegenerateMapping";
    case ErrorCode::InvalidSample: return "InvalidSample";
    case ErrorCode::NumericalOverflow: return "NumericalOverflow";
    case ErrorCode::SampleRateMismatch: return "SampleRateMismatch";
    case ErrorCode::PoleAtDC: return "PoleAtDC";
    case ErrorCode::UnstableFilter: return "UnstableFilter";
    case ErrorCode::OutOfSurfaceRange: return "OutOfSurfaceRange";
    case ErrorCode::NoBracket: return "NoBracket";
    case ErrorCode::RangeExceeded: return "RangeExceeded";
    case ErrorCode::AliasingRisk: return "AliasingRisk";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::DivisionDomain: return "DivisionDomain";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return wearmon::category(code_); }

 private:
  ErrorCode code_;
};

}  // namespace wearmon
