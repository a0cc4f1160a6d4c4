#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sgcalc {

enum class ErrorCode {
  PoleHit,
  InvalidPoint,
  ParseError,
  TruncationCap,
  NotElliptic,
  LeadingCoeffVanishes,
  RealRootDetected,
  RealPoleOnPath,
  DegreeTooHigh,
  NotRational,
  DegenerateFit,
  IllConditionedFit,
  AllZeroWindow,
  QuadratureFailure,
  JetGrowthViolation,
  ExtensionFailure,
  SingularDiscretization,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every failure reported by the library. The code is
/// stable and machine readable; the message carries the context.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace sgcalc
