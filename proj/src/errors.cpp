#include "sgcalc/errors.hpp"

namespace sgcalc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::PoleHit: return "PoleHit";
    case ErrorCode::InvalidPoint: return "InvalidPoint";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::TruncationCap: return "TruncationCap";
    case ErrorCode::NotElliptic: return "NotElliptic";
    case ErrorCode::LeadingCoeffVanishes: return "LeadingCoeffVanishes";
    case ErrorCode::RealRootDetected: return "RealRootDetected";
    case ErrorCode::RealPoleOnPath: return "RealPoleOnPath";
    case ErrorCode::DegreeTooHigh: return "DegreeTooHigh";
    case ErrorCode::NotRational: return "NotRational";
    case ErrorCode::DegenerateFit: return "DegenerateFit";
    case ErrorCode::IllConditionedFit: return "IllConditionedFit";
    case ErrorCode::AllZeroWindow: return "AllZeroWindow";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::JetGrowthViolation: return "JetGrowthViolation";
    case ErrorCode::ExtensionFailure: return "ExtensionFailure";
    case ErrorCode::SingularDiscretization: return "SingularDiscretization";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace sgcalc
