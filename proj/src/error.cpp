#include "machina/error.hpp"

namespace machina {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::IllegalTransfer: return "IllegalTransfer";
    case ErrorCode::NotComparable: return "NotComparable";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownState: return "UnknownState";
    case ErrorCode::UnknownSymbol: return "UnknownSymbol";
    case ErrorCode::DuplicateTransition: return "DuplicateTransition";
    case ErrorCode::NotStochastic: return "NotStochastic";
    case ErrorCode::NotUnifilar: return "NotUnifilar";
    case ErrorCode::NotIrreducible: return "NotIrreducible";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::UnreachableCopy: return "UnreachableCopy";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::NotUnitNorm: return "NotUnitNorm";
    case ErrorCode::CompletenessViolation: return "CompletenessViolation";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::AmbiguousSuccessor: return "AmbiguousSuccessor";
    case ErrorCode::UnphysicalTheta: return "UnphysicalTheta";
    case ErrorCode::SingularTheta: return "SingularTheta";
    case ErrorCode::UniquenessViolated: return "UniquenessViolated";
    case ErrorCode::CheckFailed: return "CheckFailed";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

bool is_parse_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError:
    case ErrorCode::UnknownState:
    case ErrorCode::UnknownSymbol:
    case ErrorCode::DuplicateTransition:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::InvalidArgument:
      return true;
    default:
      return false;
  }
}

namespace {

std::string decorate(ErrorCode code, const std::string& message, int line) {
  std::string out(to_string(code));
  if (line > 0) out += " (line " + std::to_string(line) + ")";
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, int line)
    : std::runtime_error(decorate(code, message, line)), code_(code), line_(line) {}

}  // namespace machina
