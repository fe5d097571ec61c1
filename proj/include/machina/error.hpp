#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace machina {

enum class ErrorCode {
  // majorization
  NegativeEntry,
  NotNormalized,
  TooSmall,
  IllegalTransfer,
  NotComparable,
  // model files and classical models
  SyntaxError,
  UnknownState,
  UnknownSymbol,
  DuplicateTransition,
  NotStochastic,
  NotUnifilar,
  NotIrreducible,
  NoConvergence,
  UnreachableCopy,
  // quantum models
  NotPSD,
  NotUnitNorm,
  CompletenessViolation,
  DimensionMismatch,
  NotHermitian,
  AmbiguousSuccessor,
  // 2-D gauge family
  UnphysicalTheta,
  SingularTheta,
  UniquenessViolated,
  CheckFailed,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Errors that are structural problems with input text rather than
/// violated model invariants.
bool is_parse_error(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message, int line = 0);

  ErrorCode code() const noexcept { return code_; }
  /// 1-based source line for parse errors, 0 otherwise.
  int line() const noexcept { return line_; }

private:
  ErrorCode code_;
  int line_;
};

}  // namespace machina
