#pragma once

#include <stdexcept>
#include <string>

namespace molt {

/// Failure categories raised by the solver. Every module throws molt::Error
/// carrying one of these codes; the CLI maps them onto exit codes.
enum class ErrorCode {
  BetaOutOfRange,
  NonPositiveStep,
  EpsilonOutOfRange,
  NonPositiveNu,
  DegenerateLine,
  SingularOutflowSystem,
  UnsupportedClosure,
  SourceOutsideLine,
  NoInteriorNodes,
  TangentIntersection,
  StencilNotInterior,
  PointOutsideCell,
  MaxIterExceeded,
  IllConditioned,
  EmptyInterior,
  NonPositiveError,
  UnknownReference,
  InsufficientSteps,
  UnknownKey,
  InvalidValue,
  IncompatibleBC,
  MissingScenario,
  IoError,
  BlowUp,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// True for errors that stem from the run configuration rather than numerics.
bool is_config_error(ErrorCode code) noexcept;

}  // namespace molt
