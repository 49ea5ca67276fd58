#include "molt/errors.hpp"

namespace molt {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::BetaOutOfRange: return "BetaOutOfRange";
    case ErrorCode::NonPositiveStep: return "NonPositiveStep";
    case ErrorCode::EpsilonOutOfRange: return "EpsilonOutOfRange";
    case ErrorCode::NonPositiveNu: return "NonPositiveNu";
    case ErrorCode::DegenerateLine: return "DegenerateLine";
    case ErrorCode::SingularOutflowSystem: return "SingularOutflowSystem";
    case ErrorCode::UnsupportedClosure: return "UnsupportedClosure";
    case ErrorCode::SourceOutsideLine: return "SourceOutsideLine";
    case ErrorCode::NoInteriorNodes: return "NoInteriorNodes";
    case ErrorCode::TangentIntersection: return "TangentIntersection";
    case ErrorCode::StencilNotInterior: return "StencilNotInterior";
    case ErrorCode::PointOutsideCell: return "PointOutsideCell";
    case ErrorCode::MaxIterExceeded: return "MaxIterExceeded";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::EmptyInterior: return "EmptyInterior";
    case ErrorCode::NonPositiveError: return "NonPositiveError";
    case ErrorCode::UnknownReference: return "UnknownReference";
    case ErrorCode::InsufficientSteps: return "InsufficientSteps";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::InvalidValue: return "InvalidValue";
    case ErrorCode::IncompatibleBC: return "IncompatibleBC";
    case ErrorCode::MissingScenario: return "MissingScenario";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::BlowUp: return "BlowUp";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

bool is_config_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnknownKey:
    case ErrorCode::InvalidValue:
    case ErrorCode::IncompatibleBC:
    case ErrorCode::MissingScenario:
    case ErrorCode::BetaOutOfRange:
    case ErrorCode::NonPositiveStep:
    case ErrorCode::EpsilonOutOfRange:
    case ErrorCode::UnknownReference:
    case ErrorCode::IoError:
      return true;
    default:
      return false;
  }
}

}  // namespace molt
