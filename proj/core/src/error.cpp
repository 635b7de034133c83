#include "doseeffect/error.hpp"

namespace doseeffect {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::InfeasibleSkewness: return "InfeasibleSkewness";
    case ErrorCode::DegenerateSample: return "DegenerateSample";
    case ErrorCode::SingularDesign: return "SingularDesign";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::NonMonotoneAbscissae: return "NonMonotoneAbscissae";
    case ErrorCode::NonMonotoneData: return "NonMonotoneData";
    case ErrorCode::NoBracket: return "NoBracket";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NoFeasibleOffset: return "NoFeasibleOffset";
    case ErrorCode::NoDecreasingTail: return "NoDecreasingTail";
    case ErrorCode::NoAdmissibleDose: return "NoAdmissibleDose";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NegativeDose: return "NegativeDose";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::DegenerateCohort: return "DegenerateCohort";
  }
  return "Unknown";
}

}  // namespace doseeffect
