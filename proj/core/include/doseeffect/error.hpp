#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace doseeffect {

/// Failure categories raised by the library. The CLI prints them as
/// `ERROR <code>: <message>`.
enum class ErrorCode {
  InvalidArgument,
  DomainError,
  InfeasibleSkewness,
  DegenerateSample,
  SingularDesign,
  TooFewPoints,
  NonMonotoneAbscissae,
  NonMonotoneData,
  NoBracket,
  NonFinite,
  NoFeasibleOffset,
  NoDecreasingTail,
  NoAdmissibleDose,
  ParseError,
  NegativeDose,
  EmptyInput,
  DegenerateCohort,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace doseeffect
