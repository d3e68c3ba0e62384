#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace twinfringe
{

enum class ErrorCode
{
  // configuration
  NonPositiveParameter,
  AmplitudeNotNormalized,
  MissingSigmaTheta,
  MissingPumpWavelength,
  ValidationError,
  ParseError,
  UnknownKey,
  UsageError,
  // numerics
  Overflow,
  ToleranceNotReached,
  ToleranceExceeded,
  ZeroRate,
  NoHalfPoint,
  ZeroDistance,
  DegenerateVisibility,
  InsufficientData,
  NegativeSlope,
  // state model
  InvalidGrid,
  GridMismatch,
  IndexOutOfRange,
  ZeroMarginal,
  UnequalAmplitudes,
  // files
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; `code()` identifies the failure.
class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
  { }

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

/// Process exit status used by the CLI: 1 usage/validation, 2 numerical
/// tolerance failure, 3 IO.
int exit_status(ErrorCode code) noexcept;

} // namespace twinfringe
