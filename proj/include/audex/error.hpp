#pragma once

#include <stdexcept>
#include <string>

namespace audex {

enum class ErrorCode {
  IoError,
  UnsupportedFormat,
  UnsupportedSampleRate,
  EmptyAudio,
  TooShort,
  DimensionMismatch,
  ParseError,
  LengthMismatch,
  InvalidLabel,
  UnsupportedLayer,
  EmptyInput,
  TooManyFeatures,
  IndexOutOfRange,
  ShapeMismatch,
  NonPositiveClip,
  LabelLengthMismatch,
  InvalidArgument,
};

const char* error_code_name(ErrorCode code);

/// Library-wide exception. Carries a stable code so callers can switch on
/// the failure kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace audex
