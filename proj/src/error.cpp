#include "audex/error.hpp"

namespace audex {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::UnsupportedSampleRate: return "UnsupportedSampleRate";
    case ErrorCode::EmptyAudio: return "EmptyAudio";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidLabel: return "InvalidLabel";
    case ErrorCode::UnsupportedLayer: return "UnsupportedLayer";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::TooManyFeatures: return "TooManyFeatures";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NonPositiveClip: return "NonPositiveClip";
    case ErrorCode::LabelLengthMismatch: return "LabelLengthMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace audex
