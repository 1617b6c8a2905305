#include "evifuse/error.hpp"

namespace evifuse {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NegativeMass: return "NegativeMass";
    case ErrorKind::MassSumViolation: return "MassSumViolation";
    case ErrorKind::FrameMismatch: return "FrameMismatch";
    case ErrorKind::TotalConflict: return "TotalConflict";
    case ErrorKind::FrameTooLarge: return "FrameTooLarge";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::NonBinaryTask: return "NonBinaryTask";
    case ErrorKind::UndefinedRate: return "UndefinedRate";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::TooFewSamples: return "TooFewSamples";
    case ErrorKind::ExternalScoresMissing: return "ExternalScoresMissing";
    case ErrorKind::WidthMismatch: return "WidthMismatch";
    case ErrorKind::RowCountMismatch: return "RowCountMismatch";
    case ErrorKind::NonStochasticRow: return "NonStochasticRow";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::MemberMissing: return "MemberMissing";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SingleClass: return "SingleClass";
    case ErrorKind::InvalidFractions: return "InvalidFractions";
    case ErrorKind::ClassTooSmall: return "ClassTooSmall";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_config_error(ErrorKind kind) noexcept {
  return kind == ErrorKind::InvalidConfig || kind == ErrorKind::InvalidFractions;
}

}  // namespace evifuse
