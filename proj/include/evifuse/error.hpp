#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace evifuse {

enum class ErrorKind {
  // evidence
  NegativeMass,
  MassSumViolation,
  FrameMismatch,
  TotalConflict,
  FrameTooLarge,
  // metrics / infotheory
  LengthMismatch,
  NonBinaryTask,
  UndefinedRate,
  EmptyInput,
  // base learners
  TooFewSamples,
  ExternalScoresMissing,
  WidthMismatch,
  RowCountMismatch,
  NonStochasticRow,
  // fusion
  DimensionMismatch,
  MemberMissing,
  // data
  ParseError,
  SingleClass,
  InvalidFractions,
  ClassTooSmall,
  // experiments
  InvalidConfig,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Errors that belong to the caller's configuration rather than the data.
bool is_config_error(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what,
        std::optional<std::size_t> index = std::nullopt)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind),
        index_(index) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Position associated with the failure (pair index, sample index, row).
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> index_;
};

}  // namespace evifuse
