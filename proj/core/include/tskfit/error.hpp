#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace tskfit {

enum class ErrorKind {
  InvalidArgument,
  ArityMismatch,
  NonFinite,
  UncoveredInput,
  DivisionByZero,
  ConstantColumn,
  DegenerateDesign,
  DegenerateRange,
  TooFewRows,
  MissingColumn,
  ParseError,
  RaggedRow,
  EmptyFile,
  SchemaViolation,
  VersionMismatch,
  IntegrityFailure,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

// Single exception type for the library. Row numbers are 1-based when present.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::optional<std::size_t> row = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::size_t> row() const noexcept { return row_; }

  // Same error with a row number attached (keeps an existing one).
  Error with_row(std::size_t row) const;

 private:
  ErrorKind kind_;
  std::optional<std::size_t> row_;
  std::string bare_message_;
};

}  // namespace tskfit
