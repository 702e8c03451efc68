#include "tskfit/error.hpp"

namespace tskfit {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::UncoveredInput: return "UncoveredInput";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::ConstantColumn: return "ConstantColumn";
    case ErrorKind::DegenerateDesign: return "DegenerateDesign";
    case ErrorKind::DegenerateRange: return "DegenerateRange";
    case ErrorKind::TooFewRows: return "TooFewRows";
    case ErrorKind::MissingColumn: return "MissingColumn";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::RaggedRow: return "RaggedRow";
    case ErrorKind::EmptyFile: return "EmptyFile";
    case ErrorKind::SchemaViolation: return "SchemaViolation";
    case ErrorKind::VersionMismatch: return "VersionMismatch";
    case ErrorKind::IntegrityFailure: return "IntegrityFailure";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

namespace {

std::string compose(ErrorKind kind, const std::string& message, std::optional<std::size_t> row) {
  std::string out = to_string(kind);
  if (row) out += " (row " + std::to_string(*row) + ")";
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& message, std::optional<std::size_t> row)
    : std::runtime_error(compose(kind, message, row)), kind_(kind), row_(row), bare_message_(message) {}

Error Error::with_row(std::size_t row) const {
  if (row_) return *this;
  return Error(kind_, bare_message_, row);
}

}  // namespace tskfit
