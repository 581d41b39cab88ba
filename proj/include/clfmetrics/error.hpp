#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace clfmetrics {

enum class ErrorCode {
  UnknownLabel,
  EmptyInput,
  InvalidRegistry,
  ClassOutOfRange,
  RegistryMismatch,
  InvalidWeights,
  InvalidRecord,
  InvalidOptions,
  EmptyDataset,
  MixedDimensions,
  Overflow,
  IoError,
  ParseError,
  EmptyLabel,
  ProbSumOutOfTolerance,
  UnknownActualLabel,
  DuplicateClass,
  NonSquare,
  NegativeEntry,
  NameMismatch,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidRegistry: return "InvalidRegistry";
    case ErrorCode::ClassOutOfRange: return "ClassOutOfRange";
    case ErrorCode::RegistryMismatch: return "RegistryMismatch";
    case ErrorCode::InvalidWeights: return "InvalidWeights";
    case ErrorCode::InvalidRecord: return "InvalidRecord";
    case ErrorCode::InvalidOptions: return "InvalidOptions";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::MixedDimensions: return "MixedDimensions";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::EmptyLabel: return "EmptyLabel";
    case ErrorCode::ProbSumOutOfTolerance: return "ProbSumOutOfTolerance";
    case ErrorCode::UnknownActualLabel: return "UnknownActualLabel";
    case ErrorCode::DuplicateClass: return "DuplicateClass";
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::NameMismatch: return "NameMismatch";
  }
  return "Unknown";
}

/// Every failure in the library surfaces as this exception. Input errors
/// carry the 1-based line (and column, where one field is at fault).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail,
        std::optional<std::size_t> line = std::nullopt,
        std::optional<std::size_t> column = std::nullopt)
      : std::runtime_error(compose(code, detail, line, column)),
        code_(code),
        line_(line),
        column_(column) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> line() const noexcept { return line_; }
  std::optional<std::size_t> column() const noexcept { return column_; }

 private:
  static std::string compose(ErrorCode code, const std::string& detail,
                             std::optional<std::size_t> line,
                             std::optional<std::size_t> column) {
    std::string msg(to_string(code));
    if (line) {
      msg += " at line " + std::to_string(*line);
      if (column) msg += ", column " + std::to_string(*column);
    }
    if (!detail.empty()) msg += ": " + detail;
    return msg;
  }

  ErrorCode code_;
  std::optional<std::size_t> line_;
  std::optional<std::size_t> column_;
};

}  // namespace clfmetrics
