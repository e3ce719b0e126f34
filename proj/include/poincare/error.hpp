#pragma once

#include <stdexcept>
#include <string>

namespace poincare {

/// Machine-readable failure category carried by every library exception.
enum class ErrorCode {
  NoSignChange,
  NonFinite,
  NoConvergence,
  DomainError,
  Unsupported,
  EmptyMesh,
  DegenerateCell,
  InvalidMesh,
  SolverFailure,
  MismatchedDomain,
  MixedBoundaryCell,
  UnmappableGammaPart,
  TraceMismatch,
  NegativeRadicand,
  SyntaxError,
  UnknownIdentifier,
  SchemaError,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoSignChange: return "NoSignChange";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::EmptyMesh: return "EmptyMesh";
    case ErrorCode::DegenerateCell: return "DegenerateCell";
    case ErrorCode::InvalidMesh: return "InvalidMesh";
    case ErrorCode::SolverFailure: return "SolverFailure";
    case ErrorCode::MismatchedDomain: return "MismatchedDomain";
    case ErrorCode::MixedBoundaryCell: return "MixedBoundaryCell";
    case ErrorCode::UnmappableGammaPart: return "UnmappableGammaPart";
    case ErrorCode::TraceMismatch: return "TraceMismatch";
    case ErrorCode::NegativeRadicand: return "NegativeRadicand";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorCode::SchemaError: return "SchemaError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failure with a 1-based source position.
class SyntaxError : public Error {
 public:
  SyntaxError(int line, int col, std::string expected, const std::string& what)
      : Error(ErrorCode::SyntaxError,
              std::to_string(line) + ":" + std::to_string(col) + ": " + what),
        line_(line),
        col_(col),
        expected_(std::move(expected)) {}

  [[nodiscard]] int line() const noexcept { return line_; }
  [[nodiscard]] int col() const noexcept { return col_; }
  [[nodiscard]] const std::string& expected() const noexcept { return expected_; }

 private:
  int line_;
  int col_;
  std::string expected_;
};

}  // namespace poincare
