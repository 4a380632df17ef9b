#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace expi {

enum class ErrorKind {
  InvalidArgument,
  PrecisionTooLow,
  DivergenceRisk,
  InsufficientTerms,
  NonPositiveValue,
  SelfCheckFailed,
  NonConvergence,
  MismatchAgainstCatalog,
  PrecisionExhausted,
  NegativeInput,
  MalformedLine,
  NonContiguousIndex,
  NetworkError,
  NotFound,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so callers (the CLI,
// scan isolation) can map it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Parse errors additionally remember the 1-based line that failed.
class LineError : public Error {
 public:
  LineError(ErrorKind kind, std::size_t line, const std::string& message)
      : Error(kind, message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace expi
