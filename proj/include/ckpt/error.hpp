#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ckpt {

enum class ErrorKind {
  EmptyLog,
  NoFailures,
  NonPositiveMttf,
  NegativeTime,
  ProbabilityOutOfRange,
  NonPositiveInterval,
  BelowBranchPoint,
  DegenerateInput,
  NoConvergence,
  NonPositiveResult,
  WorkNotDivisible,
  BudgetExceeded,
  OutOfSweepRange,
  InvalidConfig,
  ParseError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries an ErrorKind so that callers
/// (the CLI in particular) can map it onto a stable exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Malformed input file row.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorKind::ParseError,
              "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace ckpt
