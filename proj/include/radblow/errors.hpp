#pragma once

#include <stdexcept>
#include <string>

namespace radblow {

/// Argument outside an operation's declared domain.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input data or parameters fail a hypothesis of the blow-up theorems.
class HypothesisViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite values, negative density, or a scheme that cannot proceed.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation at or past a pole.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// One side of an integral inequality is infinite.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed record in a record store or config file.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace radblow
