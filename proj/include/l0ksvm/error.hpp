#pragma once

#include <stdexcept>
#include <string>

namespace l0ksvm {

/// Bad user input: shapes, labels, missing files, single-class data.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid hyperparameters or kernel parameters.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input; carries the 1-based line number.
class ParseError : public InputError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A linear solve that could not be completed even after regularization.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double condition_estimate)
      : std::runtime_error(what + " (reciprocal condition estimate " +
                           std::to_string(condition_estimate) + ")"),
        rcond_(condition_estimate) {}
  double rcond() const noexcept { return rcond_; }

 private:
  double rcond_;
};

/// Caller violated a documented precondition (e.g. a multiplier with the wrong sign pattern).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace l0ksvm
