#pragma once

#include <stdexcept>
#include <string>

namespace cbohf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arguments that violate an operation's preconditions.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Unsupported unit pair or a value outside a function's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input.  `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Near-singular overlap metric.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

/// An allocation that would exceed the configured memory budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver failed to reach its convergence criteria.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A file could not be read or written.  The message names the path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cbohf
