#pragma once

#include <stdexcept>
#include <string>

namespace pwell {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes, domains or parameters that violate a precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not produce a result (bracket failure, NaN, ...).
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// Malformed experiment configuration; carries the offending line when known.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace pwell
