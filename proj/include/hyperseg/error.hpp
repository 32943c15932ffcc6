#pragma once

// Exception hierarchy shared by every hyperseg module.

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hyperseg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller passed a value outside an operation's domain.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A configuration value (dimension, window, ...) is unusable.
class InvalidConfiguration : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed input record; line is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line), detail_(what) {}

  [[nodiscard]] std::size_t line() const noexcept { return line_; }
  [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

// Well-formed record that violates a data invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace hyperseg
