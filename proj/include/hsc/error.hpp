#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hsc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad flag values or an encoder configuration that cannot be satisfied.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed mesh text. `line()` is 1-based; 0 when no line applies.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Corrupt, truncated or unsupported .hsc container.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Non-convergence, singular operators, degenerate geometry.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace hsc
