#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ary {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file or record. `line` is 1-based, 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A caller violated an operation precondition (bad argument, empty input...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace ary
