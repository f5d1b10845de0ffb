#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nclid {

/// Bad user input: malformed files, out-of-range ids, illegal parameters.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public InputError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A computation that cannot produce a meaningful number (non-convergence,
/// degenerate statistics).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nclid
