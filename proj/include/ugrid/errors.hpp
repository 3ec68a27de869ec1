#pragma once

#include <stdexcept>
#include <string>

namespace ugrid {

/// A build would exceed the 32-bit id space or an oracle work guard.
class SizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition of a primitive or grid operation was violated.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Bad numeric input (NaN coordinates, degenerate bounds, ...).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ugrid
