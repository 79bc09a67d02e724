#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chaincluster {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (bad field, wrong arity). Carries the 1-based line
// number of the offending line when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A precondition or domain constraint was violated by the caller.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A numerical routine failed to converge or produced an inconsistent state.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace chaincluster
