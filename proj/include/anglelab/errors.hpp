#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace anglelab {

// Bad user input: malformed specs, out-of-range parameters. The CLI maps
// these to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public ValidationError {
 public:
  ParseError(std::size_t position, const std::string& expected,
             const std::string& text);
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// Requested estimation method does not apply to the body.
class UnsupportedMethodError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Mathematical domain violations (non-positive gamma argument, coincident
// triangle vertices, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class DuplicatePointError : public DomainError {
 public:
  DuplicatePointError(std::size_t first, std::size_t second);
  std::size_t first() const noexcept { return first_; }
  std::size_t second() const noexcept { return second_; }

 private:
  std::size_t first_;
  std::size_t second_;
};

class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace anglelab
