#include "anglelab/errors.hpp"

namespace anglelab {

ParseError::ParseError(std::size_t position, const std::string& expected,
                       const std::string& text)
    : ValidationError("parse error at position " + std::to_string(position) +
                      ": expected " + expected + " in '" + text + "'"),
      position_(position) {}

DuplicatePointError::DuplicatePointError(std::size_t first, std::size_t second)
    : DomainError("points " + std::to_string(first) + " and " +
                  std::to_string(second) + " coincide"),
      first_(first),
      second_(second) {}

}  // namespace anglelab
