#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gerbecalc {

// Malformed input text. `offset` is a byte offset into the parsed string.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Domain errors during evaluation (division by zero, log of zero).
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller violated a documented precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Chart representatives of a supposedly global object disagree on an overlap.
class GluingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gerbecalc
