#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hamflow {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. `offset` is the byte position where parsing stopped.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Well-formed input that breaks a domain rule (unknown or duplicate id,
// non-positive capacity, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// The model provably admits no assignment satisfying its constraints.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class SearchSpaceTooLarge : public Error {
 public:
  using Error::Error;
};

}  // namespace hamflow
