#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hpcoda {

// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed term, literal or triple.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Syntax error in an input document; carries a 1-based line (or character
// offset for single-line inputs such as queries).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Dataset content problem: dangling foreign key, duplicate key, bad value.
class DataError : public Error {
 public:
  using Error::Error;
};

// Failure while mapping a dataset to RDF.
class BuildError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hpcoda
