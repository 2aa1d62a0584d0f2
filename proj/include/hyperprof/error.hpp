#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hyperprof {

// Base class for every error raised by the library.  The CLI maps the
// concrete subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed engine spec or user-supplied configuration.
class ParseError : public Error {
 public:
  ParseError(std::string const& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Well-formed input that does not describe a valid object (bad prime,
// non-group table, incompatible tower, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A size cap was exceeded.  `partial` carries how far the computation got.
class SizeError : public Error {
 public:
  SizeError(std::string const& what, std::size_t partial)
      : Error(what + " (reached " + std::to_string(partial) + ")"), partial_(partial) {}

  std::size_t partial() const noexcept { return partial_; }

 private:
  std::size_t partial_;
};

// Malformed file contents; carries the 1-based line number.
class FormatError : public Error {
 public:
  FormatError(std::string const& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Invalid experiment configuration (missing or conflicting options).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Graph-level structural problems (disconnected input, bad indices).
class StructureError : public Error {
 public:
  using Error::Error;
};

}  // namespace hyperprof
