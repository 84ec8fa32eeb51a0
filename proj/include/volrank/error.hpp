#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace volrank {

/// Base class for every error raised by the library. The CLI maps each
/// subclass onto a process exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept = 0;
};

/// Operand extents do not conform (dimension mismatch, empty vector, ...).
class ShapeError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "shape"; }
};

/// A scalar argument is outside its documented range (mode, rank, k, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "argument"; }
};

/// Non-finite input or an iterative routine that failed to converge.
class NumericError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "numeric"; }
};

/// A relative quantity was requested for an input where it is undefined
/// (zero Frobenius norm, constant volume, zero peak intensity).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "degenerate"; }
};

/// Malformed binary or text input. `offset()` is the byte offset (or line
/// number for text formats) where parsing stopped.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::uint64_t offset)
      : Error(what + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}
  const char* kind() const noexcept override { return "parse"; }
  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

class IoError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "io"; }
};

}  // namespace volrank
