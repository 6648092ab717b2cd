#pragma once

#include <stdexcept>
#include <string>

namespace pisum {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Division by zero, square root of a negative number, zero-norm divisor.
class MathError : public Error {
 public:
  using Error::Error;
};

/// Binary operation on two quadratic-field values with different radicands.
class RadicandMismatch : public MathError {
 public:
  using MathError::MathError;
};

/// A reference constant or intermediate carries fewer digits than required.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

/// Request outside what an operation supports (precision caps, closed-form
/// points, series kinds).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Malformed catalog document or number literal.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace pisum
