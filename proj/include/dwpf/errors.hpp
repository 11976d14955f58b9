#pragma once

#include <stdexcept>
#include <string>

namespace dwpf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// (n, N) do not define a primitive root of unity.
class CoprimalityError : public Error {
 public:
  using Error::Error;
};

/// A state variable or vertex index is outside [1, N].
class IndexRangeError : public Error {
 public:
  using Error::Error;
};

/// Enumeration or contraction would exceed the configured work/memory cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Malformed plugin document or weight formula.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Caller-supplied data violates an operation's precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace dwpf
