#pragma once

#include <stdexcept>
#include <string>

namespace tml {

// Base of every error raised by the library. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the supported numeric range (sieve limit, table coverage).
class BoundsError : public Error {
 public:
  using Error::Error;
};

// Argument violates a mathematical hypothesis (n = 0, nonpositive g(p), ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Work or storage would exceed a hard cap (overflow, enumeration size, scan budget).
class CapacityError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// An internal consistency check failed; indicates an arithmetic bug.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace tml
