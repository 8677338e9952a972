#pragma once

#include <stdexcept>
#include <string>

namespace sudler {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument lies outside the domain of an operation (undefined index,
// non-positive product term, out-of-range phase, singular angle, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// The fixed-point error budget can no longer certify the result, or the
// requested working precision is too low.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

}  // namespace sudler
