#pragma once

#include <stdexcept>
#include <string>

namespace nsx {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation applied outside its domain (unknown coordinate, bad arity, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Numeric evaluation failed: unbound symbol, unregistered opaque function,
/// division by zero.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

class ChartMismatch : public Error {
 public:
  using Error::Error;
};

class DegreeOverflow : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

}  // namespace nsx
