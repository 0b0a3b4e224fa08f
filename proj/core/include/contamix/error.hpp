#pragma once

#include <stdexcept>
#include <string>

namespace contamix {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Point, shift or kernel dimensions disagree.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A precondition on a scalar argument does not hold.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The estimation grid would exceed the configured point budget.
class GridOverflow : public Error {
 public:
  using Error::Error;
};

/// An operation that needs observations received none.
class EmptyData : public Error {
 public:
  using Error::Error;
};

/// Malformed observation data.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Malformed or incomplete experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// File-system failure; the message carries the offending path.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A result that contradicts a mathematical identity, e.g. a zero
/// transport distance between densities that differ in L2.
class NumericalFault : public Error {
 public:
  using Error::Error;
};

}  // namespace contamix
