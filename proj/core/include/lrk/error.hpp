#pragma once

#include <stdexcept>
#include <string>

namespace lrk {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (e.g. p = 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation was violated by the caller.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The periodic phase-space grid cannot represent the requested evolution.
class AliasingError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed to reach its accuracy target.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Internal consistency check failed; indicates a bug, not bad input.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace lrk
