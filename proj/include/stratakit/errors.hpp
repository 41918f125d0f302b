#pragma once

#include <stdexcept>
#include <string>

namespace stratakit {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: non-finite coordinates, dimension mismatches,
/// empty inputs where a nonempty one is required, unbounded polytopes.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// The input is well formed but the operation does not support it
/// (for example a Hausdorff distance involving an unbounded flat).
class UnsupportedInput : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The cone-control constant does not exist because the reference
/// direction sits on the relative boundary of the cone.
class UnboundedGamma : public Error {
 public:
  using Error::Error;
};

/// A statement that holds whenever the hypotheses hold failed numerically.
class ContradictionError : public Error {
 public:
  using Error::Error;
};

/// A sampling campaign produced no admissible samples where some were needed.
class InsufficientSample : public Error {
 public:
  using Error::Error;
};

/// Scene or grid files that fail to parse or validate. The message carries
/// the offending field path or byte offset.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace stratakit
