#pragma once

#include <stdexcept>
#include <string>

namespace frolov {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (dimension out of range,
/// delta outside (0, 1/2), order too large, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An iterative numerical procedure did not reach its tolerance.
class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

/// A lattice enumeration produced no node inside the requested box.
class EmptyRule : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Ratio requested with a (numerically) vanishing denominator.
class DegenerateDenominator : public Error {
 public:
  using Error::Error;
};

namespace detail {

template <class E = InvalidArgument>
inline void require(bool condition, const std::string& message) {
  if (!condition) throw E(message);
}

}  // namespace detail
}  // namespace frolov
