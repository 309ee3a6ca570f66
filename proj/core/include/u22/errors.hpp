#pragma once

#include <stdexcept>
#include <string>

namespace u22 {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Hermitian input has a leading minor at or below the positivity cutoff.
class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

/// A Hermitian input does not lie on the orbit selected by the signature.
class WrongOrbit : public Error {
 public:
  using Error::Error;
};

/// A structured value (P-, K- or U(2,2)-element) fails its defining relation.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class NotFactorizable : public Error {
 public:
  using Error::Error;
};

class DecompositionFailed : public Error {
 public:
  using Error::Error;
};

/// A character parameter sits on one of the measure-zero orbits.
class Degenerate : public Error {
 public:
  using Error::Error;
};

/// A Monte-Carlo sample produced NaN or infinity.
class NonFinite : public Error {
 public:
  using Error::Error;
};

class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace u22
