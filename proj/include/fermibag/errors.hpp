#pragma once

#include <stdexcept>
#include <string>

namespace fermibag {

/// Bad input to a library operation (negative index, out-of-domain value, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Resonant-only formula evaluated away from Omega = omega_k + omega_k'.
class OffResonance : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Initial/final boson states for which no closed form is implemented.
class UnsupportedStatePair : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// A numerical contract could not be met (convergence, unitarity, cutoffs).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuadratureNotConverged : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class CutoffTooSmall : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DimensionLimitExceeded : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class StepSizeViolation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NormDriftViolation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class EigensolverFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace fermibag
