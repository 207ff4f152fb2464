#pragma once

#include <stdexcept>
#include <string>

namespace shearlab {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands that do not fit together (grid mismatch, missing trace terms).
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Bad parameters or configuration, detected before any compute.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// The moving-frame frequency shift left the resolved band.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

// The variable-coefficient Poisson iteration did not converge.
class EllipticError : public Error {
 public:
  using Error::Error;
};

// The coordinate inversion fixed point is not a contraction.
class InversionError : public Error {
 public:
  using Error::Error;
};

// NaN/Inf in the state or another unrecoverable floating point failure.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Field mass leaked into the outer part of the truncated box.
class SpilloverError : public Error {
 public:
  using Error::Error;
};

}  // namespace shearlab
