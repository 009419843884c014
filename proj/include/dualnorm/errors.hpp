#pragma once

#include <stdexcept>
#include <string>

namespace dualnorm {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Operands have incompatible dimensions.
struct DimensionMismatch : Error {
  using Error::Error;
};

/// The linear system could not be factorized even after jitter escalation.
struct NotPositiveDefinite : Error {
  using Error::Error;
};

/// A derivative was requested at a point where the norm is not differentiable
/// (the vector, or some group sub-vector, is exactly zero).
struct NonDifferentiablePoint : Error {
  using Error::Error;
};

/// Derivatives were requested for a nonsmooth norm (l1, linf).
struct UnsupportedNorm : Error {
  using Error::Error;
};

/// No closed-form dual exists for this norm (overlap group l2).
struct NoClosedForm : Error {
  using Error::Error;
};

/// A barrier quantity was evaluated outside the open unit ball.
struct InfeasiblePoint : Error {
  using Error::Error;
};

/// The target vector is identically zero; the dual value is 0 by definition.
struct ZeroInput : Error {
  using Error::Error;
};

/// Brute-force enumeration was requested above its dimension guard.
struct DimensionTooLarge : Error {
  using Error::Error;
};

/// The support Gram matrix A1'A1 is not invertible.
struct SingularGram : Error {
  using Error::Error;
};

/// No backtracking step length gave a feasible descent point.
struct LineSearchStall : Error {
  using Error::Error;
};

/// Malformed input: JSON schema, CSV contents, plan or config fields.
struct ValidationError : Error {
  using Error::Error;
};

}  // namespace dualnorm
