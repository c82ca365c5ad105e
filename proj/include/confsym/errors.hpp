#pragma once

#include <stdexcept>
#include <string>

namespace confsym {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments: dimension mismatches, out-of-range parameters.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A constraint Jacobian (or its Schur complement) lost rank.
class DegenerateConstraint : public Error {
 public:
  using Error::Error;
};

/// An integrator or iteration could not complete a step.
class StepFailure : public Error {
 public:
  StepFailure(const std::string& what, double last_residual)
      : Error(what), last_residual_(last_residual) {}

  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

}  // namespace confsym
