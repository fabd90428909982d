#pragma once

#include <stdexcept>
#include <string>

namespace larmor {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Potential evaluated at (or too close to) a singular point.
class SingularPointError : public Error {
 public:
  using Error::Error;
};

/// The implicit position update did not converge within the iteration budget.
class FixedPointDivergedError : public Error {
 public:
  FixedPointDivergedError(double residual, int iterations)
      : Error("fixed-point iteration diverged: residual " + std::to_string(residual) +
              " after " + std::to_string(iterations) + " iterations"),
        residual_(residual),
        iterations_(iterations) {}

  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

/// Magnetic moment requested for a zero magnetic field.
class ZeroFieldError : public Error {
 public:
  using Error::Error;
};

/// Gauss rule order outside the supported range.
class UnsupportedOrderError : public Error {
 public:
  using Error::Error;
};

/// Reference stepsize does not resolve the gyration.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Drift window contains too few samples.
class EmptyWindowError : public Error {
 public:
  using Error::Error;
};

/// Invalid run or sweep configuration; the message names the offending field.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A time step failed mid-trajectory; carries the failing step index and time.
class StepFailureError : public Error {
 public:
  StepFailureError(long step, double t, const std::string& cause)
      : Error("step " + std::to_string(step) + " at t=" + std::to_string(t) +
              " failed: " + cause),
        step_(step),
        time_(t) {}

  long step() const { return step_; }
  double time() const { return time_; }

 private:
  long step_;
  double time_;
};

}  // namespace larmor
