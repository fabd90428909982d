#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "larmor/linalg3.hpp"

namespace larmor {

/// Scalar potential U(x) with gradient access. The electric force is
/// F(x) = -grad U(x). Implementations are immutable and value/gradient are
/// pure, so potentials may be shared freely across threads.
class Potential {
 public:
  virtual ~Potential() = default;

  virtual double value(const Vec3& x) const = 0;
  virtual Vec3 gradient(const Vec3& x) const = 0;
  virtual std::string name() const = 0;

  Vec3 force(const Vec3& x) const { return -gradient(x); }
};

/// U(x) = k / sqrt(x1^2 + x2^2): a Coulomb-like potential of the transverse
/// radius, singular on the x3-axis and invariant under rotations about it.
/// Throws SingularPointError when x1^2 + x2^2 <= 1e-300.
class CoulombXYPotential final : public Potential {
 public:
  explicit CoulombXYPotential(double strength = 0.01) : k_(strength) {}

  double value(const Vec3& x) const override;
  Vec3 gradient(const Vec3& x) const override;
  std::string name() const override { return "coulomb-xy"; }

  double strength() const { return k_; }

 private:
  double k_;
};

/// U(x) = 1/2 x^T Q x with symmetric positive semidefinite Q, so the force
/// F(x) = -Q x is linear in x. With a linear force the line-averaged force
/// integrand is degree 1, which any Gauss rule integrates exactly.
class QuadraticPotential final : public Potential {
 public:
  QuadraticPotential() : q_(Mat3::identity()) {}
  explicit QuadraticPotential(const Mat3& q);
  /// Diagonal Q = diag(d).
  explicit QuadraticPotential(const Vec3& d)
      : q_(Mat3{{d.x, 0, 0, 0, d.y, 0, 0, 0, d.z}}) {}

  double value(const Vec3& x) const override { return 0.5 * dot(x, matvec(q_, x)); }
  Vec3 gradient(const Vec3& x) const override { return matvec(q_, x); }
  std::string name() const override { return "quadratic"; }

  const Mat3& q() const { return q_; }

 private:
  Mat3 q_;
};

/// Potential defined by a user callback; the gradient falls back to central
/// finite differences with delta = 1e-6 * max(1, |x|) when no analytic
/// gradient is supplied (documented accuracy loss ~1e-8).
class UserDefinedPotential final : public Potential {
 public:
  using ValueFn = std::function<double(const Vec3&)>;
  using GradientFn = std::function<Vec3(const Vec3&)>;

  explicit UserDefinedPotential(ValueFn value, GradientFn gradient = nullptr,
                                std::string name = "user-defined")
      : value_(std::move(value)), gradient_(std::move(gradient)), name_(std::move(name)) {}

  double value(const Vec3& x) const override { return value_(x); }
  Vec3 gradient(const Vec3& x) const override;
  std::string name() const override { return name_; }

 private:
  ValueFn value_;
  GradientFn gradient_;
  std::string name_;
};

/// Builds a potential from a config-file name plus numeric parameters.
/// Known names: "coulomb-xy" (params: [strength], default 0.01),
/// "quadratic" (params: [d1 d2 d3] diagonal of Q, default identity),
/// "zero" (no params; U = 0 everywhere).
/// Throws ConfigError for unknown names or bad parameter counts.
std::unique_ptr<Potential> make_potential(const std::string& name,
                                          const std::vector<double>& params = {});

}  // namespace larmor
