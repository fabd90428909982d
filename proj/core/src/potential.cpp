#include "larmor/potential.hpp"

#include <cmath>

#include "larmor/errors.hpp"

namespace larmor {

namespace {
constexpr double kSingularGuard = 1e-300;
}

double CoulombXYPotential::value(const Vec3& x) const {
  const double rho2 = x.x * x.x + x.y * x.y;
  if (rho2 <= kSingularGuard) throw SingularPointError("coulomb-xy potential evaluated on the x3-axis");
  return k_ / std::sqrt(rho2);
}

Vec3 CoulombXYPotential::gradient(const Vec3& x) const {
  const double rho2 = x.x * x.x + x.y * x.y;
  if (rho2 <= kSingularGuard) throw SingularPointError("coulomb-xy potential evaluated on the x3-axis");
  // Sign checked against central differences in the test suite.
  const double s = -k_ / (rho2 * std::sqrt(rho2));
  return {s * x.x, s * x.y, 0.0};
}

QuadraticPotential::QuadraticPotential(const Mat3& q) {
  // Symmetrize so the gradient Q x matches the value 1/2 x^T Q x for any input.
  q_ = 0.5 * (q + transpose(q));
}

Vec3 UserDefinedPotential::gradient(const Vec3& x) const {
  if (gradient_) return gradient_(x);
  const double delta = 1e-6 * std::max(1.0, norm(x));
  Vec3 g;
  for (int i = 0; i < 3; ++i) {
    Vec3 xp = x;
    Vec3 xm = x;
    xp[i] += delta;
    xm[i] -= delta;
    g[i] = (value_(xp) - value_(xm)) / (2.0 * delta);
  }
  return g;
}

std::unique_ptr<Potential> make_potential(const std::string& name,
                                          const std::vector<double>& params) {
  if (name == "coulomb-xy") {
    if (params.size() > 1) throw ConfigError("potential_params: coulomb-xy takes at most one parameter (strength)");
    return std::make_unique<CoulombXYPotential>(params.empty() ? 0.01 : params[0]);
  }
  if (name == "quadratic") {
    if (params.empty()) return std::make_unique<QuadraticPotential>();
    if (params.size() != 3) throw ConfigError("potential_params: quadratic takes three parameters (diagonal of Q)");
    return std::make_unique<QuadraticPotential>(Vec3{params[0], params[1], params[2]});
  }
  if (name == "zero") {
    if (!params.empty()) throw ConfigError("potential_params: zero takes no parameters");
    return std::make_unique<UserDefinedPotential>([](const Vec3&) { return 0.0; },
                                                  [](const Vec3&) { return Vec3{}; }, "zero");
  }
  throw ConfigError("potential: unknown name '" + name + "' (known: coulomb-xy, quadratic, zero)");
}

}  // namespace larmor
