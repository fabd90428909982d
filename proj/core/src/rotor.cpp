#include "larmor/rotor.hpp"

#include <cmath>
#include <stdexcept>

#include "larmor/errors.hpp"

namespace larmor {
namespace {

// Scalar coefficient functions of the closed forms, all even in theta:
//   s1 = sin(t)/t              s2 = (1-cos(t))/t^2
//   s3 = (t-sin(t))/t^3        s5 = (1/2 - (1-cos(t))/t^2)/t^2
// Each equals sum_{k>=0} (-1)^k t^{2k}/(2k+m)! for m = 1,2,3,4. Below the
// switchover the closed forms lose up to 8 digits to cancellation (worst for
// s3 and s5), so a 9-term series is used there; at theta = 0.25 both branches
// are accurate to ~1e-15 relative.
constexpr double kSeriesThreshold = 0.25;

double trig_series(double t2, int m) {
  // sum_{k=0..8} (-1)^k t^{2k}/(2k+m)!
  double factorial = 1.0;
  for (int i = 2; i <= m; ++i) factorial *= i;
  double term = 1.0 / factorial;
  double sum = term;
  for (int k = 1; k <= 8; ++k) {
    term *= -t2 / ((2 * k + m) * (2 * k + m - 1));
    sum += term;
  }
  return sum;
}

struct Coeffs {
  double s1, s2, s3, s5;
};

Coeffs scalar_coeffs(double theta) {
  const double t = std::fabs(theta);
  if (t < kSeriesThreshold) {
    const double t2 = theta * theta;
    return {trig_series(t2, 1), trig_series(t2, 2), trig_series(t2, 3), trig_series(t2, 4)};
  }
  const double t2 = theta * theta;
  const double sh = std::sin(theta / 2.0);
  const double s1 = std::sin(theta) / theta;
  const double s2 = 2.0 * sh * sh / t2;  // cancellation-free form of (1-cos)/t^2
  const double s3 = (theta - std::sin(theta)) / (t2 * theta);
  const double s5 = (0.5 - s2) / t2;
  return {s1, s2, s3, s5};
}

// f(A) = a0 I + a1 A + a2 A^2; the sign of A carries the sign of h.
Mat3 assemble(double a0, double a1, double a2, const Mat3& a, const Mat3& a2m) {
  return a0 * Mat3::identity() + a1 * a + a2 * a2m;
}

}  // namespace

Rotor build_rotor(const Vec3& b_field, double h, double eps) {
  if (!is_finite(b_field)) throw std::invalid_argument("build_rotor: non-finite magnetic field");
  if (!std::isfinite(h) || h == 0.0) throw std::invalid_argument("build_rotor: h must be finite and nonzero");
  if (!std::isfinite(eps) || eps <= 0.0) throw std::invalid_argument("build_rotor: eps must be finite and positive");

  Rotor r;
  r.h = h;
  r.eps = eps;
  r.b_field = b_field;
  r.theta = h * norm(b_field) / eps;

  const double scale = h / eps;
  const Mat3 a = scale * skew(b_field);
  const Mat3 a2 = matmul(a, a);  // exactly symmetric: (A^2)_ij and (A^2)_ji round identically

  const Coeffs c = scalar_coeffs(r.theta);

  r.expA = assemble(1.0, c.s1, c.s2, a, a2);
  r.phi1A = assemble(1.0, c.s2, c.s3, a, a2);
  r.phi2A = assemble(0.5, c.s3, c.s5, a, a2);
  r.expNegA = assemble(1.0, -c.s1, c.s2, a, a2);
  r.phi1NegA = assemble(1.0, -c.s2, c.s3, a, a2);
  r.phi2NegA = assemble(0.5, -c.s3, c.s5, a, a2);
  return r;
}

double phi_identity_check(const Rotor& r) {
  return max_abs(matmul(r.phi1NegA, r.expA) - r.phi1A);
}

}  // namespace larmor
