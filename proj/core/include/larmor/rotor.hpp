#pragma once

#include "larmor/linalg3.hpp"

namespace larmor {

/// Per-stepsize cache of the matrix functions exp(A), phi1(A), phi2(A) for
/// A = (h/eps) * skew(B), together with their values at -A.
///
/// phi0(z) = e^z and phi_k(z) = \int_0^1 e^{(1-sigma) z} sigma^{k-1}/(k-1)! dsigma
/// for k = 1, 2. A 3x3 skew matrix satisfies A^3 = -theta^2 A with
/// theta = h|B|/eps, so every analytic f(A) collapses to
///
///   f(A) = f(0) I + (Im f(i theta)/theta) A + ((f(0) - Re f(i theta))/theta^2) A^2,
///
/// which is evaluated in closed form; no general matrix exponential is used.
/// Immutable after construction: changing h or eps requires a new Rotor.
struct Rotor {
  double theta = 0.0;  ///< gyration angle per step, h|B|/eps (signed like h)
  double h = 0.0;      ///< stepsize the cache was built for
  double eps = 0.0;    ///< scaling parameter
  Vec3 b_field{};      ///< magnetic field the cache was built for

  Mat3 expA;      ///< e^{A}
  Mat3 phi1A;     ///< phi1(A)
  Mat3 phi2A;     ///< phi2(A)
  Mat3 expNegA;   ///< e^{-A}  (equals expA^T)
  Mat3 phi1NegA;  ///< phi1(-A) (equals phi1A^T)
  Mat3 phi2NegA;  ///< phi2(-A) (equals phi2A^T)
};

/// Builds the matrix-function cache for A = (h/eps) * skew(b_field).
///
/// Requires finite inputs, eps > 0 and h != 0; h < 0 is legal (it is used by
/// the time-symmetry checks). b_field = 0 is legal and gives exp = I,
/// phi1 = I, phi2 = I/2. Below a small-angle threshold the scalar
/// coefficients switch to Taylor series to avoid cancellation.
Rotor build_rotor(const Vec3& b_field, double h, double eps);

/// Max entrywise residual of phi1(-A) e^{A} - phi1(A), which vanishes
/// identically for the exact matrix functions. Test oracle; values above
/// ~1e-12 indicate a broken cache.
double phi_identity_check(const Rotor& r);

}  // namespace larmor
