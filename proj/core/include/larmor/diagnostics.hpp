#pragma once

#include <span>

#include "larmor/integrator.hpp"
#include "larmor/linalg3.hpp"
#include "larmor/potential.hpp"

namespace larmor {

/// Total energy E(x, v) = 1/2 |v|^2 + U(x).
double energy(const State& s, const Potential& p);

/// Magnetic moment I(v, B) = |skew(B) v|^2 / (2 |B|^3) = |v_perp|^2 / (2 |B|),
/// the adiabatic invariant of the dynamics. Throws ZeroFieldError for B = 0.
double moment(const Vec3& v, const Vec3& b_field);

/// One diagnostic output row. Relative errors are taken against the initial
/// (t = t0) values of the run; when an initial value is below 1e-300 the
/// error column holds the absolute error instead (flagged in the run summary).
struct SampleRecord {
  double t = 0.0;
  Vec3 x{};
  Vec3 v{};
  double energy = 0.0;
  double moment = 0.0;
  double rel_energy_err = 0.0;
  double rel_moment_err = 0.0;
  int fp_iters = 0;
};

/// Max absolute relative error and least-squares error-vs-time slope over a
/// time window; quantifies secular drift of a conserved quantity.
struct DriftSummary {
  double max_abs_rel_err = 0.0;
  double fitted_slope = 0.0;  ///< per unit time
  double window_start = 0.0;
  double window_end = 0.0;
};

enum class DriftField { Energy, Moment };

/// Scans the samples with t in [window_start, window_end] (at least 10
/// required, else EmptyWindowError) and fits rel_err ~ a + slope * t by
/// ordinary least squares.
DriftSummary drift_summary(std::span<const SampleRecord> series, DriftField field,
                           double window_start, double window_end);

}  // namespace larmor
