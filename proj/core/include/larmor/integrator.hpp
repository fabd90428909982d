#pragma once

#include <functional>

#include "larmor/linalg3.hpp"
#include "larmor/potential.hpp"
#include "larmor/quadrature.hpp"
#include "larmor/rotor.hpp"

namespace larmor {

/// Trajectory point of the first-order system x' = v, v' = (1/eps) v x B + F(x).
struct State {
  double t = 0.0;
  Vec3 x{};
  Vec3 v{};
};

/// Fixed-point iteration settings for the implicit position update.
/// tol is a max-norm tolerance on successive position iterates; the paper
/// regime runs it at 1e-16, i.e. at the rounding floor, so the iteration
/// also accepts an exact stall (two consecutive equal residuals).
struct FpSettings {
  double tol = 1e-16;
  int max_iter = 50;
};

/// Post-step state plus fixed-point iteration statistics. For explicit
/// schemes fp_iters and fp_residual are 0. A stalled (but accepted) fixed
/// point may report fp_residual slightly above tol; see FpSettings.
struct StepReport {
  State state;
  int fp_iters = 0;
  double fp_residual = 0.0;
};

/// One step of the exponential energy-preserving scheme
///
///   x1 = x0 + h phi1(A) v0 + h^2 phi2(A) I(x0, x1),
///   v1 = e^A v0 + h phi1(A) I(x0, x1),       A = (h/eps) skew(B),
///
/// where I(x0, x1) is the line-averaged force evaluated with `rule`. The
/// implicit first line is solved by fixed-point iteration starting from
/// x0 + h phi1(A) v0; the velocity is then explicit, reusing the converged
/// averaged force. The rotor must have been built with the run's h and eps
/// (h < 0 is legal for time-reversal checks).
/// Throws FixedPointDivergedError and propagates SingularPointError.
StepReport eep_step(const State& s, const Rotor& rotor, const Potential& p,
                    const GaussRule& rule, const FpSettings& fp);

/// One step of the synchronized Boris scheme (velocity collocated with the
/// position at integer times, so conserved-quantity diagnostics compare like
/// with like): half-kick with F(x0), exact-angle rotation about B using the
/// tan(theta/2) Boris construction with theta = h|B|/eps, drift with the
/// rotated velocity, half-kick with F(x1). B = 0 reduces to velocity Verlet.
State boris_step(const State& s, const Vec3& b_field, double eps, double h, const Potential& p);

/// One classical RK4 step on the first-order system.
State rk4_step(const State& s, const Vec3& b_field, double eps, double h, const Potential& p);

/// Reference trajectory by classical RK4, used to measure global errors of
/// the other schemes. Requires h_ref |B|/eps <= 0.05 (ResolutionError
/// otherwise); the actual stepsize is adjusted so the trajectory lands
/// exactly on t_end.
State rk4_reference(const State& s0, const Vec3& b_field, double eps, const Potential& p,
                    double t_end, double h_ref);

enum class Method { Eep, Boris, Rk4 };

/// Everything integrate() needs besides the potential and initial state.
struct IntegratorSetup {
  Method method = Method::Eep;
  Vec3 b_field{0.0, 0.0, 1.0};
  double epsilon = 1.0;
  double h = 0.01;
  GaussRule rule;       ///< used by the EEP method only
  FpSettings fp;        ///< used by the EEP method only
};

/// Iterates the chosen step map from s0 to t_end in round((t_end - t0)/h)
/// steps and feeds every sample_every-th state (step 0 included) plus the
/// final state to the sink. sample_every <= 0 emits only the first and final
/// states. Step failures are rethrown as StepFailureError with the failing
/// step index and time.
void integrate(const IntegratorSetup& setup, const Potential& p, const State& s0, double t_end,
               long sample_every, const std::function<void(long step, const StepReport&)>& sink);

/// Number of steps integrate() will take: round((t_end - t0)/h).
long step_count(double t0, double t_end, double h);

}  // namespace larmor
