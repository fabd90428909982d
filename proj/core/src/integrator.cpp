#include "larmor/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "larmor/errors.hpp"

namespace larmor {

StepReport eep_step(const State& s, const Rotor& rotor, const Potential& p,
                    const GaussRule& rule, const FpSettings& fp) {
  const double h = rotor.h;
  const double h2 = h * h;
  const Vec3 base = s.x + h * matvec(rotor.phi1A, s.v);

  // Fixed point of x -> base + h^2 phi2(A) I(x0, x). Initial guess drops the
  // force term, which is O(h^2) away from the fixed point.
  Vec3 x = base;
  Vec3 avg{};
  double residual = std::numeric_limits<double>::infinity();
  int iters = 0;
  for (;;) {
    if (iters >= fp.max_iter) throw FixedPointDivergedError(residual, iters);
    avg = averaged_force(p, rule, s.x, x);
    const Vec3 x_next = base + h2 * matvec(rotor.phi2A, avg);
    const double prev = residual;
    residual = norm_inf(x_next - x);
    x = x_next;
    ++iters;
    if (residual <= fp.tol) break;
    if (residual == prev) break;  // stalled at the rounding floor
  }

  // The final x was produced from `avg`, so using the same averaged force in
  // the velocity line keeps the two update formulas mutually consistent.
  StepReport report;
  report.state.t = s.t + h;
  report.state.x = x;
  report.state.v = matvec(rotor.expA, s.v) + h * matvec(rotor.phi1A, avg);
  report.fp_iters = iters;
  report.fp_residual = residual;
  return report;
}

State boris_step(const State& s, const Vec3& b_field, double eps, double h, const Potential& p) {
  const double half = 0.5 * h;
  const Vec3 v_minus = s.v + half * p.force(s.x);

  Vec3 v_plus = v_minus;
  const double b_norm = norm(b_field);
  if (b_norm > 0.0) {
    const double theta = h * b_norm / eps;
    const Vec3 t_vec = std::tan(0.5 * theta) / b_norm * b_field;
    const Vec3 v_prime = v_minus + cross(v_minus, t_vec);
    const Vec3 s_vec = 2.0 / (1.0 + dot(t_vec, t_vec)) * t_vec;
    v_plus = v_minus + cross(v_prime, s_vec);
  }

  State out;
  out.t = s.t + h;
  out.x = s.x + h * v_plus;
  out.v = v_plus + half * p.force(out.x);
  return out;
}

namespace {

struct Deriv {
  Vec3 dx;
  Vec3 dv;
};

inline Deriv rhs(const Vec3& x, const Vec3& v, const Vec3& b_field, double inv_eps,
                 const Potential& p) {
  return {v, inv_eps * cross(v, b_field) + p.force(x)};
}

}  // namespace

State rk4_step(const State& s, const Vec3& b_field, double eps, double h, const Potential& p) {
  const double inv_eps = 1.0 / eps;
  const Deriv k1 = rhs(s.x, s.v, b_field, inv_eps, p);
  const Deriv k2 = rhs(s.x + 0.5 * h * k1.dx, s.v + 0.5 * h * k1.dv, b_field, inv_eps, p);
  const Deriv k3 = rhs(s.x + 0.5 * h * k2.dx, s.v + 0.5 * h * k2.dv, b_field, inv_eps, p);
  const Deriv k4 = rhs(s.x + h * k3.dx, s.v + h * k3.dv, b_field, inv_eps, p);

  State out;
  out.t = s.t + h;
  out.x = s.x + (h / 6.0) * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
  out.v = s.v + (h / 6.0) * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv);
  return out;
}

State rk4_reference(const State& s0, const Vec3& b_field, double eps, const Potential& p,
                    double t_end, double h_ref) {
  if (!(h_ref > 0.0)) throw std::invalid_argument("rk4_reference: h_ref must be positive");
  const double span = t_end - s0.t;
  if (span < 0.0) throw std::invalid_argument("rk4_reference: t_end before start time");
  if (span == 0.0) return s0;

  const long n = std::max<long>(1, std::llround(span / h_ref));
  const double h = span / static_cast<double>(n);
  if (h * norm(b_field) / eps > 0.05) {
    throw ResolutionError("rk4_reference: h_ref |B|/eps > 0.05 does not resolve the gyration");
  }

  State s = s0;
  for (long k = 0; k < n; ++k) {
    s = rk4_step(s, b_field, eps, h, p);
    s.t = s0.t + static_cast<double>(k + 1) * h;
  }
  return s;
}

long step_count(double t0, double t_end, double h) {
  return std::llround((t_end - t0) / h);
}

void integrate(const IntegratorSetup& setup, const Potential& p, const State& s0, double t_end,
               long sample_every, const std::function<void(long, const StepReport&)>& sink) {
  if (!std::isfinite(s0.t) || !is_finite(s0.x) || !is_finite(s0.v)) {
    throw std::invalid_argument("integrate: non-finite initial state");
  }
  const long n = step_count(s0.t, t_end, setup.h);
  if (n < 0) throw std::invalid_argument("integrate: t_end before start time");

  Rotor rotor;
  if (setup.method == Method::Eep) rotor = build_rotor(setup.b_field, setup.h, setup.epsilon);

  StepReport current;
  current.state = s0;
  sink(0, current);

  for (long k = 1; k <= n; ++k) {
    try {
      switch (setup.method) {
        case Method::Eep:
          current = eep_step(current.state, rotor, p, setup.rule, setup.fp);
          break;
        case Method::Boris:
          current = {boris_step(current.state, setup.b_field, setup.epsilon, setup.h, p), 0, 0.0};
          break;
        case Method::Rk4:
          current = {rk4_step(current.state, setup.b_field, setup.epsilon, setup.h, p), 0, 0.0};
          break;
      }
    } catch (const Error& e) {
      throw StepFailureError(k, current.state.t, e.what());
    }
    // Keep the time grid exact: t_k = t0 + k h, without accumulated rounding.
    current.state.t = s0.t + static_cast<double>(k) * setup.h;
    if (k == n || (sample_every > 0 && k % sample_every == 0)) sink(k, current);
  }
}

}  // namespace larmor
