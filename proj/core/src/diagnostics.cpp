#include "larmor/diagnostics.hpp"

#include <cmath>

#include "larmor/errors.hpp"

namespace larmor {

double energy(const State& s, const Potential& p) {
  return 0.5 * dot(s.v, s.v) + p.value(s.x);
}

double moment(const Vec3& v, const Vec3& b_field) {
  const double b = norm(b_field);
  if (b == 0.0) throw ZeroFieldError("moment: zero magnetic field");
  const Vec3 bv = matvec(skew(b_field), v);
  return dot(bv, bv) / (2.0 * b * b * b);
}

DriftSummary drift_summary(std::span<const SampleRecord> series, DriftField field,
                           double window_start, double window_end) {
  DriftSummary out;
  out.window_start = window_start;
  out.window_end = window_end;

  const auto err_of = [field](const SampleRecord& rec) {
    return field == DriftField::Energy ? rec.rel_energy_err : rec.rel_moment_err;
  };

  long n = 0;
  double sum_t = 0.0, sum_e = 0.0;
  for (const SampleRecord& rec : series) {
    if (rec.t < window_start || rec.t > window_end) continue;
    out.max_abs_rel_err = std::max(out.max_abs_rel_err, std::fabs(err_of(rec)));
    ++n;
    sum_t += rec.t;
    sum_e += err_of(rec);
  }
  if (n < 10) {
    throw EmptyWindowError("drift_summary: fewer than 10 samples in window [" +
                           std::to_string(window_start) + ", " + std::to_string(window_end) + "]");
  }

  // Centered least squares: slope = sum (t - tbar)(e - ebar) / sum (t - tbar)^2.
  const double t_bar = sum_t / static_cast<double>(n);
  const double e_bar = sum_e / static_cast<double>(n);
  double s_tt = 0.0, s_te = 0.0;
  for (const SampleRecord& rec : series) {
    if (rec.t < window_start || rec.t > window_end) continue;
    const double dt = rec.t - t_bar;
    s_tt += dt * dt;
    s_te += dt * (err_of(rec) - e_bar);
  }
  out.fitted_slope = s_tt == 0.0 ? 0.0 : s_te / s_tt;
  return out;
}

}  // namespace larmor
