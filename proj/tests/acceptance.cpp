// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Heavier runs reuse each other's trajectories where the
// configurations coincide.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "larmor/diagnostics.hpp"
#include "larmor/errors.hpp"
#include "larmor/experiment.hpp"
#include "test_oracles.hpp"

using namespace larmor;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int idx, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d (%s): %s\n", ok ? "PASS" : "FAIL", idx, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

RunConfig experiment_config() {
  RunConfig cfg;
  cfg.method = Method::Eep;
  cfg.potential = "coulomb-xy";
  cfg.b_field = {0, 0, 1};
  cfg.x0 = {0.7, 1.0, 0.1};
  cfg.v0 = {0.9, 0.5, 0.4};
  cfg.h = 0.01;
  return cfg;
}

// --- 1. energy exactness where the quadrature is exact -----------------------
void criterion_energy_exactness() {
  RunConfig cfg = experiment_config();
  cfg.potential = "quadratic";
  cfg.epsilon = 0.01;
  cfg.h = 0.01;
  cfg.t_end = 1000.0;  // 1e5 steps
  const RunResult res = run_trajectory(cfg);
  const double drift = res.summary.energy_drift.max_abs_rel_err;
  report(1, "energy exactness, linear force", res.summary.steps == 100000 && drift <= 1e-10,
         "max |rel energy err| = " + fmt(drift) + " over " + std::to_string(res.summary.steps) +
             " steps (tol 1e-10)");
}

// --- 2. long-run energy stability (figure 1 setup) ---------------------------
// Returns the eps=1e-4 run's max energy error for reuse by criterion 6.
double criterion_energy_longrun() {
  bool ok = true;
  std::string detail;
  double max_err_small_eps = 0.0;
  for (const double eps : {0.01, 0.0001}) {
    RunConfig cfg = experiment_config();
    cfg.epsilon = eps;
    cfg.t_end = 10000.0;
    const RunResult res = run_trajectory(cfg);
    const DriftSummary second_half =
        drift_summary(res.samples, DriftField::Energy, 5000.0, 10000.0);
    const double max_err = res.summary.energy_drift.max_abs_rel_err;
    const double slope = std::fabs(second_half.fitted_slope);
    if (eps == 0.0001) max_err_small_eps = max_err;
    ok = ok && max_err <= 1e-8 && slope <= 1e-14;
    detail += "eps=" + fmt(eps) + ": max=" + fmt(max_err) + ", |slope|=" + fmt(slope) + "  ";
  }
  report(2, "figure-1 energy stability", ok, detail + "(tol 1e-8, slope 1e-14)");
  return max_err_small_eps;
}

// --- 3. moment error scaling under step halving ------------------------------
void criterion_moment_scaling() {
  // h = 0.01 (the experiment stepsize) versus h/2; theta = h|B|/eps = 1.
  double max_err[2];
  double cos_half[2];
  const double h0 = 0.01;
  for (int i = 0; i < 2; ++i) {
    RunConfig cfg = experiment_config();
    cfg.epsilon = 0.01;
    cfg.h = i == 0 ? h0 : h0 / 2.0;
    cfg.t_end = 1000.0;
    const RunResult res = run_trajectory(cfg);
    max_err[i] = res.summary.moment_drift.max_abs_rel_err;
    cos_half[i] = res.summary.cos_half_theta;
  }
  const double ratio = max_err[0] / max_err[1];
  const bool ok = ratio >= 1.4 && ratio <= 2.8;
  report(3, "moment error h-scaling", ok,
         "max(h)=" + fmt(max_err[0]) + ", max(h/2)=" + fmt(max_err[1]) + ", ratio=" + fmt(ratio) +
             " (band [1.4, 2.8]); cos(h w/2)=" + fmt(cos_half[0]) + ", " + fmt(cos_half[1]) +
             "; the h-independent floor equals the exact flow's adiabatic oscillation");

  // Context for the line above (not a criterion): with the gyration angle
  // h|B|/eps held at 1 (eps scaled together with h), the moment error does
  // halve with h, so the O(h) behaviour is real but sits below the fixed-eps
  // floor for this scheme.
  double tied[2];
  for (int i = 0; i < 2; ++i) {
    RunConfig cfg = experiment_config();
    cfg.h = i == 0 ? h0 : h0 / 2.0;
    cfg.epsilon = cfg.h;
    cfg.t_end = 1000.0;
    tied[i] = run_trajectory(cfg).summary.moment_drift.max_abs_rel_err;
  }
  std::printf("[INFO] criterion 3 context: with eps tied to h (theta fixed at 1) the ratio is %s\n",
              fmt(tied[0] / tied[1]).c_str());
}

// --- 4. time symmetry --------------------------------------------------------
void criterion_symmetry() {
  const CoulombXYPotential pot;
  const GaussRule rule = gauss_rule(4);
  const double eps = 0.05;
  std::mt19937_64 rng(271828);
  std::uniform_real_distribution<double> dx(-0.25, 0.25);
  std::uniform_real_distribution<double> dv(-1.0, 1.0);
  std::uniform_real_distribution<double> dh(1e-3, 1e-1);

  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const State s{0.0, Vec3{0.7 + dx(rng), 1.0 + dx(rng), 0.1 + dx(rng)},
                  Vec3{dv(rng), dv(rng), dv(rng)}};
    const double h = dh(rng);
    const Rotor fwd = build_rotor({0, 0, 1}, h, eps);
    const Rotor bwd = build_rotor({0, 0, 1}, -h, eps);
    const StepReport ahead = eep_step(s, fwd, pot, rule, FpSettings{});
    const StepReport back = eep_step(ahead.state, bwd, pot, rule, FpSettings{});
    worst = std::max({worst, norm_inf(back.state.x - s.x), norm_inf(back.state.v - s.v)});
  }
  report(4, "time symmetry", worst <= 1e-9,
         "worst forward-backward defect over 50 random states = " + fmt(worst) + " (tol 1e-9)");
}

// --- 5. phi identities from the conservation proof ---------------------------
void criterion_phi_identities() {
  std::mt19937_64 rng(161803);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  double worst_residual = 0.0;
  double worst_quadform = 0.0;
  for (const double theta : {1e-6, 1e-2, 1.0, 10.0, 100.0}) {
    const Rotor r = build_rotor({0, 0, 1}, theta, 1.0);
    worst_residual = std::max(worst_residual, phi_identity_check(r));
    const Mat3 m = matmul(r.phi1NegA, r.phi1A) - 2.0 * r.phi2A;
    for (int trial = 0; trial < 100; ++trial) {
      const Vec3 w{dist(rng), dist(rng), dist(rng)};
      worst_quadform = std::max(worst_quadform, std::fabs(dot(w, matvec(m, w))) / dot(w, w));
    }
  }
  const bool ok = worst_residual <= 1e-12 && worst_quadform <= 1e-12;
  report(5, "phi identities", ok,
         "max |phi1(-A)e^A - phi1(A)| = " + fmt(worst_residual) +
             ", max |w'(phi1(-A)phi1(A) - 2 phi2(A))w|/|w|^2 = " + fmt(worst_quadform) +
             " (tol 1e-12)");
}

// --- 6. boris comparison -----------------------------------------------------
void criterion_boris_comparison(double eep_max_energy_err) {
  RunConfig cfg = experiment_config();
  cfg.method = Method::Boris;
  cfg.epsilon = 0.0001;
  cfg.t_end = 10000.0;
  const RunResult res = run_trajectory(cfg);
  const double boris_err = res.summary.energy_drift.max_abs_rel_err;
  const bool ok = boris_err >= 10.0 * eep_max_energy_err;
  report(6, "boris energy error exceeds eep's", ok,
         "boris max = " + fmt(boris_err) + ", eep max = " + fmt(eep_max_energy_err) + ", factor " +
             fmt(boris_err / eep_max_energy_err) + " (needs >= 10)");
}

// --- 7. convergence against the rk4 reference --------------------------------
void criterion_convergence() {
  SweepConfig sc;
  sc.base = experiment_config();
  sc.base.epsilon = 0.05;
  sc.base.t_end = 10.0;
  sc.h_list = {1.0 / 50.0, 1.0 / 100.0, 1.0 / 200.0, 1.0 / 400.0};
  sc.base.h = sc.h_list.front();
  // reference rule: h_ref = min(0.005 eps/|B|, h_min/16) resolves the gyration
  const auto rows = sweep_errors(sc);

  bool monotone = true;
  for (size_t i = 1; i < rows.size(); ++i) {
    monotone = monotone && rows[i].global_x_error < rows[i - 1].global_x_error &&
               rows[i].global_v_error < rows[i - 1].global_v_error;
  }
  const double final_order = rows.back().observed_order;
  const bool ok = monotone && rows.back().has_order && final_order >= 1.5 && final_order <= 2.5;
  std::string detail = monotone ? "errors monotone decreasing, " : "errors NOT monotone, ";
  detail += "observed order on final halving = " + fmt(final_order) + " (band [1.5, 2.5])";
  report(7, "figure-4 convergence", ok, detail);
}

// --- 8. rotor closed forms against the independent oracles -------------------
void criterion_rotor_oracles() {
  std::mt19937_64 rng(313371);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  double worst = 0.0;
  for (const double theta : {1e-6, 1e-3, 0.1, 0.249, 0.251, 1.0, 2.5, 10.0}) {
    for (int axis_trial = 0; axis_trial < 3; ++axis_trial) {
      Vec3 axis{dist(rng), dist(rng), dist(rng)};
      if (norm(axis) < 0.1) axis.z += 1.0;
      axis = axis / norm(axis);
      const Rotor r = build_rotor(axis, theta, 1.0);
      const Mat3 a = theta * skew(axis);
      worst = std::max({worst, max_abs(r.expA - oracle::taylor_exp(a)),
                        max_abs(r.phi1A - oracle::phi_by_quadrature(1, a)),
                        max_abs(r.phi2A - oracle::phi_by_quadrature(2, a))});
    }
  }
  report(8, "rotor oracle equivalence", worst <= 1e-12,
         "worst entrywise deviation from Taylor exponential / 64-point quadrature = " + fmt(worst) +
             " for theta <= 10 (tol 1e-12)");
}

// --- 9. determinism ----------------------------------------------------------
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion_determinism() {
  const fs::path base = fs::temp_directory_path() / "larmor-acceptance";
  const fs::path dir_a = base / "a";
  const fs::path dir_b = base / "b";
  fs::create_directories(dir_a);
  fs::create_directories(dir_b);
  const auto written_a = run_preset("paper-fig1", dir_a.string());
  const auto written_b = run_preset("paper-fig1", dir_b.string());

  bool ok = written_a.size() == written_b.size();
  size_t csv_files = 0;
  size_t bytes = 0;
  for (size_t i = 0; ok && i < written_a.size(); ++i) {
    if (written_a[i].size() < 4 || written_a[i].substr(written_a[i].size() - 4) != ".csv") continue;
    ++csv_files;
    const std::string a = slurp(written_a[i]);
    const std::string b = slurp(written_b[i]);
    bytes += a.size();
    ok = ok && !a.empty() && a == b;
  }
  ok = ok && csv_files == 2;
  report(9, "preset determinism", ok,
         "paper-fig1 run twice: " + std::to_string(csv_files) + " CSV bodies, " +
             std::to_string(bytes) + " bytes, byte-identical = " + (ok ? "yes" : "no"));
}

}  // namespace

int main() {
  criterion_energy_exactness();
  const double eep_small_eps_err = criterion_energy_longrun();
  criterion_moment_scaling();
  criterion_symmetry();
  criterion_phi_identities();
  criterion_boris_comparison(eep_small_eps_err);
  criterion_convergence();
  criterion_rotor_oracles();
  criterion_determinism();

  if (g_failures == 0) {
    std::printf("all 9 acceptance criteria passed\n");
  } else {
    std::printf("%d of 9 acceptance criteria failed\n", g_failures);
  }
  return g_failures;
}
