#include "larmor/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include <json.hpp>

#include "larmor/errors.hpp"

namespace larmor {

namespace {

std::string method_name(Method m) {
  switch (m) {
    case Method::Eep:
      return "eep";
    case Method::Boris:
      return "boris";
    case Method::Rk4:
      return "rk4";
  }
  return "eep";
}

Method parse_method(const std::string& s) {
  if (s == "eep") return Method::Eep;
  if (s == "boris") return Method::Boris;
  if (s == "rk4") return Method::Rk4;
  throw ConfigError("method: expected eep, boris or rk4, got '" + s + "'");
}

double parse_double(const std::string& key, const std::string& s) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + s + "'");
  }
}

long parse_long(const std::string& key, const std::string& s) {
  try {
    size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + s + "'");
  }
}

std::vector<double> parse_list(const std::string& key, const std::string& s) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    // trim spaces
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw ConfigError(key + ": empty element in list '" + s + "'");
    out.push_back(parse_double(key, item.substr(b, e - b + 1)));
  }
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

Vec3 parse_vec3(const std::string& key, const std::string& s) {
  const std::vector<double> v = parse_list(key, s);
  if (v.size() != 3) throw ConfigError(key + ": expected three comma-separated numbers, got '" + s + "'");
  return {v[0], v[1], v[2]};
}

long auto_sample_every(long steps) { return steps / 100000 + 1; }

std::string summary_path_for(const std::string& csv_path) {
  const std::string suffix = ".csv";
  if (csv_path.size() > suffix.size() &&
      csv_path.compare(csv_path.size() - suffix.size(), suffix.size(), suffix) == 0) {
    return csv_path.substr(0, csv_path.size() - suffix.size()) + ".summary.json";
  }
  return csv_path + ".summary.json";
}

nlohmann::json drift_json(const DriftSummary& d) {
  return {{"max_abs_rel_err", d.max_abs_rel_err},
          {"fitted_slope", d.fitted_slope},
          {"window", {d.window_start, d.window_end}}};
}

void write_summary_json(const RunSummary& s, const std::string& path) {
  nlohmann::json j{{"method", s.method},
                   {"potential", s.potential},
                   {"epsilon", s.epsilon},
                   {"h", s.h},
                   {"t_end", s.t_end},
                   {"steps", s.steps},
                   {"samples", s.samples},
                   {"theta", s.theta},
                   {"cos_half_theta", s.cos_half_theta},
                   {"moment_defined", s.moment_defined},
                   {"energy_rel_is_absolute", s.energy_rel_is_absolute},
                   {"moment_rel_is_absolute", s.moment_rel_is_absolute},
                   {"energy", drift_json(s.energy_drift)},
                   {"moment", drift_json(s.moment_drift)},
                   {"max_fp_iters", s.max_fp_iters},
                   {"median_fp_iters", s.median_fp_iters},
                   {"wall_seconds", s.wall_seconds}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("out: cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void validate(const RunConfig& cfg) {
  if (!(cfg.epsilon > 0.0) || !std::isfinite(cfg.epsilon)) throw ConfigError("epsilon: must be positive and finite");
  if (!(cfg.h > 0.0) || !std::isfinite(cfg.h)) throw ConfigError("h: must be positive and finite");
  if (!(cfg.t_end >= 0.0) || !std::isfinite(cfg.t_end)) throw ConfigError("t_end: must be nonnegative and finite");
  if (cfg.quad_points < 1 || cfg.quad_points > 16) throw ConfigError("quad_points: supported range is 1..16");
  if (!(cfg.fp_tol > 0.0)) throw ConfigError("fp_tol: must be positive");
  if (cfg.fp_max_iter < 1) throw ConfigError("fp_max_iter: must be at least 1");
  if (cfg.sample_every < 0) throw ConfigError("sample_every: must be nonnegative");
  if (!is_finite(cfg.b_field)) throw ConfigError("b_field: must be finite");
  if (!is_finite(cfg.x0)) throw ConfigError("x0: must be finite");
  if (!is_finite(cfg.v0)) throw ConfigError("v0: must be finite");
  make_potential(cfg.potential, cfg.potential_params);  // validates name + params
}

RunResult run_trajectory(const RunConfig& cfg) {
  validate(cfg);
  const auto t_start = std::chrono::steady_clock::now();

  const auto pot = make_potential(cfg.potential, cfg.potential_params);
  IntegratorSetup setup;
  setup.method = cfg.method;
  setup.b_field = cfg.b_field;
  setup.epsilon = cfg.epsilon;
  setup.h = cfg.h;
  setup.rule = gauss_rule(cfg.quad_points);
  setup.fp = {cfg.fp_tol, cfg.fp_max_iter};

  const long steps = step_count(0.0, cfg.t_end, cfg.h);
  const long sample_every = cfg.sample_every > 0 ? cfg.sample_every : auto_sample_every(steps);

  const State s0{0.0, cfg.x0, cfg.v0};
  const bool moment_defined = norm(cfg.b_field) > 0.0;
  const double e0 = energy(s0, *pot);
  const double m0 = moment_defined ? moment(cfg.v0, cfg.b_field) : 0.0;
  const bool e_abs = std::fabs(e0) < 1e-300;
  const bool m_abs = std::fabs(m0) < 1e-300;

  RunResult result;
  result.samples.reserve(static_cast<size_t>(steps / sample_every + 2));

  // integrate() is driven at stride 1 and the striding happens here, so the
  // fixed-point statistics cover every step while the stored samples follow
  // the configured stride.
  std::vector<long> fp_histogram(static_cast<size_t>(cfg.fp_max_iter) + 1, 0);
  int fp_max = 0;
  integrate(setup, *pot, s0, cfg.t_end, 1, [&](long step, const StepReport& rep) {
    if (step > 0) {
      fp_histogram[static_cast<size_t>(rep.fp_iters)] += 1;
      fp_max = std::max(fp_max, rep.fp_iters);
    }
    if (step != 0 && step != steps && step % sample_every != 0) return;
    SampleRecord rec;
    rec.t = rep.state.t;
    rec.x = rep.state.x;
    rec.v = rep.state.v;
    rec.energy = energy(rep.state, *pot);
    rec.moment = moment_defined ? moment(rep.state.v, cfg.b_field) : 0.0;
    rec.rel_energy_err = e_abs ? rec.energy - e0 : (rec.energy - e0) / e0;
    rec.rel_moment_err = !moment_defined ? 0.0 : (m_abs ? rec.moment - m0 : (rec.moment - m0) / m0);
    rec.fp_iters = rep.fp_iters;
    result.samples.push_back(rec);
  });

  RunSummary& s = result.summary;
  s.method = method_name(cfg.method);
  s.potential = cfg.potential;
  s.epsilon = cfg.epsilon;
  s.h = cfg.h;
  s.t_end = cfg.t_end;
  s.steps = steps;
  s.samples = static_cast<long>(result.samples.size());
  s.theta = cfg.h * norm(cfg.b_field) / cfg.epsilon;
  s.cos_half_theta = std::cos(0.5 * s.theta);
  s.moment_defined = moment_defined;
  s.energy_rel_is_absolute = e_abs;
  s.moment_rel_is_absolute = m_abs;
  s.max_fp_iters = fp_max;
  if (steps > 0) {
    long seen = 0;
    for (size_t i = 0; i < fp_histogram.size(); ++i) {
      seen += fp_histogram[i];
      if (2 * seen >= steps) {
        s.median_fp_iters = static_cast<double>(i);
        break;
      }
    }
  }

  try {
    s.energy_drift = drift_summary(result.samples, DriftField::Energy, 0.0, cfg.t_end);
    s.moment_drift = drift_summary(result.samples, DriftField::Moment, 0.0, cfg.t_end);
  } catch (const EmptyWindowError&) {
    for (const SampleRecord& rec : result.samples) {
      s.energy_drift.max_abs_rel_err = std::max(s.energy_drift.max_abs_rel_err, std::fabs(rec.rel_energy_err));
      s.moment_drift.max_abs_rel_err = std::max(s.moment_drift.max_abs_rel_err, std::fabs(rec.rel_moment_err));
    }
    s.energy_drift.window_end = s.moment_drift.window_end = cfg.t_end;
  }

  s.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return result;
}

RunSummary run_to_files(const RunConfig& cfg) {
  if (cfg.output_path.empty()) throw ConfigError("out: output path required");
  RunResult result = run_trajectory(cfg);

  std::ofstream out(cfg.output_path, std::ios::binary);
  if (!out) throw ConfigError("out: cannot open '" + cfg.output_path + "' for writing");
  out << "t,x1,x2,x3,v1,v2,v3,energy,moment,rel_energy_err,rel_moment_err,fp_iters\n";
  for (const SampleRecord& r : result.samples) {
    out << format_double(r.t) << ',' << format_double(r.x.x) << ',' << format_double(r.x.y) << ','
        << format_double(r.x.z) << ',' << format_double(r.v.x) << ',' << format_double(r.v.y)
        << ',' << format_double(r.v.z) << ',' << format_double(r.energy) << ','
        << format_double(r.moment) << ',' << format_double(r.rel_energy_err) << ','
        << format_double(r.rel_moment_err) << ',' << r.fp_iters << '\n';
  }
  out.close();

  write_summary_json(result.summary, summary_path_for(cfg.output_path));
  return result.summary;
}

std::vector<SweepRow> sweep_errors(const SweepConfig& cfg) {
  const bool h_sweep = !cfg.h_list.empty();
  const bool eps_sweep = !cfg.epsilon_list.empty();
  if (h_sweep == eps_sweep) throw ConfigError("sweep: exactly one of h_list / epsilon_list must be set");
  const std::vector<double>& values = h_sweep ? cfg.h_list : cfg.epsilon_list;
  if (!(cfg.base.t_end > 0.0)) throw ConfigError("t_end: sweeps require a positive t_end");

  const auto configured = [&](double value) {
    RunConfig rc = cfg.base;
    (h_sweep ? rc.h : rc.epsilon) = value;
    return rc;
  };

  const auto reference_h = [&](double eps, double h_min) {
    if (cfg.h_ref > 0.0) return cfg.h_ref;
    const double b = norm(cfg.base.b_field);
    const double by_theta = b > 0.0 ? cfg.ref_theta * eps / b : h_min / 16.0;
    return std::min(by_theta, h_min / 16.0);
  };

  const auto end_state_error = [&](const RunConfig& rc, const State& ref) {
    validate(rc);
    const auto pot = make_potential(rc.potential, rc.potential_params);
    IntegratorSetup setup;
    setup.method = rc.method;
    setup.b_field = rc.b_field;
    setup.epsilon = rc.epsilon;
    setup.h = rc.h;
    setup.rule = gauss_rule(rc.quad_points);
    setup.fp = {rc.fp_tol, rc.fp_max_iter};
    State final_state;
    integrate(setup, *pot, State{0.0, rc.x0, rc.v0}, rc.t_end, 0,
              [&](long, const StepReport& rep) { final_state = rep.state; });
    return std::pair<double, double>{norm(final_state.x - ref.x), norm(final_state.v - ref.v)};
  };

  // One RK4 reference serves a whole h sweep; epsilon sweeps need one each.
  std::vector<State> refs(values.size());
  {
    const auto pot = make_potential(cfg.base.potential, cfg.base.potential_params);
    if (h_sweep) {
      const double h_min = *std::min_element(values.begin(), values.end());
      const State ref = rk4_reference(State{0.0, cfg.base.x0, cfg.base.v0}, cfg.base.b_field,
                                      cfg.base.epsilon, *pot, cfg.base.t_end,
                                      reference_h(cfg.base.epsilon, h_min));
      std::fill(refs.begin(), refs.end(), ref);
    } else {
      for (size_t i = 0; i < values.size(); ++i) {
        refs[i] = rk4_reference(State{0.0, cfg.base.x0, cfg.base.v0}, cfg.base.b_field, values[i],
                                *pot, cfg.base.t_end, reference_h(values[i], cfg.base.h));
      }
    }
  }

  // Member runs are independent pure functions; run them concurrently.
  std::vector<std::future<std::pair<double, double>>> futures;
  futures.reserve(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    futures.push_back(std::async(std::launch::async, end_state_error, configured(values[i]), refs[i]));
  }

  std::vector<SweepRow> rows(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    const auto [ex, ev] = futures[i].get();
    rows[i].param = values[i];
    rows[i].global_x_error = ex;
    rows[i].global_v_error = ev;
    if (h_sweep && i > 0) {
      const double e_prev = std::hypot(rows[i - 1].global_x_error, rows[i - 1].global_v_error);
      const double e_cur = std::hypot(ex, ev);
      const double ratio = std::log(values[i - 1] / values[i]);
      if (e_prev > 0.0 && e_cur > 0.0 && ratio != 0.0) {
        rows[i].observed_order = std::log(e_prev / e_cur) / ratio;
        rows[i].has_order = true;
      }
    }
  }
  return rows;
}

void sweep_to_file(const SweepConfig& cfg, const std::string& out_path) {
  const std::vector<SweepRow> rows = sweep_errors(cfg);
  const bool h_sweep = !cfg.h_list.empty();
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ConfigError("out: cannot open '" + out_path + "' for writing");
  out << (h_sweep ? "h" : "epsilon") << ",global_x_error,global_v_error,observed_order\n";
  for (const SweepRow& r : rows) {
    out << format_double(r.param) << ',' << format_double(r.global_x_error) << ','
        << format_double(r.global_v_error) << ',';
    if (r.has_order) out << format_double(r.observed_order);
    out << '\n';
  }
}

KeyValues load_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  KeyValues kv;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: line " + std::to_string(line_no) + " is not 'key = value': '" + line + "'");
    }
    const auto key_end = line.find_last_not_of(" \t", eq - 1);
    if (key_end == std::string::npos || key_end < b) {
      throw ConfigError("config: line " + std::to_string(line_no) + " has an empty key");
    }
    std::string key = line.substr(b, key_end - b + 1);
    const auto vb = line.find_first_not_of(" \t", eq + 1);
    const auto ve = line.find_last_not_of(" \t\r");
    std::string value = vb == std::string::npos || vb > ve ? "" : line.substr(vb, ve - vb + 1);
    if (value.empty()) throw ConfigError("config: key '" + key + "' has an empty value");
    kv[key] = value;
  }
  return kv;
}

void apply_run_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "method") {
    cfg.method = parse_method(value);
  } else if (key == "epsilon") {
    cfg.epsilon = parse_double(key, value);
  } else if (key == "h") {
    cfg.h = parse_double(key, value);
  } else if (key == "t_end") {
    cfg.t_end = parse_double(key, value);
  } else if (key == "potential") {
    cfg.potential = value;
  } else if (key == "potential_params") {
    cfg.potential_params = parse_list(key, value);
  } else if (key == "b_field") {
    cfg.b_field = parse_vec3(key, value);
  } else if (key == "x0") {
    cfg.x0 = parse_vec3(key, value);
  } else if (key == "v0") {
    cfg.v0 = parse_vec3(key, value);
  } else if (key == "quad_points") {
    cfg.quad_points = static_cast<int>(parse_long(key, value));
  } else if (key == "fp_tol") {
    cfg.fp_tol = parse_double(key, value);
  } else if (key == "fp_max_iter") {
    cfg.fp_max_iter = static_cast<int>(parse_long(key, value));
  } else if (key == "sample_every") {
    cfg.sample_every = parse_long(key, value);
  } else if (key == "out") {
    cfg.output_path = value;
  } else if (key == "h_list" || key == "epsilon_list" || key == "ref_theta" || key == "h_ref") {
    throw ConfigError("config: '" + key + "' is a sweep key; use the sweep subcommand");
  } else {
    throw ConfigError("config: unknown key '" + key + "'");
  }
}

void apply_sweep_key(SweepConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "h_list") {
    cfg.h_list = parse_list(key, value);
  } else if (key == "epsilon_list") {
    cfg.epsilon_list = parse_list(key, value);
  } else if (key == "ref_theta") {
    cfg.ref_theta = parse_double(key, value);
  } else if (key == "h_ref") {
    cfg.h_ref = parse_double(key, value);
  } else {
    apply_run_key(cfg.base, key, value);
  }
}

RunConfig parse_run_config(const std::string& path) {
  RunConfig cfg;
  for (const auto& [key, value] : load_key_values(path)) apply_run_key(cfg, key, value);
  return cfg;
}

SweepConfig parse_sweep_config(const std::string& path) {
  SweepConfig cfg;
  for (const auto& [key, value] : load_key_values(path)) apply_sweep_key(cfg, key, value);
  return cfg;
}

namespace {

RunConfig experiment_base() {
  RunConfig cfg;
  cfg.method = Method::Eep;
  cfg.h = 0.01;
  cfg.t_end = 10000.0;
  cfg.potential = "coulomb-xy";
  cfg.b_field = {0.0, 0.0, 1.0};
  cfg.x0 = {0.7, 1.0, 0.1};
  cfg.v0 = {0.9, 0.5, 0.4};
  cfg.quad_points = 4;
  cfg.fp_tol = 1e-16;
  cfg.fp_max_iter = 50;
  return cfg;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"paper-fig1", "paper-fig2", "paper-fig3", "paper-fig4"};
}

Preset preset(const std::string& name) {
  Preset p;
  p.name = name;
  if (name == "paper-fig1" || name == "paper-fig2") {
    // Energy (fig1) and magnetic moment (fig2) relative errors of the same
    // two long EEP runs; both presets carry both columns.
    for (const double eps : {0.01, 0.0001}) {
      RunConfig rc = experiment_base();
      rc.epsilon = eps;
      rc.output_path = name + "-eps" + format_double(eps) + ".csv";
      p.runs.push_back(rc);
    }
    return p;
  }
  if (name == "paper-fig3") {
    RunConfig rc = experiment_base();
    rc.method = Method::Boris;
    rc.epsilon = 0.0001;
    rc.output_path = "paper-fig3-boris-eps0.0001.csv";
    p.runs.push_back(rc);
    return p;
  }
  if (name == "paper-fig4") {
    for (const double t_end : {10.0, 100.0, 1000.0}) {
      SweepConfig sc;
      sc.base = experiment_base();
      sc.base.epsilon = 0.05;
      sc.base.t_end = t_end;
      sc.h_list = {1.0 / 50.0, 1.0 / 100.0, 1.0 / 200.0, 1.0 / 400.0};
      sc.base.h = sc.h_list.front();
      p.sweeps.emplace_back(sc, "paper-fig4-T" + format_double(t_end) + ".csv");
    }
    return p;
  }
  std::string known;
  for (const std::string& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
  throw ConfigError("preset: unknown name '" + name + "' (known: " + known + ")");
}

std::vector<std::string> run_preset(const std::string& name, const std::string& out_dir) {
  const Preset p = preset(name);
  const std::string prefix = out_dir.empty() || out_dir.back() == '/' ? out_dir : out_dir + "/";
  if (!prefix.empty()) std::filesystem::create_directories(prefix);
  std::vector<std::string> written;
  for (RunConfig rc : p.runs) {
    rc.output_path = prefix + rc.output_path;
    run_to_files(rc);
    written.push_back(rc.output_path);
    written.push_back(summary_path_for(rc.output_path));
  }
  for (const auto& [sc, file_name] : p.sweeps) {
    const std::string path = prefix + file_name;
    sweep_to_file(sc, path);
    written.push_back(path);
  }
  return written;
}

}  // namespace larmor
