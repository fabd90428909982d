#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "larmor/diagnostics.hpp"
#include "larmor/integrator.hpp"

namespace larmor {

/// Full description of a single trajectory experiment. Every field has a
/// config-file key of the same name (see parse_run_config); runs are fully
/// deterministic, there is no seed.
struct RunConfig {
  Method method = Method::Eep;
  double epsilon = 0.01;
  double h = 0.01;
  double t_end = 0.0;
  std::string potential = "coulomb-xy";
  std::vector<double> potential_params;  ///< meaning depends on the potential
  Vec3 b_field{0.0, 0.0, 1.0};
  Vec3 x0{};
  Vec3 v0{};
  int quad_points = 4;
  double fp_tol = 1e-16;
  int fp_max_iter = 50;
  long sample_every = 0;  ///< 0 = auto: chosen so the output stays <= 100k rows
  std::string output_path;
};

/// Run metadata and drift statistics; serialized as the JSON summary next to
/// the CSV output.
struct RunSummary {
  std::string method;
  std::string potential;
  double epsilon = 0.0;
  double h = 0.0;
  double t_end = 0.0;
  long steps = 0;
  long samples = 0;
  double theta = 0.0;           ///< h |B| / epsilon, the per-step gyration angle
  double cos_half_theta = 1.0;  ///< cos(theta/2); moment conservation degrades near 0
  bool moment_defined = true;   ///< false when |B| = 0
  bool energy_rel_is_absolute = false;  ///< initial energy below 1e-300
  bool moment_rel_is_absolute = false;  ///< initial moment below 1e-300
  DriftSummary energy_drift;
  DriftSummary moment_drift;
  int max_fp_iters = 0;
  double median_fp_iters = 0.0;
  double wall_seconds = 0.0;
};

struct RunResult {
  std::vector<SampleRecord> samples;
  RunSummary summary;
};

/// Validates a run config; throws ConfigError naming the offending field.
void validate(const RunConfig& cfg);

/// Executes a run entirely in memory (no files).
RunResult run_trajectory(const RunConfig& cfg);

/// Executes a run and writes the sample CSV to cfg.output_path plus a JSON
/// summary file next to it; returns the summary. CSV columns:
/// t,x1,x2,x3,v1,v2,v3,energy,moment,rel_energy_err,rel_moment_err,fp_iters
/// with doubles serialized to 17 significant digits (round-trip exact).
RunSummary run_to_files(const RunConfig& cfg);

/// Convergence study: the base config is rerun for each h (or each epsilon)
/// and its end state compared against an RK4 reference trajectory.
struct SweepConfig {
  RunConfig base;
  std::vector<double> h_list;        ///< exactly one of h_list /
  std::vector<double> epsilon_list;  ///< epsilon_list may be non-empty
  double ref_theta = 0.005;  ///< reference stepsize rule: h_ref |B|/eps <= ref_theta
  double h_ref = 0.0;        ///< explicit reference stepsize; 0 = use the rule
};

/// One convergence-table row. observed_order is the log-ratio of consecutive
/// combined errors (empty on the first row and for epsilon sweeps).
struct SweepRow {
  double param = 0.0;  ///< the h (or epsilon) of this row
  double global_x_error = 0.0;
  double global_v_error = 0.0;
  double observed_order = 0.0;
  bool has_order = false;
};

std::vector<SweepRow> sweep_errors(const SweepConfig& cfg);

/// Runs the sweep and writes the convergence table CSV
/// (h,global_x_error,global_v_error,observed_order).
void sweep_to_file(const SweepConfig& cfg, const std::string& out_path);

/// Flat key = value config files ('#' starts a comment).
using KeyValues = std::map<std::string, std::string>;
KeyValues load_key_values(const std::string& path);

/// Applies one key to a run config; throws ConfigError for unknown keys or
/// unparsable values. Used both for config files and CLI overrides.
void apply_run_key(RunConfig& cfg, const std::string& key, const std::string& value);
void apply_sweep_key(SweepConfig& cfg, const std::string& key, const std::string& value);

RunConfig parse_run_config(const std::string& path);
SweepConfig parse_sweep_config(const std::string& path);

/// A named, built-in experiment: a list of runs and/or sweeps with suggested
/// output file names.
struct Preset {
  std::string name;
  std::vector<RunConfig> runs;  ///< output_path holds the suggested file name
  std::vector<std::pair<SweepConfig, std::string>> sweeps;
};

std::vector<std::string> preset_names();
Preset preset(const std::string& name);

/// Executes a preset with outputs under out_dir; returns the written paths.
std::vector<std::string> run_preset(const std::string& name, const std::string& out_dir);

/// Serializes a double with 17 significant digits (shortest form that
/// round-trips is not used; fixed precision keeps columns byte-stable).
std::string format_double(double v);

}  // namespace larmor
