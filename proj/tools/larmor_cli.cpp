// Command line front end: single runs, convergence sweeps and built-in
// experiment presets on top of larmor::core.
#include <cstdio>
#include <exception>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "larmor/errors.hpp"
#include "larmor/experiment.hpp"

namespace {

struct FlagOverride {
  std::string key;
  std::string value;
};

// Every value flag is collected as (config key, raw string) and pushed through
// the same parser as config-file lines, so flags and files cannot drift apart.
void add_run_flags(CLI::App* cmd, std::vector<FlagOverride>& overrides) {
  cmd->set_help_flag("--help", "print help and exit");
  const std::pair<const char*, const char*> flags[] = {
      {"--method", "method"},           {"--epsilon", "epsilon"},
      {"--h", "h"},                     {"--t-end", "t_end"},
      {"--potential", "potential"},     {"--potential-params", "potential_params"},
      {"--b-field", "b_field"},         {"--x0", "x0"},
      {"--v0", "v0"},                   {"--quad-points", "quad_points"},
      {"--fp-tol", "fp_tol"},           {"--fp-max-iter", "fp_max_iter"},
      {"--sample-every", "sample_every"}, {"--out", "out"},
  };
  for (const auto& [flag, key] : flags) {
    cmd->add_option_function<std::string>(
        flag, [&overrides, key = std::string(key)](const std::string& v) {
          overrides.push_back({key, v});
        });
  }
}

void add_sweep_flags(CLI::App* cmd, std::vector<FlagOverride>& overrides) {
  const std::pair<const char*, const char*> flags[] = {
      {"--h-list", "h_list"},
      {"--epsilon-list", "epsilon_list"},
      {"--h-ref", "h_ref"},
      {"--ref-theta", "ref_theta"},
  };
  for (const auto& [flag, key] : flags) {
    cmd->add_option_function<std::string>(
        flag, [&overrides, key = std::string(key)](const std::string& v) {
          overrides.push_back({key, v});
        });
  }
}

int fail(const std::string& category, const std::string& message) {
  const nlohmann::json j{{"error", category}, {"message", message}};
  std::fprintf(stderr, "%s\n", j.dump().c_str());
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"charged-particle trajectories with an exponential energy-preserving integrator"};
  app.require_subcommand(1);
  // --h is the stepsize flag, so help is long-form only.
  app.set_help_flag("--help", "print help and exit");

  std::string run_config_path;
  std::string sweep_config_path;
  std::string sweep_out;
  std::string preset_name;
  std::string preset_out_dir = ".";
  std::vector<FlagOverride> run_overrides;
  std::vector<FlagOverride> sweep_overrides;

  CLI::App* run_cmd = app.add_subcommand("run", "integrate one trajectory, write CSV + JSON summary");
  run_cmd->add_option("config", run_config_path, "key = value config file");
  add_run_flags(run_cmd, run_overrides);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "convergence study against an RK4 reference");
  sweep_cmd->add_option("config", sweep_config_path, "key = value config file");
  add_run_flags(sweep_cmd, run_overrides);
  add_sweep_flags(sweep_cmd, sweep_overrides);
  sweep_cmd->add_option("--sweep-out", sweep_out, "convergence table path (defaults to --out)");

  CLI::App* preset_cmd = app.add_subcommand("preset", "run a built-in experiment preset");
  preset_cmd->set_help_flag("--help", "print help and exit");
  preset_cmd->add_option("name", preset_name, "one of: paper-fig1, paper-fig2, paper-fig3, paper-fig4")
      ->required();
  preset_cmd->add_option("--out-dir", preset_out_dir, "directory for the output files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    return fail("usage", e.what());
  }

  try {
    if (run_cmd->parsed()) {
      larmor::RunConfig cfg;
      if (!run_config_path.empty()) cfg = larmor::parse_run_config(run_config_path);
      for (const FlagOverride& o : run_overrides) larmor::apply_run_key(cfg, o.key, o.value);
      const larmor::RunSummary summary = larmor::run_to_files(cfg);
      std::printf("%s\n", cfg.output_path.c_str());
      std::printf("max |rel energy err| = %.6g, max |rel moment err| = %.6g, steps = %ld\n",
                  summary.energy_drift.max_abs_rel_err, summary.moment_drift.max_abs_rel_err,
                  summary.steps);
      return 0;
    }
    if (sweep_cmd->parsed()) {
      larmor::SweepConfig cfg;
      if (!sweep_config_path.empty()) cfg = larmor::parse_sweep_config(sweep_config_path);
      for (const FlagOverride& o : run_overrides) larmor::apply_run_key(cfg.base, o.key, o.value);
      for (const FlagOverride& o : sweep_overrides) larmor::apply_sweep_key(cfg, o.key, o.value);
      std::string out = !sweep_out.empty() ? sweep_out : cfg.base.output_path;
      if (out.empty()) throw larmor::ConfigError("out: output path required");
      larmor::sweep_to_file(cfg, out);
      std::printf("%s\n", out.c_str());
      return 0;
    }
    // preset
    const auto written = larmor::run_preset(preset_name, preset_out_dir);
    for (const std::string& path : written) std::printf("%s\n", path.c_str());
    return 0;
  } catch (const larmor::ConfigError& e) {
    return fail("config", e.what());
  } catch (const larmor::StepFailureError& e) {
    return fail("step", e.what());
  } catch (const larmor::Error& e) {
    return fail("run", e.what());
  } catch (const std::exception& e) {
    return fail("internal", e.what());
  }
}
