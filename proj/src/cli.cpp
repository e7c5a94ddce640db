#include "irsec/cli.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>

#include "irsec/output.hpp"

namespace irsec {

namespace {

constexpr double kMaxFailureFraction = 0.5;

// Writes the resolved config and the manifest, returns nothing; throws on I/O.
void write_run_metadata(const std::filesystem::path& dir, const std::string& command,
                        const RunConfig& cfg, std::vector<std::string> outputs) {
  const std::string resolved = to_json(cfg).dump(2) + "\n";
  write_text_file(dir / "resolved_config.json", resolved);
  outputs.push_back("resolved_config.json");
  RunManifest manifest{command, "sha256:" + sha256_hex(resolved), cfg.sweep.master_seed,
                       std::move(outputs)};
  write_text_file(dir / "manifest.json", manifest_json(manifest).dump(2) + "\n");
}

template <typename Fn>
int guarded(std::ostream& log, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitIoError;
  }
}

}  // namespace

RunConfig resolve_config(const CommandOptions& options) {
  RunConfig cfg = options.config_path ? load_config(*options.config_path) : RunConfig{};
  for (const std::string& assignment : options.overrides) apply_override(cfg, assignment);
  if (options.seed) cfg.sweep.master_seed = *options.seed;
  if (options.trials) cfg.sweep.trials = *options.trials;
  if (options.algorithms) cfg.sweep.algorithms = parse_algorithm_list(*options.algorithms);
  cfg.validate();
  return cfg;
}

int cmd_sweep(const CommandOptions& options, std::ostream& log) {
  return guarded(log, [&] {
    const RunConfig cfg = resolve_config(options);
    std::filesystem::create_directories(options.out_dir);
    const SweepResult result = run_sweep(cfg.sweep, options.threads);
    write_text_file(options.out_dir / "sweep.csv", sweep_csv(result));
    write_run_metadata(options.out_dir, "sweep", cfg, {"sweep.csv"});

    const int total = result.total_trials();
    const int failures = result.total_failures();
    log << "sweep: " << result.rows.size() << " rows, " << total << " trials, " << failures
        << " solver failures -> " << (options.out_dir / "sweep.csv").string() << '\n';
    if (failures > kMaxFailureFraction * total) return static_cast<int>(kExitSolverFailures);
    return static_cast<int>(kExitOk);
  });
}

int cmd_converge(const CommandOptions& options, std::ostream& log) {
  return guarded(log, [&] {
    const RunConfig cfg = resolve_config(options);
    std::filesystem::create_directories(options.out_dir);
    const std::vector<ConvergenceRun> runs =
        convergence_experiment(cfg.sweep.base, cfg.l_values, cfg.sweep.master_seed);

    std::vector<std::string> outputs;
    int failures = 0;
    for (const ConvergenceRun& run : runs) {
      const std::string name =
          "trace_" + to_string(run.algorithm) + "_" + std::to_string(run.n_irs) + ".json";
      write_text_file(options.out_dir / name, trace_json(run).dump(2) + "\n");
      outputs.push_back(name);
      if (run.trace.failed) ++failures;
      log << to_string(run.algorithm) << " L=" << run.n_irs << ": " << run.trace.iterations
          << " iterations, converged=" << (run.trace.converged ? "yes" : "no") << '\n';
    }
    write_run_metadata(options.out_dir, "converge", cfg, outputs);
    const double total = static_cast<double>(runs.size());
    if (failures > kMaxFailureFraction * total) return static_cast<int>(kExitSolverFailures);
    return static_cast<int>(kExitOk);
  });
}

int cmd_oracle_check(const OracleCheckOptions& options, std::ostream& log) {
  return guarded(log, [&] {
    if (options.n_irs < 1 || options.n_irs > 3) {
      throw Error("oracle-check supports L in 1..3 (got " + std::to_string(options.n_irs) + ")");
    }
    if (options.instances < 1) throw Error("oracle-check needs at least one instance");
    CommandOptions scenario_options;
    scenario_options.config_path = options.config_path;
    scenario_options.overrides = options.overrides;
    RunConfig cfg = resolve_config(scenario_options);
    ScenarioConfig scenario = cfg.sweep.base;
    scenario.n_irs = options.n_irs;

    struct Ratios {
      double om = 0.0;
      double mm = 0.0;
    };
    std::vector<Ratios> ratios(static_cast<std::size_t>(options.instances));
    parallel_for(ratios.size(), options.threads, [&](std::size_t i) {
      const TrialSetup setup = prepare_trial(scenario, derive_seed(options.seed, i));
      const double best = grid_oracle(setup.problem, options.resolution).value;
      const double om = quadratic_objective(setup.problem, run_trial(setup, scenario, Algorithm::kOm).q);
      const double mm = quadratic_objective(setup.problem, run_trial(setup, scenario, Algorithm::kMm).q);
      ratios[i] = {om / best, mm / best};
    });

    double worst_om = std::numeric_limits<double>::infinity();
    double worst_mm = worst_om;
    int om_ok = 0;
    int mm_ok = 0;
    for (const Ratios& r : ratios) {
      worst_om = std::min(worst_om, r.om);
      worst_mm = std::min(worst_mm, r.mm);
      om_ok += r.om >= options.threshold;
      mm_ok += r.mm >= options.threshold;
    }
    const double worst = std::min(worst_om, worst_mm);
    log << std::setprecision(8) << "oracle-check L=" << options.n_irs
        << " instances=" << options.instances << " resolution=" << options.resolution << '\n'
        << "  om: worst ratio " << worst_om << ", " << om_ok << "/" << options.instances
        << " >= " << options.threshold << '\n'
        << "  mm: worst ratio " << worst_mm << ", " << mm_ok << "/" << options.instances
        << " >= " << options.threshold << '\n'
        << "  worst solver/oracle ratio " << worst << (worst >= options.threshold ? " PASS" : " FAIL")
        << '\n';
    return static_cast<int>(worst >= options.threshold ? kExitOk : kExitOracleRegression);
  });
}

}  // namespace irsec
