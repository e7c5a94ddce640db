// Command-line front end: sweep, converge, oracle-check.
#include <iostream>

#include <CLI11.hpp>

#include "irsec/cli.hpp"

namespace {

void add_run_flags(CLI::App* cmd, irsec::CommandOptions& opts, std::string& out) {
  cmd->add_option("--config", opts.config_path, "Config file (defaults to the built-in scenario)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", out, "Output directory")->required();
  cmd->add_option("--seed", opts.seed, "Master seed");
  cmd->add_option("--trials", opts.trials, "Trials per sweep point");
  cmd->add_option("--set", opts.overrides, "KEY=VALUE override (repeatable)");
  cmd->add_option("--algorithms", opts.algorithms, "Comma list of om,mm,random_phase,no_irs");
  cmd->add_option("--threads", opts.threads, "Worker threads (0 = all cores)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secure IRS-assisted transmission without eavesdropper CSI: phase optimization and "
               "Monte-Carlo experiments"};
  app.require_subcommand(1);

  irsec::CommandOptions sweep_opts;
  std::string sweep_out;
  auto* sweep = app.add_subcommand("sweep", "Secrecy-rate sweep over qos_db or n_irs");
  add_run_flags(sweep, sweep_opts, sweep_out);

  irsec::CommandOptions converge_opts;
  std::string converge_out;
  auto* converge = app.add_subcommand("converge", "Per-iteration objective traces of OM and MM");
  add_run_flags(converge, converge_opts, converge_out);

  irsec::OracleCheckOptions oracle_opts;
  auto* oracle = app.add_subcommand("oracle-check", "Compare OM and MM with an exhaustive grid");
  oracle->add_option("-L,--elements", oracle_opts.n_irs, "Reflecting elements (1..3)");
  oracle->add_option("--instances", oracle_opts.instances, "Random instances");
  oracle->add_option("--seed", oracle_opts.seed, "Seed");
  oracle->add_option("--resolution", oracle_opts.resolution, "Grid points per phase");
  oracle->add_option("--config", oracle_opts.config_path, "Config file for the channel model")
      ->check(CLI::ExistingFile);
  oracle->add_option("--set", oracle_opts.overrides, "KEY=VALUE override (repeatable)");
  oracle->add_option("--threads", oracle_opts.threads, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : irsec::kExitInvalidConfig;
  }

  if (*sweep) {
    sweep_opts.out_dir = sweep_out;
    return irsec::cmd_sweep(sweep_opts, std::cerr);
  }
  if (*converge) {
    converge_opts.out_dir = converge_out;
    return irsec::cmd_converge(converge_opts, std::cerr);
  }
  return irsec::cmd_oracle_check(oracle_opts, std::cout);
}
