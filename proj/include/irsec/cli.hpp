#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "irsec/config.hpp"

namespace irsec {

enum ExitCode : int {
  kExitOk = 0,
  kExitIoError = 1,
  kExitInvalidConfig = 2,
  kExitSolverFailures = 3,
  kExitOracleRegression = 4,
};

struct CommandOptions {
  std::optional<std::string> config_path;  // built-in defaults when empty
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::vector<std::string> overrides;  // KEY=VALUE
  std::optional<std::string> algorithms;
  unsigned threads = 0;
};

struct OracleCheckOptions {
  int n_irs = 2;
  int instances = 50;
  std::uint64_t seed = 1;
  int resolution = 512;
  std::optional<std::string> config_path;
  std::vector<std::string> overrides;
  unsigned threads = 0;
  double threshold = 0.99;
};

/// Config file (or defaults) plus command-line overrides, validated.
RunConfig resolve_config(const CommandOptions& options);

/// Writes sweep.csv, resolved_config.json and manifest.json into out_dir.
int cmd_sweep(const CommandOptions& options, std::ostream& log);

/// Writes trace_{alg}_{L}.json per algorithm and element count, plus the
/// resolved config and manifest.
int cmd_converge(const CommandOptions& options, std::ostream& log);

/// OM and MM against the exhaustive grid on small random instances; exit 0
/// iff the worst solver/oracle objective ratio is >= threshold.
int cmd_oracle_check(const OracleCheckOptions& options, std::ostream& log);

}  // namespace irsec
