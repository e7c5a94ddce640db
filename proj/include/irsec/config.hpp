#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "irsec/experiments.hpp"
#include "irsec/numerics.hpp"

namespace irsec {

/// Everything a CLI run needs: the sweep (whose base is the scenario) and
/// the element counts for the convergence experiment.
struct RunConfig {
  SweepSpec sweep;
  std::vector<int> l_values{20, 50};

  void validate() const;
};

/// Config file syntax, one `key = value` per line, `#` starts a comment:
///
///   n_tx = 5
///   values = 0, 5, 10, 15, 20, 25, 30   # lists are comma separated
///   algorithms = om, mm, random_phase, no_irs
///
/// Keys are the field names of ScenarioConfig, SolverSettings, SweepSpec plus
/// `l_values`. Unknown or repeated keys are errors. Unset keys keep defaults.
/// Throws irsec::Error prefixed with "<source>:<line>:".
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

/// Applies one `key=value` override (the --set flag) with the same rules.
/// Setting the swept variable itself replaces `values` with that one value.
/// Does not validate; call RunConfig::validate() after the last override.
void apply_override(RunConfig& cfg, const std::string& assignment);

/// Fully resolved config; the digest in run manifests is taken over its dump.
nlohmann::json to_json(const RunConfig& cfg);

}  // namespace irsec
