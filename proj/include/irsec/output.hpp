#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "irsec/experiments.hpp"

namespace irsec {

inline constexpr const char* kVersion = "0.1.0";

inline constexpr const char* kSweepCsvHeader =
    "variable,value,algorithm,mean_secrecy_rate_bps,stderr,feasible_frac,mean_iters,trials,seed";

/// Fixed notation with `digits` significant digits, e.g. 0.001234 ->
/// "0.001234000000" for digits = 10.
std::string format_significant(double x, int digits = 10);

std::string sweep_csv(const SweepResult& result);

/// {algorithm, n_irs, converged, iterations, records: [{iteration, objective, grad_norm?}]}
nlohmann::json trace_json(const ConvergenceRun& run);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

struct RunManifest {
  std::string command;
  std::string config_digest;  // "sha256:<hex>" of resolved_config.json
  std::uint64_t master_seed = 0;
  std::vector<std::string> outputs;
};

/// Timestamp is taken from SOURCE_DATE_EPOCH when set and null otherwise, so
/// that repeated runs produce identical bytes.
nlohmann::json manifest_json(const RunManifest& manifest);

void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace irsec
