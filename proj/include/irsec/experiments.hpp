#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "irsec/channel.hpp"
#include "irsec/phase_opt.hpp"
#include "irsec/scenario.hpp"
#include "irsec/transmit.hpp"

namespace irsec {

/// Phase strategies compared in the experiments. A full-CSI joint optimizer
/// would be one more enumerator handled in run_trial.
enum class Algorithm {
  kOm,           // manifold conjugate gradient
  kMm,           // minorization-maximization
  kRandomPhase,  // the shared random start point, unoptimized
  kNoIrs,        // direct links only
};

std::string to_string(Algorithm algorithm);
Algorithm parse_algorithm(const std::string& name);
/// Comma-separated list, e.g. "om,mm,no_irs". Rejects empty lists and duplicates.
std::vector<Algorithm> parse_algorithm_list(const std::string& list);

/// Channels, normalized phase problem and the shared start point of one trial.
struct TrialSetup {
  ChannelSet channels;
  QuadraticForm problem;
  PhaseVector q0;
  std::uint64_t seed = 0;
};

/// Start point is redrawn (up to 64 times) until g(q0) > 0.
TrialSetup prepare_trial(const ScenarioConfig& cfg, std::uint64_t seed);

struct TrialResult {
  Algorithm algorithm = Algorithm::kOm;
  RateReport rates;
  double p_signal = 0.0;
  bool feasible = false;
  bool failed = false;
  SolveTrace trace;
  PhaseVector q;  // empty for kNoIrs
};

TrialResult run_trial(const TrialSetup& setup, const ScenarioConfig& cfg, Algorithm algorithm);
TrialResult run_trial(const ScenarioConfig& cfg, Algorithm algorithm, std::uint64_t seed);

enum class SweepVariable { kQosDb, kNIrs };

std::string to_string(SweepVariable variable);
SweepVariable parse_sweep_variable(const std::string& name);

struct SweepSpec {
  SweepVariable variable = SweepVariable::kQosDb;
  std::vector<double> values{0, 5, 10, 15, 20, 25, 30};
  int trials = 100;
  ScenarioConfig base;
  std::vector<Algorithm> algorithms{Algorithm::kOm, Algorithm::kMm, Algorithm::kRandomPhase,
                                    Algorithm::kNoIrs};
  std::uint64_t master_seed = 1;

  void validate() const;
  /// Base config with the swept variable set to `value`.
  ScenarioConfig config_at(double value) const;
};

/// Seed of trial `trial` at value index `value_index`.
std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t value_index, std::size_t trial);

/// Welford accumulator; stderr uses the sample standard deviation.
class RunningStats {
 public:
  void add(double x);
  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const;
  double standard_error() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct SweepRow {
  double value = 0.0;
  Algorithm algorithm = Algorithm::kOm;
  double mean_secrecy_rate = 0.0;  // infeasible and failed trials count as 0
  double stderr_secrecy_rate = 0.0;
  double feasible_frac = 0.0;
  double mean_iters = 0.0;  // over non-failed trials
  double mean_wall_time_s = 0.0;
  int trials = 0;
  int failures = 0;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepRow> rows;  // value-major, algorithms in spec order
  /// Per-trial secrecy rates, [row][trial], kept for independent re-aggregation.
  std::vector<std::vector<double>> secrecy_samples;

  int total_trials() const;
  int total_failures() const;
};

/// Runs every (value, trial) on `threads` workers (0 = hardware concurrency).
/// Aggregation is in trial order, so results do not depend on the worker count.
SweepResult run_sweep(const SweepSpec& spec, unsigned threads = 0);

struct ConvergenceRun {
  Algorithm algorithm = Algorithm::kOm;
  int n_irs = 0;
  SolveTrace trace;
};

/// One channel realization per L; OM and MM start from the same q0.
std::vector<ConvergenceRun> convergence_experiment(const ScenarioConfig& cfg,
                                                   const std::vector<int>& l_values,
                                                   std::uint64_t seed);

/// Runs fn(i) for i in [0, n) on a small worker pool.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace irsec
