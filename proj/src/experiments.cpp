#include "irsec/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace irsec {

namespace {

constexpr std::uint64_t kStartPointStream = 100;
constexpr std::uint64_t kRestartStream = 101;
constexpr int kMaxStartDraws = 64;

}  // namespace

std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kOm:
      return "om";
    case Algorithm::kMm:
      return "mm";
    case Algorithm::kRandomPhase:
      return "random_phase";
    case Algorithm::kNoIrs:
      return "no_irs";
  }
  return "unknown";
}

Algorithm parse_algorithm(const std::string& name) {
  for (Algorithm a : {Algorithm::kOm, Algorithm::kMm, Algorithm::kRandomPhase, Algorithm::kNoIrs}) {
    if (to_string(a) == name) return a;
  }
  throw Error("unknown algorithm '" + name + "' (expected om, mm, random_phase, no_irs)");
}

std::vector<Algorithm> parse_algorithm_list(const std::string& list) {
  std::vector<Algorithm> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    const Algorithm a = parse_algorithm(item);
    if (std::find(out.begin(), out.end(), a) != out.end()) {
      throw Error("algorithm '" + item + "' listed twice");
    }
    out.push_back(a);
  }
  if (out.empty()) throw Error("algorithm list is empty");
  return out;
}

TrialSetup prepare_trial(const ScenarioConfig& cfg, std::uint64_t seed) {
  ChannelSet channels = generate_channels(cfg, seed);
  QuadraticForm problem = normalized(build_quadratic(channels));
  CounterRng rng(derive_seed(seed, kStartPointStream));
  PhaseVector q0 = random_phases(problem.size(), rng);
  for (int draw = 1; draw < kMaxStartDraws && !(quadratic_objective(problem, q0) > 0.0); ++draw) {
    q0 = random_phases(problem.size(), rng);
  }
  return {std::move(channels), std::move(problem), std::move(q0), seed};
}

TrialResult run_trial(const TrialSetup& setup, const ScenarioConfig& cfg, Algorithm algorithm) {
  TrialResult result;
  result.algorithm = algorithm;
  const SolverSettings& s = cfg.solver;

  switch (algorithm) {
    case Algorithm::kNoIrs: {
      const auto [design, rates] = design_for_channels(setup.channels.h_ab, setup.channels.h_ae, cfg);
      result.rates = rates;
      result.p_signal = design.p_signal;
      result.feasible = design.feasible;
      result.trace.converged = true;
      return result;
    }
    case Algorithm::kRandomPhase:
      result.q = setup.q0;
      result.trace.converged = true;
      result.trace.objective.push_back(quadratic_objective(setup.problem, setup.q0));
      break;
    case Algorithm::kOm: {
      OmOptions options;
      options.tol = s.om_tol;
      options.max_iter = s.max_iter;
      options.eta0 = s.eta0;
      options.cg_rule = s.cg_rule;
      options.restart_seed = derive_seed(setup.seed, kRestartStream);
      SolveResult solved = om_solve(setup.problem, setup.q0, options);
      result.q = std::move(solved.q);
      result.trace = std::move(solved.trace);
      break;
    }
    case Algorithm::kMm: {
      MmOptions options;
      options.tol = s.mm_tol;
      options.max_iter = s.max_iter;
      SolveResult solved = mm_solve(setup.problem, setup.q0, options);
      result.q = std::move(solved.q);
      result.trace = std::move(solved.trace);
      break;
    }
  }

  if (result.trace.failed) {
    result.failed = true;
    return result;
  }
  const auto [design, rates] = design_transmission(setup.channels, result.q, cfg);
  result.rates = rates;
  result.p_signal = design.p_signal;
  result.feasible = design.feasible;
  return result;
}

TrialResult run_trial(const ScenarioConfig& cfg, Algorithm algorithm, std::uint64_t seed) {
  return run_trial(prepare_trial(cfg, seed), cfg, algorithm);
}

std::string to_string(SweepVariable variable) {
  return variable == SweepVariable::kQosDb ? "qos_db" : "n_irs";
}

SweepVariable parse_sweep_variable(const std::string& name) {
  if (name == "qos_db") return SweepVariable::kQosDb;
  if (name == "n_irs") return SweepVariable::kNIrs;
  throw Error("invalid config: variable must be 'qos_db' or 'n_irs' (got '" + name + "')");
}

void SweepSpec::validate() const {
  if (values.empty()) throw Error("invalid config: values must be non-empty");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) throw Error("invalid config: values must be strictly increasing");
  }
  if (trials < 1) throw Error("invalid config: trials must be >= 1");
  if (algorithms.empty()) throw Error("invalid config: algorithms must be non-empty");
  if (variable == SweepVariable::kNIrs) {
    for (double v : values) {
      if (v < 1 || v != std::floor(v)) throw Error("invalid config: n_irs values must be positive integers");
    }
  }
  base.validate();
  for (double v : values) config_at(v).validate();
}

ScenarioConfig SweepSpec::config_at(double value) const {
  ScenarioConfig cfg = base;
  if (variable == SweepVariable::kQosDb) {
    cfg.qos_db = value;
  } else {
    cfg.n_irs = static_cast<int>(value);
  }
  return cfg;
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t value_index, std::size_t trial) {
  return derive_seed(derive_seed(master_seed, value_index), trial);
}

void RunningStats::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

double RunningStats::variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }

double RunningStats::standard_error() const {
  return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

int SweepResult::total_trials() const {
  int n = 0;
  for (const SweepRow& r : rows) n += r.trials;
  return n;
}

int SweepResult::total_failures() const {
  int n = 0;
  for (const SweepRow& r : rows) n += r.failures;
  return n;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

SweepResult run_sweep(const SweepSpec& spec, unsigned threads) {
  spec.validate();
  const std::size_t n_values = spec.values.size();
  const std::size_t n_trials = static_cast<std::size_t>(spec.trials);
  const std::size_t n_alg = spec.algorithms.size();

  std::vector<TrialResult> results(n_values * n_trials * n_alg);
  parallel_for(n_values * n_trials, threads, [&](std::size_t job) {
    const std::size_t v = job / n_trials;
    const std::size_t t = job % n_trials;
    const ScenarioConfig cfg = spec.config_at(spec.values[v]);
    const TrialSetup setup = prepare_trial(cfg, trial_seed(spec.master_seed, v, t));
    for (std::size_t a = 0; a < n_alg; ++a) {
      results[job * n_alg + a] = run_trial(setup, cfg, spec.algorithms[a]);
    }
  });

  SweepResult out;
  out.spec = spec;
  for (std::size_t v = 0; v < n_values; ++v) {
    for (std::size_t a = 0; a < n_alg; ++a) {
      RunningStats rate;
      RunningStats iters;
      RunningStats wall;
      int feasible = 0;
      int failures = 0;
      std::vector<double> samples;
      samples.reserve(n_trials);
      for (std::size_t t = 0; t < n_trials; ++t) {
        const TrialResult& r = results[(v * n_trials + t) * n_alg + a];
        const double c = r.failed ? 0.0 : r.rates.secrecy_rate;
        rate.add(c);
        samples.push_back(c);
        wall.add(r.trace.wall_time_s);
        if (r.failed) {
          ++failures;
          continue;
        }
        iters.add(r.trace.iterations);
        if (r.feasible) ++feasible;
      }
      SweepRow row;
      row.value = spec.values[v];
      row.algorithm = spec.algorithms[a];
      row.mean_secrecy_rate = rate.mean();
      row.stderr_secrecy_rate = rate.standard_error();
      row.feasible_frac = static_cast<double>(feasible) / static_cast<double>(n_trials);
      row.mean_iters = iters.mean();
      row.mean_wall_time_s = wall.mean();
      row.trials = spec.trials;
      row.failures = failures;
      out.rows.push_back(row);
      out.secrecy_samples.push_back(std::move(samples));
    }
  }
  return out;
}

std::vector<ConvergenceRun> convergence_experiment(const ScenarioConfig& cfg,
                                                   const std::vector<int>& l_values,
                                                   std::uint64_t seed) {
  std::vector<ConvergenceRun> runs;
  for (std::size_t i = 0; i < l_values.size(); ++i) {
    ScenarioConfig at = cfg;
    at.n_irs = l_values[i];
    const TrialSetup setup = prepare_trial(at, derive_seed(seed, i));
    for (Algorithm a : {Algorithm::kOm, Algorithm::kMm}) {
      runs.push_back({a, l_values[i], run_trial(setup, at, a).trace});
    }
  }
  return runs;
}

}  // namespace irsec
