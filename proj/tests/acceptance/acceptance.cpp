// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "irsec/experiments.hpp"
#include "irsec/output.hpp"
#include "irsec/phase_opt.hpp"
#include "irsec/transmit.hpp"

namespace irsec {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double x, int precision = 4) {
  std::ostringstream out;
  out << std::setprecision(precision) << x;
  return out.str();
}

double max_unit_modulus_error(const CVector& q) {
  return (q.cwiseAbs().array() - 1.0).abs().maxCoeff();
}

double max_tangency_residual(const CVector& v, const CVector& q) {
  return (v.array() * q.conjugate().array()).real().abs().maxCoeff();
}

CVector random_tangent(const PhaseVector& q, CounterRng& rng) {
  CVector z(q.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.complex_normal(1.0);
  return riemannian_gradient(z, q);
}

// 1. Unit modulus, tangency and finite-difference agreement at solver iterates.
Outcome manifold_invariants() {
  const auto start = Clock::now();
  const std::vector<int> sizes{4, 8, 16, 32, 50};
  constexpr int kInstances = 100;
  constexpr int kIteratesPerInstance = 10;
  double worst_modulus = 0.0;
  double worst_tangency = 0.0;
  double worst_fd = 0.0;
  int pairs = 0;
  for (int i = 0; i < kInstances; ++i) {
    ScenarioConfig cfg;
    cfg.n_irs = sizes[static_cast<std::size_t>(i) % sizes.size()];
    const TrialSetup setup = prepare_trial(cfg, derive_seed(1001, static_cast<std::uint64_t>(i)));
    const QuadraticForm& qf = setup.problem;
    CounterRng rng(derive_seed(2002, static_cast<std::uint64_t>(i)));
    const double lam = lambda_max(qf.a);
    PhaseVector mm_iterate = setup.q0;
    for (int k = 1; k <= kIteratesPerInstance; ++k) {
      OmOptions options;
      options.max_iter = k;
      const PhaseVector q = om_solve(qf, setup.q0, options).q;
      mm_iterate = mm_step(mm_beta(qf, mm_iterate, lam), mm_iterate);
      ++pairs;

      worst_modulus = std::max({worst_modulus, max_unit_modulus_error(q.values()),
                                max_unit_modulus_error(mm_iterate.values())});
      const CVector egrad = euclidean_gradient(qf, q);
      const CVector rgrad = riemannian_gradient(egrad, q);
      const PhaseVector next = retract(q, 0.1, -rgrad);
      worst_modulus = std::max(worst_modulus, max_unit_modulus_error(next.values()));
      worst_tangency = std::max({worst_tangency, max_tangency_residual(rgrad, q.values()),
                                 max_tangency_residual(vector_transport(rgrad, next),
                                                       next.values())});

      // Direction with a guaranteed component along the gradient.
      CVector z = random_tangent(q, rng);
      z = rgrad / rgrad.norm() + 0.5 * z / z.norm();
      const double t = 1e-5;
      const double fd = (1.0 / quadratic_objective(qf, retract(q, t, z)) -
                         1.0 / quadratic_objective(qf, retract(q, -t, z))) /
                        (2.0 * t);
      const double analytic = real_inner(z, egrad);
      worst_fd = std::max(worst_fd, std::abs(fd - analytic) / std::abs(analytic));
    }
  }
  const double elapsed = seconds_since(start);
  const bool pass = pairs >= 1000 && worst_modulus <= 1e-12 && worst_tangency <= 1e-12 &&
                    worst_fd <= 1e-3 && elapsed < 30.0;
  return {pass, std::to_string(pairs) + " pairs, modulus err " + fmt(worst_modulus) +
                    ", tangency " + fmt(worst_tangency) + ", fd rel err " + fmt(worst_fd) +
                    ", " + fmt(elapsed, 3) + " s"};
}

// q^H A q - 2Re{q^H b}, the minimization form of the objective.
double p3_value(const QuadraticForm& qf, const CVector& q) {
  return q.dot(qf.a.entries() * q).real() - 2.0 * q.dot(qf.b).real();
}

// 2. MM monotonicity and majorizer touch condition at every iterate.
Outcome mm_monotonicity() {
  const auto start = Clock::now();
  ScenarioConfig cfg;
  cfg.n_irs = 50;
  cfg.n_tx = 5;
  double worst_drop = 0.0;
  double worst_touch = 0.0;
  double worst_majorization = 0.0;
  int trace_mismatches = 0;
  long iterates = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const TrialSetup setup = prepare_trial(cfg, derive_seed(3003, i));
    const QuadraticForm& qf = setup.problem;
    const double lam = lambda_max(qf.a);
    const MmOptions options;

    // Replays the solver update so every iterate is available.
    std::vector<double> replay{quadratic_objective(qf, setup.q0)};
    PhaseVector q = setup.q0;
    for (int k = 0; k < options.max_iter; ++k) {
      worst_touch = std::max(worst_touch, std::abs(mm_surrogate(qf, q, q, lam) -
                                                   p3_value(qf, q.values())));
      const PhaseVector next = mm_step(mm_beta(qf, q, lam), q);
      worst_majorization = std::max(
          worst_majorization, p3_value(qf, next.values()) - mm_surrogate(qf, next, q, lam));
      replay.push_back(quadratic_objective(qf, next));
      ++iterates;
      worst_drop = std::max(worst_drop, replay[replay.size() - 2] - replay.back());
      q = next;
      if (std::abs(replay.back() - replay[replay.size() - 2]) <=
          options.tol * std::max(1.0, std::abs(replay.back()))) {
        break;
      }
    }
    const SolveTrace trace = mm_solve(qf, setup.q0).trace;
    if (trace.objective != replay || !trace.converged) ++trace_mismatches;
    for (std::size_t k = 1; k < trace.objective.size(); ++k) {
      worst_drop = std::max(worst_drop, trace.objective[k - 1] - trace.objective[k]);
    }
  }
  const double elapsed = seconds_since(start);
  const bool pass = worst_drop <= 1e-9 && worst_touch <= 1e-9 && worst_majorization <= 1e-9 &&
                    trace_mismatches == 0 && elapsed < 60.0;
  return {pass, "100 instances, " + std::to_string(iterates) + " iterates, max drop " +
                    fmt(worst_drop) + ", touch err " + fmt(worst_touch) +
                    ", majorization violation " + fmt(worst_majorization) + ", " +
                    std::to_string(trace_mismatches) + " trace mismatches, " + fmt(elapsed, 3) +
                    " s"};
}

// 3. OM and MM against the exhaustive grid for tiny surfaces.
Outcome oracle_equivalence(unsigned threads) {
  const auto start = Clock::now();
  struct Tally {
    int instances = 0;
    int om_ok = 0;
    int mm_ok = 0;
    double worst_phase = 0.0;
  };
  const auto run = [&](int l, int instances, Tally& tally) {
    ScenarioConfig cfg;
    cfg.n_irs = l;
    struct Row {
      double om = 0.0;
      double mm = 0.0;
      double phase = 0.0;
    };
    std::vector<Row> rows(static_cast<std::size_t>(instances));
    parallel_for(rows.size(), threads, [&](std::size_t i) {
      const TrialSetup setup = prepare_trial(cfg, derive_seed(4004 + l, i));
      const double best = grid_oracle(setup.problem, 512).value;
      const TrialResult om = run_trial(setup, cfg, Algorithm::kOm);
      const TrialResult mm = run_trial(setup, cfg, Algorithm::kMm);
      rows[i].om = quadratic_objective(setup.problem, om.q) / best;
      rows[i].mm = quadratic_objective(setup.problem, mm.q) / best;
      if (l == 1) {
        const Complex b = setup.problem.b(0);
        rows[i].phase = std::max(std::abs(std::arg(om.q(0) / b)), std::abs(std::arg(mm.q(0) / b)));
      }
    });
    for (const Row& r : rows) {
      ++tally.instances;
      tally.om_ok += r.om >= 0.99;
      tally.mm_ok += r.mm >= 0.99;
      tally.worst_phase = std::max(tally.worst_phase, r.phase);
    }
  };
  Tally l1, l2, l3;
  run(1, 100, l1);
  run(2, 100, l2);
  run(3, 10, l3);
  const double elapsed = seconds_since(start);
  const auto enough = [](const Tally& t) {
    return t.om_ok >= 0.98 * t.instances && t.mm_ok >= 0.98 * t.instances;
  };
  const bool pass = enough(l1) && enough(l2) && l3.om_ok == l3.instances &&
                    l3.mm_ok == l3.instances && l1.worst_phase <= 1e-4 && elapsed < 300.0;
  const auto summary = [](const char* name, const Tally& t) {
    return std::string(name) + " om " + std::to_string(t.om_ok) + "/" +
           std::to_string(t.instances) + " mm " + std::to_string(t.mm_ok) + "/" +
           std::to_string(t.instances);
  };
  return {pass, summary("L=1", l1) + ", " + summary("L=2", l2) + ", " + summary("L=3", l3) +
                    ", L=1 phase err " + fmt(l1.worst_phase) + " rad, " + fmt(elapsed, 3) + " s"};
}

// 4. QoS equality, AN nulling, power conservation and non-negative rate.
Outcome transmit_contracts() {
  ScenarioConfig cfg;
  int feasible = 0;
  double worst_sinr = 0.0;
  double worst_null = 0.0;
  double worst_power = 0.0;
  double min_rate = std::numeric_limits<double>::infinity();
  for (std::uint64_t seed = 0; feasible < 1000 && seed < 5000; ++seed) {
    const TrialSetup setup = prepare_trial(cfg, derive_seed(5005, seed));
    const TrialResult om = run_trial(setup, cfg, Algorithm::kOm);
    const auto [design, report] = design_transmission(setup.channels, om.q, cfg);
    if (!design.feasible) continue;
    ++feasible;
    const CVector h_b = effective_bob_channel(setup.channels, om.q);
    const double p_a = cfg.p_total_w();
    worst_sinr = std::max(worst_sinr, std::abs(report.sinr_bob / cfg.qos_linear() - 1.0));
    const double leak = std::abs(h_b.dot(design.r_an * h_b));
    worst_null = std::max(worst_null, leak / (design.p_jam * h_b.squaredNorm()));
    worst_power = std::max(
        worst_power, std::abs(design.w.squaredNorm() + design.r_an.trace().real() - p_a) / p_a);
    min_rate = std::min(min_rate, report.secrecy_rate);
  }
  const bool pass = feasible >= 1000 && worst_sinr <= 1e-10 && worst_null <= 1e-10 &&
                    worst_power <= 1e-10 && min_rate >= 0.0;
  return {pass, std::to_string(feasible) + " feasible trials, SINR rel err " + fmt(worst_sinr) +
                    ", nulling " + fmt(worst_null) + ", power rel err " + fmt(worst_power) +
                    ", min rate " + fmt(min_rate)};
}

// 5. Secrecy rate versus QoS target: shape of the averaged curves.
Outcome secrecy_vs_qos(unsigned threads) {
  const auto start = Clock::now();
  SweepSpec spec;
  spec.trials = 100;
  spec.algorithms = {Algorithm::kOm, Algorithm::kMm, Algorithm::kNoIrs};
  const SweepResult result = run_sweep(spec, threads);
  const std::size_t n = spec.values.size();
  std::vector<double> om(n), mm(n), no_irs(n), om_feasible(n), mm_feasible(n);
  for (const SweepRow& row : result.rows) {
    const std::size_t v = static_cast<std::size_t>(
        std::find(spec.values.begin(), spec.values.end(), row.value) - spec.values.begin());
    switch (row.algorithm) {
      case Algorithm::kOm:
        om[v] = row.mean_secrecy_rate;
        om_feasible[v] = row.feasible_frac;
        break;
      case Algorithm::kMm:
        mm[v] = row.mean_secrecy_rate;
        mm_feasible[v] = row.feasible_frac;
        break;
      default:
        no_irs[v] = row.mean_secrecy_rate;
    }
  }
  bool dominance = true;
  bool om_vs_mm = true;
  int feasible_points = 0;
  for (std::size_t v = 0; v < n; ++v) {
    om_vs_mm = om_vs_mm && om[v] >= mm[v] - 0.05;
    if (om_feasible[v] == 0.0 && mm_feasible[v] == 0.0) continue;
    ++feasible_points;
    dominance = dominance && om[v] > no_irs[v] && mm[v] > no_irs[v];
  }
  const auto interior_max = [n](const std::vector<double>& c) {
    const std::size_t k =
        static_cast<std::size_t>(std::max_element(c.begin(), c.end()) - c.begin());
    return k > 0 && k + 1 < n && c[k] > c.front() && c[k] > c.back();
  };
  const bool peaks = interior_max(om) && interior_max(mm);
  const double elapsed = seconds_since(start);
  std::ostringstream curve;
  for (std::size_t v = 0; v < n; ++v) {
    curve << (v ? " " : "") << spec.values[v] << ":" << fmt(om[v], 3) << "/" << fmt(mm[v], 3)
          << "/" << fmt(no_irs[v], 3);
  }
  const bool pass = dominance && peaks && om_vs_mm && feasible_points > 0 && elapsed < 600.0;
  return {pass, std::string("dominance ") + (dominance ? "yes" : "no") + " at " +
                    std::to_string(feasible_points) + " feasible points, interior max " +
                    (peaks ? "yes" : "no") + ", om>=mm-0.05 " + (om_vs_mm ? "yes" : "no") +
                    ", om/mm/no_irs [" + curve.str() + "], " + fmt(elapsed, 3) + " s"};
}

// 6. Iteration counts of the two solvers.
Outcome convergence_behaviour() {
  ScenarioConfig cfg;
  cfg.qos_db = 10;
  cfg.n_tx = 5;
  constexpr int kSeeds = 20;
  int all_converged = 0;
  int runs = 0;
  std::vector<int> mm_fewer(2, 0);
  std::vector<double> om_iters(2, 0.0);
  for (int s = 0; s < kSeeds; ++s) {
    const std::vector<ConvergenceRun> result =
        convergence_experiment(cfg, {20, 50}, derive_seed(6006, static_cast<std::uint64_t>(s)));
    for (std::size_t li = 0; li < 2; ++li) {
      const SolveTrace& om = result[2 * li].trace;
      const SolveTrace& mm = result[2 * li + 1].trace;
      runs += 2;
      all_converged += om.converged + mm.converged;
      mm_fewer[li] += mm.iterations < om.iterations;
      om_iters[li] += om.iterations / static_cast<double>(kSeeds);
    }
  }
  const bool pass = all_converged == runs && mm_fewer[0] >= 0.8 * kSeeds &&
                    mm_fewer[1] >= 0.8 * kSeeds && om_iters[1] >= om_iters[0];
  return {pass, std::to_string(all_converged) + "/" + std::to_string(runs) +
                    " converged, MM fewer iterations on " + std::to_string(mm_fewer[0]) + "/" +
                    std::to_string(kSeeds) + " (L=20) and " + std::to_string(mm_fewer[1]) + "/" +
                    std::to_string(kSeeds) + " (L=50), mean OM iterations " +
                    fmt(om_iters[0]) + " (L=20) vs " + fmt(om_iters[1]) + " (L=50)"};
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]) / n;
    my += std::log(y[i]) / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

// Median over repetitions of wall time per solver iteration.
double time_per_iteration(const std::function<int()>& solve) {
  std::vector<double> samples;
  for (int rep = 0; rep < 7; ++rep) {
    int iterations = 0;
    const auto start = Clock::now();
    do {
      iterations += std::max(1, solve());
    } while (seconds_since(start) < 0.05);
    samples.push_back(seconds_since(start) / iterations);
  }
  std::nth_element(samples.begin(), samples.begin() + 3, samples.end());
  return samples[3];
}

// 7. Per-iteration cost grows no faster than about L^2.
Outcome scaling() {
  const std::vector<double> sizes{32, 64, 128, 256};
  std::vector<double> om_cost, mm_cost;
  for (double l : sizes) {
    ScenarioConfig cfg;
    cfg.n_irs = static_cast<int>(l);
    const TrialSetup setup = prepare_trial(cfg, derive_seed(7007, static_cast<std::uint64_t>(l)));
    const QuadraticForm& qf = setup.problem;
    MmOptions mm_options;
    mm_options.lambda = lambda_max(qf.a);
    om_cost.push_back(time_per_iteration([&] { return om_solve(qf, setup.q0).trace.iterations; }));
    mm_cost.push_back(
        time_per_iteration([&] { return mm_solve(qf, setup.q0, mm_options).trace.iterations; }));
  }
  const double om_slope = loglog_slope(sizes, om_cost);
  const double mm_slope = loglog_slope(sizes, mm_cost);
  std::ostringstream costs;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    costs << (i ? " " : "") << sizes[i] << ":" << fmt(om_cost[i] * 1e6, 3) << "/"
          << fmt(mm_cost[i] * 1e6, 3);
  }
  return {om_slope <= 2.3 && mm_slope <= 2.3,
          "log-log slope OM " + fmt(om_slope, 3) + ", MM " + fmt(mm_slope, 3) +
              ", us/iter om/mm [" + costs.str() + "]"};
}

int shell(const std::string& command) {
  const int status = std::system(command.c_str());
  return status == -1 ? -1 : WEXITSTATUS(status);
}

std::vector<fs::path> files_under(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) out.push_back(entry.path().filename());
  std::sort(out.begin(), out.end());
  return out;
}

// 8. Repeated CLI runs produce byte-identical files.
Outcome cli_determinism(const std::string& cli, const fs::path& work) {
  fs::remove_all(work);
  fs::create_directories(work);
  const std::string q = "'";
  const std::vector<std::pair<std::string, std::string>> commands{
      {"sweep", "sweep --trials 10 --set n_irs=20 --seed 11"},
      {"sweep_nirs", "sweep --trials 5 --set variable=n_irs --set values=10,30 --seed 4"},
      {"converge", "converge --seed 3"},
  };
  int compared = 0;
  std::vector<std::string> mismatches;
  for (const auto& [name, args] : commands) {
    std::vector<fs::path> dirs;
    for (const char* threads : {"1", "4"}) {
      const fs::path dir = work / (name + "_t" + threads);
      const std::string cmd = q + cli + q + " " + args + " --threads " + threads + " --out " + q +
                              dir.string() + q + " 2>/dev/null";
      if (shell(cmd) != 0) return {false, "command failed: " + cmd};
      dirs.push_back(dir);
    }
    const std::vector<fs::path> names = files_under(dirs[0]);
    if (names != files_under(dirs[1])) mismatches.push_back(name + ": file sets differ");
    for (const fs::path& file : names) {
      ++compared;
      if (read_text_file(dirs[0] / file) != read_text_file(dirs[1] / file)) {
        mismatches.push_back(name + "/" + file.string());
      }
    }
  }
  for (const char* threads : {"1", "4"}) {
    const std::string cmd = q + cli + q + " oracle-check -L 2 --instances 10 --threads " +
                            threads + " > " + q + (work / ("oracle_t" + std::string(threads))).string() +
                            q;
    if (shell(cmd) != 0) return {false, "command failed: " + cmd};
  }
  ++compared;
  if (read_text_file(work / "oracle_t1") != read_text_file(work / "oracle_t4")) {
    mismatches.push_back("oracle-check stdout");
  }
  std::string detail = std::to_string(compared) + " files compared across reruns";
  for (const std::string& m : mismatches) detail += ", differs: " + m;
  return {mismatches.empty() && compared > 0, detail};
}

}  // namespace
}  // namespace irsec

int main(int argc, char** argv) {
  CLI::App app{"Acceptance suite for the irsec library and command-line tool"};
  std::string cli;
  std::string work_dir = "acceptance_work";
  unsigned threads = 0;
  app.add_option("--cli", cli, "Path to the irsec executable")->required();
  app.add_option("--work-dir", work_dir, "Scratch directory for CLI outputs");
  app.add_option("--threads", threads, "Worker threads (0 = all cores)");
  CLI11_PARSE(app, argc, argv);

  using irsec::Outcome;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"manifold invariants", [] { return irsec::manifold_invariants(); }},
      {"MM monotonicity", [] { return irsec::mm_monotonicity(); }},
      {"oracle equivalence", [&] { return irsec::oracle_equivalence(threads); }},
      {"transmit contracts", [] { return irsec::transmit_contracts(); }},
      {"secrecy rate vs QoS curves", [&] { return irsec::secrecy_vs_qos(threads); }},
      {"convergence behaviour", [] { return irsec::convergence_behaviour(); }},
      {"per-iteration scaling", [] { return irsec::scaling(); }},
      {"CLI determinism", [&] { return irsec::cli_determinism(cli, work_dir); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failed += !outcome.pass;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << " criterion " << (i + 1) << " "
              << criteria[i].first << ": " << outcome.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
