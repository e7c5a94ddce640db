#include "irsec/phase_opt.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

namespace irsec {

namespace {

constexpr double kPoleThreshold = 1e-12;
constexpr double kZeroModulus = 1e-300;
constexpr double kArmijoConstant = 1e-4;
constexpr double kBacktrackFactor = 0.5;
constexpr int kMaxHalvings = 30;
constexpr double kMaxStepGrowth = 1e3;

double objective(const QuadraticForm& qf, const CVector& q) {
  const CVector neg_aq = -(qf.a.entries() * q);
  return q.dot(neg_aq).real() + 2.0 * q.dot(qf.b).real();
}

CVector gradient_of_reciprocal(const QuadraticForm& qf, const CVector& q, double g) {
  return -2.0 * (-(qf.a.entries() * q) + qf.b) / (g * g);
}

CVector project(const CVector& v, const CVector& q) {
  CVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out(i) = v(i) - (v(i) * std::conj(q(i))).real() * q(i);
  }
  return out;
}

struct CurvePoint {
  CVector point;
  Eigen::VectorXd moduli;  // |q + t dir| before normalization
};

CurvePoint along_curve(const CVector& q, double t, const CVector& dir) {
  CurvePoint c{q + t * dir, Eigen::VectorXd(q.size())};
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    const double r = std::abs(c.point(i));
    c.moduli(i) = r;
    c.point(i) = r < kZeroModulus ? q(i) : c.point(i) / r;
  }
  return c;
}

// d/dt f(unt(q + t dir)); empty when g is at or beyond the pole.
std::optional<double> curve_slope(const QuadraticForm& qf, const CVector& q, double t,
                                  const CVector& dir) {
  const CurvePoint c = along_curve(q, t, dir);
  const double g = objective(qf, c.point);
  if (!(g > kPoleThreshold)) return std::nullopt;
  CVector velocity = project(dir, c.point);
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    if (c.moduli(i) >= kZeroModulus) velocity(i) /= c.moduli(i);
  }
  return real_inner(gradient_of_reciprocal(qf, c.point, g), velocity);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

QuadraticForm build_quadratic(const ChannelSet& cs) {
  if (cs.h_ai.rows() != cs.n_irs() || cs.h_ai.cols() != cs.n_tx()) {
    throw Error("build_quadratic: H_AI shape does not match h_IB / h_AB");
  }
  // Phi = diag(h_IB^H) H_AI, so A = -Phi Phi^H and b = Phi h_AB.
  const CMatrix phi = cs.h_ib.conjugate().asDiagonal() * cs.h_ai;
  CMatrix a = -(phi * phi.adjoint());
  // Remove rounding asymmetry so the Hermitian check is exact.
  a = 0.5 * (a + a.adjoint()).eval();
  return QuadraticForm{HermitianMatrix(std::move(a)), phi * cs.h_ab, cs.h_ab.squaredNorm(), 1.0};
}

QuadraticForm normalized(const QuadraticForm& qf) {
  const double l = static_cast<double>(qf.size());
  const double kappa = l * (-qf.a.entries().trace().real()) + 2.0 * qf.b.cwiseAbs().sum();
  if (!(kappa > 0.0)) return qf;
  return QuadraticForm{HermitianMatrix(qf.a.entries() / kappa), qf.b / kappa, qf.c0 / kappa,
                       qf.scale * kappa};
}

double quadratic_objective(const QuadraticForm& qf, const PhaseVector& q) {
  if (q.size() != qf.size()) throw Error("quadratic_objective: dimension mismatch");
  return objective(qf, q.values());
}

CVector euclidean_gradient(const QuadraticForm& qf, const PhaseVector& q) {
  const double g = quadratic_objective(qf, q);
  if (std::abs(g) < kPoleThreshold) throw Error("euclidean_gradient: objective singularity (g ~ 0)");
  return gradient_of_reciprocal(qf, q.values(), g);
}

CVector riemannian_gradient(const CVector& egrad, const PhaseVector& q) {
  return project(egrad, q.values());
}

CVector vector_transport(const CVector& mu, const PhaseVector& q_next) {
  return project(mu, q_next.values());
}

double cg_coefficient(const CVector& grad_next, const CVector& grad_curr) {
  const double denom = grad_curr.squaredNorm();
  if (grad_curr.norm() < 1e-300) return 0.0;
  return std::clamp(grad_next.squaredNorm() / denom, 0.0, kMaxCgCoefficient);
}

double polak_ribiere_coefficient(const CVector& grad_next, const CVector& transported_curr,
                                 const CVector& grad_curr) {
  if (grad_curr.norm() < 1e-300) return 0.0;
  const double num = real_inner(grad_next, grad_next - transported_curr);
  return std::clamp(num / grad_curr.squaredNorm(), 0.0, kMaxCgCoefficient);
}

std::optional<double> secant_estimate(double slope0, double slope_probe, double eta_prev) {
  const double denom = slope_probe - slope0;
  if (std::abs(denom) < 1e-18) return std::nullopt;
  return -eta_prev * slope0 / denom;
}

StepSize secant_step_size(const QuadraticForm& qf, const PhaseVector& q, const CVector& dir,
                          double eta_prev) {
  if (!(eta_prev > 0.0)) throw Error("secant_step_size: eta_prev must be > 0");
  const CVector& x = q.values();
  if (dir.norm() == 0.0) return {};

  const double g0 = objective(qf, x);
  if (!(g0 > kPoleThreshold)) return {};
  const double f0 = 1.0 / g0;
  const auto s0 = curve_slope(qf, x, 0.0, dir);
  if (!s0 || *s0 >= 0.0) return {};

  const auto acceptable = [&](double eta) {
    const double g = objective(qf, along_curve(x, eta, dir).point);
    return g > kPoleThreshold && 1.0 / g <= f0 + kArmijoConstant * eta * *s0;
  };

  if (const auto s1 = curve_slope(qf, x, eta_prev, dir)) {
    if (const auto eta = secant_estimate(*s0, *s1, eta_prev)) {
      if (std::isfinite(*eta) && *eta > 0.0 && *eta <= kMaxStepGrowth * eta_prev &&
          acceptable(*eta)) {
        return {*eta, false};
      }
    }
  }

  double eta = eta_prev;
  for (int k = 0; k <= kMaxHalvings; ++k) {
    if (acceptable(eta)) return {eta, true};
    eta *= kBacktrackFactor;
  }
  return {0.0, true};
}

PhaseVector retract(const PhaseVector& q, double eta, const CVector& mu) {
  if (mu.size() != q.size()) throw Error("retract: dimension mismatch");
  return PhaseVector(along_curve(q.values(), eta, mu).point);
}

PhaseVector random_phases(Eigen::Index length, CounterRng& rng) {
  CVector q(length);
  for (Eigen::Index i = 0; i < length; ++i) {
    q(i) = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
  }
  return PhaseVector(std::move(q));
}

SolveResult om_solve(const QuadraticForm& qf, const PhaseVector& q0, const OmOptions& options) {
  if (!(options.tol > 0.0)) throw Error("om_solve: tol must be > 0");
  if (q0.size() != qf.size()) throw Error("om_solve: dimension mismatch");
  const auto start = std::chrono::steady_clock::now();

  SolveResult result{q0, {}};
  SolveTrace& trace = result.trace;

  PhaseVector q = q0;
  CounterRng restart_rng(options.restart_seed);
  while (!(quadratic_objective(qf, q) > kPoleThreshold)) {
    if (trace.restarts == options.max_restarts) {
      trace.failed = true;
      trace.diagnostic = "objective singularity: g <= 0 at every start point";
      trace.wall_time_s = seconds_since(start);
      return result;
    }
    ++trace.restarts;
    q = random_phases(qf.size(), restart_rng);
  }

  double g = quadratic_objective(qf, q);
  CVector rgrad = riemannian_gradient(euclidean_gradient(qf, q), q);
  CVector mu = -rgrad;
  double eta = options.eta0;
  result.q = q;
  double best = g;
  trace.objective.push_back(g);
  trace.grad_norm.push_back(rgrad.norm());

  while (true) {
    if (rgrad.norm() <= options.tol) {
      trace.converged = true;
      break;
    }
    if (trace.iterations >= options.max_iter) {
      trace.diagnostic = "iteration cap reached";
      break;
    }
    if (real_inner(rgrad, mu) >= 0.0) mu = -rgrad;

    const StepSize step = secant_step_size(qf, q, mu, eta);
    if (step.used_fallback) ++trace.step_fallbacks;
    if (step.eta == 0.0) {
      trace.diagnostic = "line search stagnated";
      break;
    }

    PhaseVector q_next = retract(q, step.eta, mu);
    g = quadratic_objective(qf, q_next);
    const CVector rgrad_next = riemannian_gradient(euclidean_gradient(qf, q_next), q_next);
    double alpha = 0.0;
    switch (options.cg_rule) {
      case CgRule::kPaper:
        alpha = cg_coefficient(rgrad_next, rgrad);
        break;
      case CgRule::kPolakRibiere:
        alpha = polak_ribiere_coefficient(rgrad_next, vector_transport(rgrad, q_next), rgrad);
        break;
    }
    mu = -rgrad_next + alpha * vector_transport(mu, q_next);
    q = std::move(q_next);
    rgrad = rgrad_next;
    eta = step.eta;

    ++trace.iterations;
    trace.objective.push_back(g);
    trace.grad_norm.push_back(rgrad.norm());
    if (g > best) {
      best = g;
      result.q = q;
    }
  }
  trace.wall_time_s = seconds_since(start);
  return result;
}

CVector mm_beta(const QuadraticForm& qf, const PhaseVector& q_k, double lam) {
  if (q_k.size() != qf.size()) throw Error("mm_beta: dimension mismatch");
  return lam * q_k.values() - qf.a.entries() * q_k.values() + qf.b;
}

PhaseVector mm_step(const CVector& beta, const PhaseVector& q_prev) {
  if (beta.size() != q_prev.size()) throw Error("mm_step: dimension mismatch");
  CVector q(beta.size());
  for (Eigen::Index i = 0; i < beta.size(); ++i) {
    const double r = std::abs(beta(i));
    q(i) = r < kZeroModulus ? q_prev(i) : beta(i) / r;
  }
  return PhaseVector(std::move(q));
}

double mm_surrogate(const QuadraticForm& qf, const PhaseVector& q, const PhaseVector& q_k,
                    double lam) {
  const double l = static_cast<double>(qf.size());
  const CVector beta = mm_beta(qf, q_k, lam);
  const double qaq = q_k.values().dot(qf.a.entries() * q_k.values()).real();
  return 2.0 * l * lam - 2.0 * q.values().dot(beta).real() - qaq;
}

SolveResult mm_solve(const QuadraticForm& qf, const PhaseVector& q0, const MmOptions& options) {
  if (q0.size() != qf.size()) throw Error("mm_solve: dimension mismatch");
  const auto start = std::chrono::steady_clock::now();
  const double lam = options.lambda ? *options.lambda : lambda_max(qf.a);

  SolveResult result{q0, {}};
  SolveTrace& trace = result.trace;
  double g = quadratic_objective(qf, q0);
  trace.objective.push_back(g);

  while (trace.iterations < options.max_iter) {
    PhaseVector next = mm_step(mm_beta(qf, result.q, lam), result.q);
    const double g_next = quadratic_objective(qf, next);
    ++trace.iterations;
    trace.objective.push_back(g_next);
    result.q = std::move(next);
    const bool done = std::abs(g_next - g) <= options.tol * std::max(1.0, std::abs(g));
    g = g_next;
    if (done) {
      trace.converged = true;
      break;
    }
  }
  if (!trace.converged) trace.diagnostic = "iteration cap reached";
  trace.wall_time_s = seconds_since(start);
  return result;
}

GridResult grid_oracle(const QuadraticForm& qf, int resolution) {
  const Eigen::Index l = qf.size();
  if (l < 1 || l > 3) {
    std::ostringstream msg;
    msg << "grid_oracle: refusing L = " << l << " (cost resolution^L; supported 1..3)";
    throw Error(msg.str());
  }
  if (resolution < 1) throw Error("grid_oracle: resolution must be >= 1");

  std::vector<Complex> table(static_cast<std::size_t>(resolution));
  for (int k = 0; k < resolution; ++k) {
    table[static_cast<std::size_t>(k)] = std::polar(1.0, 2.0 * std::numbers::pi * k / resolution);
  }
  const CMatrix m = -qf.a.entries();
  const Eigen::Index last = l - 1;

  // g splits into a part fixed by the leading elements plus
  // m_ll + 2Re{conj(q_l) c} with c = sum_{j<l} m_lj q_j + b_l.
  std::vector<int> idx(static_cast<std::size_t>(last), 0);
  std::vector<int> best_idx(static_cast<std::size_t>(l), 0);
  double best = -std::numeric_limits<double>::infinity();
  CVector lead(last);
  while (true) {
    for (Eigen::Index i = 0; i < last; ++i) lead(i) = table[static_cast<std::size_t>(idx[i])];
    double fixed = m(last, last).real();
    Complex c = qf.b(last);
    for (Eigen::Index i = 0; i < last; ++i) {
      fixed += 2.0 * (std::conj(lead(i)) * qf.b(i)).real();
      for (Eigen::Index j = 0; j < last; ++j) fixed += (std::conj(lead(i)) * m(i, j) * lead(j)).real();
      c += m(last, i) * lead(i);
    }
    for (int k = 0; k < resolution; ++k) {
      const double g = fixed + 2.0 * (std::conj(table[static_cast<std::size_t>(k)]) * c).real();
      if (g > best) {
        best = g;
        std::copy(idx.begin(), idx.end(), best_idx.begin());
        best_idx.back() = k;
      }
    }
    Eigen::Index pos = 0;
    while (pos < last && ++idx[static_cast<std::size_t>(pos)] == resolution) {
      idx[static_cast<std::size_t>(pos)] = 0;
      ++pos;
    }
    if (pos == last) break;
  }

  CVector q(l);
  for (Eigen::Index i = 0; i < l; ++i) q(i) = table[static_cast<std::size_t>(best_idx[i])];
  return {PhaseVector(std::move(q)), best};
}

}  // namespace irsec
