#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "irsec/channel.hpp"
#include "irsec/numerics.hpp"
#include "irsec/phase_vector.hpp"
#include "irsec/scenario.hpp"

namespace irsec {

/// The phase problem: maximize g(q) = q^H(-A)q + 2Re{q^H b} over unit-modulus q,
/// equivalently minimize q^H A q - q^H b - b^H q.
///
/// `c0` carries |h_AB|^2 so that |h_B(q)|^2 = scale * (g(q) + c0). `scale`
/// is 1 for a form built from channels and kappa after normalized().
struct QuadraticForm {
  HermitianMatrix a;  // negative semidefinite
  CVector b;
  double c0 = 0.0;
  double scale = 1.0;

  Eigen::Index size() const { return b.size(); }
};

/// A = -diag(h_IB^H) H_AI H_AI^H diag(h_IB), b = diag(h_IB^H) H_AI h_AB.
/// Uses only the legitimate links; Eve's channels never reach the solvers.
QuadraticForm build_quadratic(const ChannelSet& cs);

/// Divides A, b and c0 by kappa = L tr(-A) + 2|b|_1, an upper bound of g on the
/// manifold, and multiplies `scale` by kappa. Minimizers are unchanged.
QuadraticForm normalized(const QuadraticForm& qf);

/// g(q) = q^H(-A)q + 2Re{q^H b}.
double quadratic_objective(const QuadraticForm& qf, const PhaseVector& q);

/// Gradient of f = 1/g w.r.t. the real inner product Re{x^H y}:
/// -2(-Aq + b) / g^2. Throws when |g| < 1e-12 (pole of f).
CVector euclidean_gradient(const QuadraticForm& qf, const PhaseVector& q);

/// Projection onto the tangent space at q: v - Re{v o conj(q)} o q.
CVector riemannian_gradient(const CVector& egrad, const PhaseVector& q);

/// Carries a tangent vector to the tangent space at q_next (same projection).
CVector vector_transport(const CVector& mu, const PhaseVector& q_next);

/// max(|next|^2 / |curr|^2, 0) clamped to kMaxCgCoefficient; 0 when |curr| < 1e-300.
double cg_coefficient(const CVector& grad_next, const CVector& grad_curr);

/// PR+: max(Re{next^H (next - transported_curr)} / |curr|^2, 0), same clamp.
double polak_ribiere_coefficient(const CVector& grad_next, const CVector& transported_curr,
                                 const CVector& grad_curr);

inline constexpr double kMaxCgCoefficient = 10.0;

/// Secant minimizer -eta_prev * s0 / (s1 - s0) of a 1-D slice from its slopes at
/// 0 and eta_prev. Empty when the denominator is below 1e-18 in magnitude.
std::optional<double> secant_estimate(double slope0, double slope_probe, double eta_prev);

struct StepSize {
  double eta = 0.0;            // 0 signals stagnation
  bool used_fallback = false;  // Armijo backtracking was needed
};

/// Step along the retracted curve t -> unt(q + t dir). The secant estimate is
/// kept when finite, positive, at most 1e3 * eta_prev, keeps g > 0 and passes
/// the Armijo test; otherwise backtracks from eta_prev (factor 0.5, c = 1e-4,
/// at most 30 halvings). Returns eta = 0 for a zero or non-descent direction
/// and when backtracking is exhausted.
StepSize secant_step_size(const QuadraticForm& qf, const PhaseVector& q, const CVector& dir,
                          double eta_prev);

/// unt(q + eta mu); an entry that cancels to zero keeps q's phase.
PhaseVector retract(const PhaseVector& q, double eta, const CVector& mu);

/// Uniform random phases from the given generator.
PhaseVector random_phases(Eigen::Index length, CounterRng& rng);

struct SolveTrace {
  std::vector<double> objective;  // g per iterate, index 0 is the start point
  std::vector<double> grad_norm;  // Riemannian gradient norms (OM only)
  int iterations = 0;
  bool converged = false;
  bool failed = false;
  int restarts = 0;
  int step_fallbacks = 0;
  double wall_time_s = 0.0;
  std::string diagnostic;
};

struct SolveResult {
  PhaseVector q;
  SolveTrace trace;
};

struct OmOptions {
  double tol = 1e-4;
  int max_iter = 2000;
  double eta0 = 0.3;
  CgRule cg_rule = CgRule::kPaper;
  /// Seeds replacement start points when g(q0) is at the pole (<= 1e-12).
  std::uint64_t restart_seed = 0;
  int max_restarts = 5;
};

/// Riemannian conjugate gradient on the complex circle manifold minimizing
/// f = 1/g. Stops once the Riemannian gradient norm is <= tol. Returns the
/// best iterate by g.
SolveResult om_solve(const QuadraticForm& qf, const PhaseVector& q0, const OmOptions& options = {});

/// beta = (lam I - A) q_k + b.
CVector mm_beta(const QuadraticForm& qf, const PhaseVector& q_k, double lam);

/// Entrywise e^{j arg beta_i}; entries with |beta_i| < 1e-300 keep q_prev.
PhaseVector mm_step(const CVector& beta, const PhaseVector& q_prev);

/// Surrogate 2 L lam - 2Re{q^H beta(q_k)} - q_k^H A q_k. It upper-bounds the
/// minimization objective q^H A q - 2Re{q^H b} and touches it at q = q_k.
double mm_surrogate(const QuadraticForm& qf, const PhaseVector& q, const PhaseVector& q_k,
                    double lam);

struct MmOptions {
  double tol = 1e-6;
  int max_iter = 2000;
  std::optional<double> lambda;  // lambda_max(A) if already known
};

/// Closed-form minorization-maximization iterations; g is non-decreasing.
/// Stops when |g_{k+1} - g_k| <= tol * max(1, |g_k|).
SolveResult mm_solve(const QuadraticForm& qf, const PhaseVector& q0, const MmOptions& options = {});

struct GridResult {
  PhaseVector q;
  double value = 0.0;
};

/// Exhaustive search of g over phases 2 pi k / resolution per element (L <= 3).
GridResult grid_oracle(const QuadraticForm& qf, int resolution);

}  // namespace irsec
