#pragma once

#include <string>

namespace irsec {

/// Conjugate-gradient coefficient rule for the manifold solver.
enum class CgRule {
  kPaper,         ///< norm ratio |grad_{i+1}|^2 / |grad_i|^2, clamped to [0, 10]
  kPolakRibiere,  ///< PR+: Re{g+^H (g+ - T(g))} / |g|^2, clamped to [0, 10]
};

std::string to_string(CgRule rule);
CgRule parse_cg_rule(const std::string& name);

struct SolverSettings {
  double om_tol = 1e-4;  // Riemannian gradient norm, normalized problem
  double mm_tol = 1e-6;  // |g_{k+1} - g_k| <= mm_tol * max(1, |g_k|)
  int max_iter = 2000;
  double eta0 = 0.3;
  CgRule cg_rule = CgRule::kPaper;
};

/// Physical scenario plus solver settings. Powers in dBm, gains in dB,
/// distances in metres; converted to linear units at use sites.
/// Defaults are the reference scenario (5 antennas, 50 elements, 5 dBm).
struct ScenarioConfig {
  int n_tx = 5;
  int n_irs = 50;
  double p_total_dbm = 5.0;
  double noise_bob_dbm = -90.0;
  double noise_eve_dbm = -90.0;
  double qos_db = 10.0;
  double pl0_db = -30.0;
  double d0_m = 1.0;

  double rho_ai = 2.0;
  double rho_ib = 2.5;
  double rho_ie = 2.5;
  double rho_ab = 3.0;
  double rho_ae = 3.0;

  double d_ai = 50.0;
  double d_ib = 6.0;
  double d_ie = 7.0;
  double d_ab = 48.0;
  double d_ae = 45.0;

  SolverSettings solver;

  /// Throws irsec::Error naming the offending field.
  void validate() const;

  double p_total_w() const;
  double noise_bob_w() const;
  double noise_eve_w() const;
  double qos_linear() const;
};

}  // namespace irsec
