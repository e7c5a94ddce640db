#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#include "irsec/numerics.hpp"
#include "irsec/phase_vector.hpp"
#include "irsec/scenario.hpp"

namespace irsec {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Sub-seed for stream `index` of `seed`; chainable for hierarchical
/// derivation, e.g. derive_seed(derive_seed(master, value_idx), trial_idx).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Counter-based generator: output k is mix64(key + (k+1) * golden gamma).
/// Satisfies UniformRandomBitGenerator; copying it forks the stream.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Circularly-symmetric complex Gaussian CN(0, variance) via Box-Muller.
  Complex complex_normal(double variance);

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// PL_0 - 10 rho log10(d / d0), in dB. Throws on d <= 0 or d0 <= 0.
double path_loss_db(double d_m, double rho, double pl0_db, double d0_m);

inline double db_to_linear(double x_db) { return std::pow(10.0, x_db / 10.0); }
inline double dbm_to_watt(double p_dbm) { return std::pow(10.0, (p_dbm - 30.0) / 10.0); }

/// One realization of the five links.
struct ChannelSet {
  CMatrix h_ai;  // L x N_t, Alice -> IRS
  CVector h_ib;  // L,       IRS -> Bob
  CVector h_ie;  // L,       IRS -> Eve
  CVector h_ab;  // N_t,     Alice -> Bob
  CVector h_ae;  // N_t,     Alice -> Eve
  std::uint64_t seed = 0;

  Eigen::Index n_tx() const { return h_ab.size(); }
  Eigen::Index n_irs() const { return h_ib.size(); }
};

/// Rayleigh fading with per-link path-loss variance; pure in (cfg, seed).
ChannelSet generate_channels(const ScenarioConfig& cfg, std::uint64_t seed);

/// h_B with h_B^H = h_IB^H Q H_AI + h_AB^H, Q = diag(conj(q)).
CVector effective_bob_channel(const ChannelSet& cs, const PhaseVector& q);
/// h_E with h_E^H = h_IE^H Q H_AI + h_AE^H.
CVector effective_eve_channel(const ChannelSet& cs, const PhaseVector& q);

}  // namespace irsec
