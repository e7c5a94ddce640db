#pragma once

#include <utility>

#include "irsec/channel.hpp"
#include "irsec/numerics.hpp"
#include "irsec/phase_vector.hpp"
#include "irsec/scenario.hpp"

namespace irsec {

/// Beamformer, AN covariance and power split. Powers in watts.
struct TransmitDesign {
  CVector w;
  CMatrix r_an;
  double p_signal = 0.0;
  double p_jam = 0.0;
  bool feasible = false;
};

/// Rates in bits per channel use.
struct RateReport {
  double rate_bob = 0.0;
  double rate_eve = 0.0;
  double secrecy_rate = 0.0;
  double sinr_bob = 0.0;
  double sinr_eve = 0.0;
};

struct Beamformer {
  CVector w;
  double p_signal = 0.0;
  bool feasible = false;  // false only for h_B = 0
};

/// MRT at the minimum power meeting the QoS with equality:
/// P_T = gamma sigma_b^2 / |h_B|^2, w = sqrt(P_T) h_B / |h_B|.
Beamformer min_power_and_beamformer(const CVector& h_b, double gamma_lin, double noise_bob_w);

/// Isotropic AN over the null space of h_B: (p_jam / (N_t - 1)) U U^H.
CMatrix an_covariance(const CVector& h_b, double p_jam_w);

/// Secrecy rate [log2(1 + SINR_B) - log2(1 + SINR_E)]^+ with AN treated as noise.
RateReport secrecy_rate(const CVector& h_b, const CVector& h_e, const TransmitDesign& design,
                        double noise_bob_w, double noise_eve_w);

/// Full design for given effective channels. Infeasible (P_T > P_A or h_B = 0)
/// yields feasible = false and an all-zero report.
std::pair<TransmitDesign, RateReport> design_for_channels(const CVector& h_b, const CVector& h_e,
                                                          const ScenarioConfig& cfg);

/// Effective channels for phases q, then design_for_channels.
std::pair<TransmitDesign, RateReport> design_transmission(const ChannelSet& cs,
                                                          const PhaseVector& q,
                                                          const ScenarioConfig& cfg);

}  // namespace irsec
