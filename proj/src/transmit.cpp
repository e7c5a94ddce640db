#include "irsec/transmit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace irsec {

Beamformer min_power_and_beamformer(const CVector& h_b, double gamma_lin, double noise_bob_w) {
  if (!(gamma_lin > 0.0)) throw Error("min_power_and_beamformer: gamma must be > 0");
  const double gain = h_b.squaredNorm();
  if (gain == 0.0) {
    return {CVector::Zero(h_b.size()), std::numeric_limits<double>::infinity(), false};
  }
  const double p_signal = gamma_lin * noise_bob_w / gain;
  return {std::sqrt(p_signal) * h_b / std::sqrt(gain), p_signal, true};
}

CMatrix an_covariance(const CVector& h_b, double p_jam_w) {
  if (p_jam_w < 0.0) throw Error("an_covariance: negative jamming power");
  const Eigen::Index n = h_b.size();
  if (n < 2) throw Error("an_covariance: need at least 2 transmit antennas");
  if (p_jam_w == 0.0) return CMatrix::Zero(n, n);
  const CMatrix u = rank1_nullspace_basis(h_b);
  return p_jam_w / static_cast<double>(n - 1) * u * u.adjoint();
}

RateReport secrecy_rate(const CVector& h_b, const CVector& h_e, const TransmitDesign& design,
                        double noise_bob_w, double noise_eve_w) {
  if (!(noise_bob_w > 0.0) || !(noise_eve_w > 0.0)) {
    throw Error("secrecy_rate: noise powers must be > 0");
  }
  const auto sinr = [&](const CVector& h, double noise) {
    const double signal = std::norm(h.dot(design.w));
    // h^H R h is real and >= 0 for PSD R; clamp rounding below zero.
    const double jam = std::max(0.0, h.dot(design.r_an * h).real());
    return signal / (noise + jam);
  };
  RateReport r;
  r.sinr_bob = sinr(h_b, noise_bob_w);
  r.sinr_eve = sinr(h_e, noise_eve_w);
  r.rate_bob = std::log2(1.0 + r.sinr_bob);
  r.rate_eve = std::log2(1.0 + r.sinr_eve);
  r.secrecy_rate = std::max(0.0, r.rate_bob - r.rate_eve);
  return r;
}

std::pair<TransmitDesign, RateReport> design_for_channels(const CVector& h_b, const CVector& h_e,
                                                          const ScenarioConfig& cfg) {
  const double p_total = cfg.p_total_w();
  const Eigen::Index n = h_b.size();
  const Beamformer bf = min_power_and_beamformer(h_b, cfg.qos_linear(), cfg.noise_bob_w());

  TransmitDesign design;
  design.p_signal = bf.p_signal;
  if (!bf.feasible || bf.p_signal > p_total) {
    design.w = CVector::Zero(n);
    design.r_an = CMatrix::Zero(n, n);
    return {std::move(design), RateReport{}};
  }
  design.feasible = true;
  design.w = bf.w;
  design.p_jam = p_total - bf.p_signal;
  design.r_an = an_covariance(h_b, design.p_jam);
  RateReport report = secrecy_rate(h_b, h_e, design, cfg.noise_bob_w(), cfg.noise_eve_w());
  return {std::move(design), report};
}

std::pair<TransmitDesign, RateReport> design_transmission(const ChannelSet& cs,
                                                          const PhaseVector& q,
                                                          const ScenarioConfig& cfg) {
  return design_for_channels(effective_bob_channel(cs, q), effective_eve_channel(cs, q), cfg);
}

}  // namespace irsec
