#include "irsec/channel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace irsec {

namespace {

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

// Stream identifiers for the per-link draws of one realization.
enum Link : std::uint64_t { kAliceIrs = 1, kIrsBob, kIrsEve, kAliceBob, kAliceEve };

void require_positive(const char* field, double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << "invalid config: " << field << " must be finite and > 0 (got " << value << ")";
    throw Error(msg.str());
  }
}

void require_non_negative(const char* field, double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << "invalid config: " << field << " must be finite and >= 0 (got " << value << ")";
    throw Error(msg.str());
  }
}

void require_finite(const char* field, double value) {
  if (!std::isfinite(value)) {
    std::ostringstream msg;
    msg << "invalid config: " << field << " must be finite";
    throw Error(msg.str());
  }
}

double link_gain(const ScenarioConfig& cfg, double d, double rho) {
  return db_to_linear(path_loss_db(d, rho, cfg.pl0_db, cfg.d0_m));
}

CVector draw_vector(CounterRng& rng, Eigen::Index n, double variance) {
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.complex_normal(variance);
  return v;
}

void check_phase_length(const ChannelSet& cs, const PhaseVector& q) {
  if (q.size() != cs.n_irs() || cs.h_ai.rows() != cs.n_irs() || cs.h_ai.cols() != cs.n_tx()) {
    std::ostringstream msg;
    msg << "effective channel: dimension mismatch (L = " << cs.n_irs() << ", q has " << q.size()
        << " entries, H_AI is " << cs.h_ai.rows() << "x" << cs.h_ai.cols() << ")";
    throw Error(msg.str());
  }
}

}  // namespace

PhaseVector::PhaseVector(CVector q) : q_(std::move(q)) {
  for (Eigen::Index i = 0; i < q_.size(); ++i) {
    if (std::abs(std::abs(q_(i)) - 1.0) > kModulusTolerance) {
      std::ostringstream msg;
      msg << "PhaseVector: entry " << i << " has modulus " << std::abs(q_(i));
      throw Error(msg.str());
    }
  }
}

PhaseVector PhaseVector::from_phase_shifts(const Eigen::VectorXd& theta) {
  CVector q(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) q(i) = std::polar(1.0, -theta(i));
  return PhaseVector(std::move(q));
}

std::string to_string(CgRule rule) {
  switch (rule) {
    case CgRule::kPaper:
      return "paper";
    case CgRule::kPolakRibiere:
      return "polak_ribiere";
  }
  return "unknown";
}

CgRule parse_cg_rule(const std::string& name) {
  if (name == "paper") return CgRule::kPaper;
  if (name == "polak_ribiere") return CgRule::kPolakRibiere;
  throw Error("invalid config: cg_rule must be 'paper' or 'polak_ribiere' (got '" + name + "')");
}

void ScenarioConfig::validate() const {
  if (n_tx < 2) throw Error("invalid config: n_tx must be >= 2 (artificial noise needs a null space)");
  if (n_irs < 1) throw Error("invalid config: n_irs must be >= 1");
  require_finite("p_total_dbm", p_total_dbm);
  require_finite("noise_bob_dbm", noise_bob_dbm);
  require_finite("noise_eve_dbm", noise_eve_dbm);
  require_finite("qos_db", qos_db);
  require_finite("pl0_db", pl0_db);
  require_positive("d0_m", d0_m);
  require_non_negative("rho_ai", rho_ai);
  require_non_negative("rho_ib", rho_ib);
  require_non_negative("rho_ie", rho_ie);
  require_non_negative("rho_ab", rho_ab);
  require_non_negative("rho_ae", rho_ae);
  require_positive("d_ai", d_ai);
  require_positive("d_ib", d_ib);
  require_positive("d_ie", d_ie);
  require_positive("d_ab", d_ab);
  require_positive("d_ae", d_ae);
  require_positive("om_tol", solver.om_tol);
  require_non_negative("mm_tol", solver.mm_tol);
  require_positive("eta0", solver.eta0);
  if (solver.max_iter < 1) throw Error("invalid config: max_iter must be >= 1");
}

double ScenarioConfig::p_total_w() const { return dbm_to_watt(p_total_dbm); }
double ScenarioConfig::noise_bob_w() const { return dbm_to_watt(noise_bob_dbm); }
double ScenarioConfig::noise_eve_w() const { return dbm_to_watt(noise_eve_dbm); }
double ScenarioConfig::qos_linear() const { return db_to_linear(qos_db); }

std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(mix64(seed + kGoldenGamma) ^ (index * kGoldenGamma + 0x632BE59BD9B4E019ULL));
}

CounterRng::result_type CounterRng::operator()() {
  ++counter_;
  return mix64(key_ + counter_ * kGoldenGamma);
}

double CounterRng::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

Complex CounterRng::complex_normal(double variance) {
  // 1 - u is in (0, 1], so the log is finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-variance * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

double path_loss_db(double d_m, double rho, double pl0_db, double d0_m) {
  if (!(d_m > 0.0)) throw Error("path_loss_db: distance must be > 0");
  if (!(d0_m > 0.0)) throw Error("path_loss_db: reference distance must be > 0");
  return pl0_db - 10.0 * rho * std::log10(d_m / d0_m);
}

ChannelSet generate_channels(const ScenarioConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const Eigen::Index nt = cfg.n_tx;
  const Eigen::Index l = cfg.n_irs;

  ChannelSet cs;
  cs.seed = seed;

  CounterRng ai(derive_seed(seed, kAliceIrs));
  const double g_ai = link_gain(cfg, cfg.d_ai, cfg.rho_ai);
  cs.h_ai.resize(l, nt);
  for (Eigen::Index r = 0; r < l; ++r) {
    for (Eigen::Index c = 0; c < nt; ++c) cs.h_ai(r, c) = ai.complex_normal(g_ai);
  }

  CounterRng ib(derive_seed(seed, kIrsBob));
  cs.h_ib = draw_vector(ib, l, link_gain(cfg, cfg.d_ib, cfg.rho_ib));
  CounterRng ie(derive_seed(seed, kIrsEve));
  cs.h_ie = draw_vector(ie, l, link_gain(cfg, cfg.d_ie, cfg.rho_ie));
  CounterRng ab(derive_seed(seed, kAliceBob));
  cs.h_ab = draw_vector(ab, nt, link_gain(cfg, cfg.d_ab, cfg.rho_ab));
  CounterRng ae(derive_seed(seed, kAliceEve));
  cs.h_ae = draw_vector(ae, nt, link_gain(cfg, cfg.d_ae, cfg.rho_ae));
  return cs;
}

CVector effective_bob_channel(const ChannelSet& cs, const PhaseVector& q) {
  check_phase_length(cs, q);
  return cs.h_ai.adjoint() * cs.h_ib.cwiseProduct(q.values()) + cs.h_ab;
}

CVector effective_eve_channel(const ChannelSet& cs, const PhaseVector& q) {
  check_phase_length(cs, q);
  if (cs.h_ae.size() != cs.n_tx()) throw Error("effective_eve_channel: dimension mismatch");
  return cs.h_ai.adjoint() * cs.h_ie.cwiseProduct(q.values()) + cs.h_ae;
}

}  // namespace irsec
