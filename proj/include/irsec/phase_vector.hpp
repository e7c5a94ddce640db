#pragma once

#include "irsec/numerics.hpp"

namespace irsec {

/// IRS phase configuration q (length L, every entry unit modulus).
///
/// Q = diag(conj(q)), i.e. element i applies e^{j theta_i} with
/// q_i = e^{-j theta_i}. With this convention the cascaded channel reads
/// h_B = H_AI^H diag(h_IB) q + h_AB.
class PhaseVector {
 public:
  static constexpr double kModulusTolerance = 1e-12;

  PhaseVector() = default;
  /// Throws if any |q_i| deviates from 1 by more than kModulusTolerance.
  explicit PhaseVector(CVector q);

  /// Builds q_i = e^{-j theta_i} from per-element IRS phase shifts.
  static PhaseVector from_phase_shifts(const Eigen::VectorXd& theta);

  const CVector& values() const { return q_; }
  Eigen::Index size() const { return q_.size(); }
  Complex operator()(Eigen::Index i) const { return q_(i); }

 private:
  CVector q_;
};

}  // namespace irsec
