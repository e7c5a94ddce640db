#include "irsec/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace irsec {

HermitianMatrix::HermitianMatrix(CMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    std::ostringstream msg;
    msg << "HermitianMatrix: expected a square matrix, got " << entries_.rows() << "x"
        << entries_.cols();
    throw Error(msg.str());
  }
  for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
    for (Eigen::Index j = i; j < entries_.cols(); ++j) {
      const double asym = std::abs(entries_(i, j) - std::conj(entries_(j, i)));
      if (asym > kSymmetryTolerance) {
        std::ostringstream msg;
        msg << "HermitianMatrix: symmetry violated at (" << i << ", " << j << ") by " << asym;
        throw Error(msg.str());
      }
    }
  }
}

double lambda_max(const HermitianMatrix& m, const PowerIterationOptions& options) {
  const CMatrix& a = m.entries();
  const Eigen::Index n = a.rows();
  if (n == 0) throw Error("lambda_max: empty matrix");
  if (n == 1) return a(0, 0).real();

  const double shift = a.cwiseAbs().rowwise().sum().maxCoeff();
  if (shift == 0.0) return 0.0;

  // Fixed, non-symmetric start vector so the dominant eigenspace is hit for
  // any input of practical interest.
  CVector x(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = static_cast<double>(i + 1);
    x(i) = Complex(1.0 + 0.5 * std::sin(1.7 * t), 0.3 * std::cos(2.3 * t));
  }
  x.normalize();

  double rayleigh = 0.0;
  CVector y(n);
  for (int it = 0; it < options.max_iterations; ++it) {
    y.noalias() = a * x;
    y += shift * x;
    const double next = x.dot(y).real();
    const double norm = y.norm();
    if (norm == 0.0) break;
    x = y / norm;
    if (it > 0 && std::abs(next - rayleigh) <= options.tolerance * shift) {
      rayleigh = next;
      break;
    }
    rayleigh = next;
  }
  return rayleigh - shift;
}

CMatrix rank1_nullspace_basis(const CVector& h) {
  const Eigen::Index n = h.size();
  if (n < 2) throw Error("rank1_nullspace_basis: need n >= 2 for a non-empty null space");
  const double norm = h.norm();
  if (norm == 0.0) throw Error("rank1_nullspace_basis: h is the zero vector");

  // Unitary reflector H = I - 2 v v^H / (v^H v) with H u = -e^{i arg u_0} e_1,
  // u = h/|h|. Columns 2..n of H are orthonormal and orthogonal to u.
  const CVector u = h / norm;
  const double abs0 = std::abs(u(0));
  const Complex phase = abs0 > 0.0 ? u(0) / abs0 : Complex(1.0, 0.0);
  CVector v = u;
  v(0) += phase;
  const double vv = v.squaredNorm();
  CMatrix basis = -2.0 / vv * v * v.tail(n - 1).adjoint();
  basis.bottomRows(n - 1).diagonal().array() += 1.0;
  return basis;
}

CVector unit_normalize(const CVector& v) {
  CVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double r = std::abs(v(i));
    if (r < 1e-300) {
      std::ostringstream msg;
      msg << "unit_normalize: zero-modulus entry at index " << i;
      throw Error(msg.str());
    }
    out(i) = v(i) / r;
  }
  return out;
}

}  // namespace irsec
