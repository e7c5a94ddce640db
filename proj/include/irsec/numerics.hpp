#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace irsec {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Raised for contract violations on inputs (bad shapes, singular inputs,
/// malformed configs). Carries a human-readable diagnostic.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Square complex matrix checked for Hermitian symmetry on construction.
class HermitianMatrix {
 public:
  /// Maximum |M(i,j) - conj(M(j,i))| accepted before the input is rejected.
  static constexpr double kSymmetryTolerance = 1e-9;

  HermitianMatrix() = default;
  explicit HermitianMatrix(CMatrix entries);

  const CMatrix& entries() const { return entries_; }
  Eigen::Index size() const { return entries_.rows(); }

 private:
  CMatrix entries_;
};

struct PowerIterationOptions {
  double tolerance = 1e-12;
  int max_iterations = 10000;
};

/// Largest eigenvalue of a Hermitian matrix by shifted power iteration.
///
/// The matrix is shifted by its infinity norm so every eigenvalue of the
/// shifted operator is non-negative and the wanted one is dominant. The
/// iteration stops once successive Rayleigh quotients agree to
/// `tolerance` relative to the shift. Start vector is fixed, so the result
/// is deterministic for a given matrix.
double lambda_max(const HermitianMatrix& m, const PowerIterationOptions& options = {});

/// Orthonormal basis (n x (n-1)) of the orthogonal complement of h, taken
/// from the columns 2..n of the Householder reflector sending h/|h| to e_1.
CMatrix rank1_nullspace_basis(const CVector& h);

/// Entrywise v_i / |v_i|. Throws on any entry with modulus below 1e-300.
CVector unit_normalize(const CVector& v);

/// Real inner product Re{x^H y}.
inline double real_inner(const CVector& x, const CVector& y) { return x.dot(y).real(); }

}  // namespace irsec
