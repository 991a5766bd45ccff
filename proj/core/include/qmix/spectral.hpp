#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace qmix {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

/// Eigen-decomposition of a real symmetric matrix.
///
/// `values` ascend; column i of `vectors` is the unit eigenvector of
/// `values(i)`, oriented so that its largest-magnitude entry is positive.
struct SpectralDecomposition {
  Vector values;
  Matrix vectors;

  Eigen::Index size() const noexcept { return values.size(); }
  /// Overlaps <v_i|psi> for every eigenvector.
  Vector coefficients(const Vector& psi) const { return vectors.transpose() * psi; }
};

/// Energies and complex eigenmodes of a Hermitian operator.
struct ModeSpectrum {
  Vector energies;
  CMatrix modes;

  Eigen::Index size() const noexcept { return energies.size(); }
  CVector coefficients(const CVector& psi) const { return modes.adjoint() * psi; }
};

/// Symmetric eigensolve. Throws ValidationError if `m` is not square.
SpectralDecomposition eigh(const Matrix& m);

/// Largest |a_ij - a_ji|.
double asymmetry(const Matrix& m);

/// Groups indices of an ascending sequence whose neighbours differ by at most `tol`.
std::vector<std::vector<Eigen::Index>> degeneracy_groups(const Vector& ascending, double tol);

/// Default grouping tolerance: relative_degeneracy_tol * (max - min), floored at 1e-300.
double default_degeneracy_tol(const Vector& ascending);

}  // namespace qmix
