#pragma once

#include "qmix/markov.hpp"
#include "qmix/spectral.hpp"

namespace qmix {

/// Edge-walk Hamiltonian restricted to its invariant subspace.
///
/// Coordinates: for k < n-1, index 2k is |v_k,0> and 2k+1 is its partner
/// |v_k,0>perp (the normalised part of V^T S V |v_k,0> orthogonal to the
/// reference sector); index 2n-2 is |v_top,0>. Within each pair the operator
/// is [[0, -i mu_k], [i mu_k, 0]] with mu_k = sqrt(1 - lambda_k^2).
struct EdgeWalkHamiltonian {
  Eigen::Index n = 0;
  Vector lambdas;        // ascending, lambdas(n-1) is the top eigenvalue
  Matrix eigvecs;        // columns v_k of the discriminant
  Vector mu;             // mu(k) for k < n-1
  double gap = 0.0;      // mu(n-2)
  int clamped = 0;       // eigenvalues pulled back onto [-1, 1]

  Eigen::Index dim() const noexcept { return 2 * n - 1; }
  static Eigen::Index a_index(Eigen::Index k) noexcept { return 2 * k; }
  static Eigen::Index b_index(Eigen::Index k) noexcept { return 2 * k + 1; }
  Eigen::Index top_index() const noexcept { return 2 * n - 2; }

  /// All 2n-1 energies, ascending.
  Vector energies() const;
  /// Eigenmodes in the effective coordinates; energies ascending.
  ModeSpectrum mode_spectrum() const;
  /// Dense effective operator.
  CMatrix matrix() const;
  /// |psi,0> in effective coordinates.
  CVector embed(const CVector& system) const;
  CVector embed(const Vector& system) const { return embed(CVector(system.cast<Complex>())); }
  /// <x,0|phi> for every node x.
  CVector reference_sector(const CVector& effective) const;
  /// Weight outside the reference sector.
  double perp_weight(const CVector& effective) const;
};

/// Throws DegenerateError if the top eigenvalue is not simple, ValidationError
/// if some eigenvalue leaves [-1, 1] by more than the clamp tolerance.
EdgeWalkHamiltonian build_effective(const Discriminant& d);

/// Dense n^2-dimensional construction: states |x,y> at index x*n + y.
struct FullHamiltonian {
  Eigen::Index n = 0;
  Matrix isometry;      // V, block diagonal, V|x,0> = sum_y sqrt(p_xy)|x,y>
  Matrix swap;          // S
  Matrix reflection;    // V^T S V
  Matrix generator;     // K with H = iK, real antisymmetric
  double completion_residual = 0.0;

  Eigen::Index dim() const noexcept { return n * n; }
  CMatrix matrix() const;
  /// Hermitian eigensolve of iK.
  ModeSpectrum spectrum() const;
  CVector embed(const CVector& system) const;
  CVector reference_sector(const CVector& full) const;
  /// Map effective coordinates of `eff` into the full space.
  CVector from_effective(const EdgeWalkHamiltonian& eff, const CVector& coords) const;
};

/// Guards n <= max_n.
FullHamiltonian build_full(const InterpolatedChain& chain, Eigen::Index max_n = 12);

}  // namespace qmix
