#pragma once

#include "qmix/spectral.hpp"

namespace qmix {

/// Pointer register sizing for one energy-filtering block.
struct PointerConfig {
  int l = 1;                // qubits per block
  int blocks = 1;           // repetitions
  double tau = 0.0;         // evolution time per block
  double gap = 0.0;         // smallest nonzero |E| to be rejected
  double eps_prime = 0.0;   // residual amplitude target

  /// l = ceil(log2(1/gap)) + 1, raised until 2^l gap >= 2; blocks = ceil(log2(1/eps_prime)); tau = 2 pi / gap.
  static PointerConfig for_gap(double gap, double eps_prime);
  /// Same, but with an explicit qubit count.
  static PointerConfig with_qubits(int l, double gap, double eps_prime);

  long long levels() const noexcept { return 1LL << l; }
  long long total_qubits() const noexcept { return static_cast<long long>(l) * blocks; }
  double total_time() const noexcept { return tau * blocks; }
};

/// (1/N) sum_{q<N} exp(-i E tau q / N), N = 2^l.
Complex pointer_zero_amplitude(double energy, double tau, int l);

/// System (any dimension) tensor one pointer block, pointer in the position basis.
/// Index layout: system * levels + position.
struct CompositeState {
  Eigen::Index system_dim = 0;
  Eigen::Index pointer_dim = 0;
  CVector amplitudes;

  Complex amplitude(Eigen::Index sys, Eigen::Index pos) const { return amplitudes(sys * pointer_dim + pos); }
  /// Unnormalised system vector at pointer position `pos`.
  CVector slice(Eigen::Index pos) const;
  static CompositeState product_at_zero(const CVector& system, int l);
};

/// One coupling block exp(-i H (x) p tau) in the position basis. Momentum
/// level q carries p = q / 2^l; position amplitudes are
/// psi_x = 2^{-l/2} sum_q exp(+2 pi i x q / 2^l) m_q.
CompositeState evolve_block(const ModeSpectrum& h, const CompositeState& state, const PointerConfig& cfg);

struct PostselectResult {
  CVector state;
  double success_prob = 0.0;
  Vector mode_factors;   // |gamma_j|^blocks
};

/// Repeated blocks with pointer-zero post-selection, applied mode by mode.
/// Throws DegenerateError if the success probability falls below the policy floor.
PostselectResult run_blocks_postselect(const ModeSpectrum& h, const CVector& psi0, const PointerConfig& cfg);
PostselectResult run_blocks_postselect(const SpectralDecomposition& h, const Vector& psi0, const PointerConfig& cfg);

}  // namespace qmix
