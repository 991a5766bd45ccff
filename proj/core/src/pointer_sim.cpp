#include "qmix/pointer_sim.hpp"

#include "qmix/errors.hpp"
#include "qmix/numeric_policy.hpp"

#include <cmath>
#include <numbers>

namespace qmix {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_eps(double gap, double eps_prime) {
  if (!(gap > 0.0) || !std::isfinite(gap)) throw ValidationError("pointer gap must be positive");
  if (!(eps_prime > 0.0 && eps_prime < 1.0)) throw ValidationError("pointer eps' must lie in (0,1)");
}

int blocks_for(double eps_prime) { return std::max(1, static_cast<int>(std::ceil(std::log2(1.0 / eps_prime)))); }

}  // namespace

PointerConfig PointerConfig::for_gap(double gap, double eps_prime) {
  check_eps(gap, eps_prime);
  int l = static_cast<int>(std::ceil(std::log2(1.0 / gap))) + 1;
  l = std::max(l, 1);
  while (std::ldexp(gap, l) < 2.0) ++l;
  return with_qubits(l, gap, eps_prime);
}

PointerConfig PointerConfig::with_qubits(int l, double gap, double eps_prime) {
  check_eps(gap, eps_prime);
  if (l < 1 || l > 40) throw ValidationError("pointer qubits per block must lie in [1,40]");
  PointerConfig c;
  c.l = l;
  c.gap = gap;
  c.eps_prime = eps_prime;
  c.tau = kTwoPi / gap;
  c.blocks = blocks_for(eps_prime);
  return c;
}

Complex pointer_zero_amplitude(double energy, double tau, int l) {
  if (l < 1) throw ValidationError("pointer_zero_amplitude: l must be >= 1");
  if (!(tau > 0.0)) throw ValidationError("pointer_zero_amplitude: tau must be positive");
  const double n = std::ldexp(1.0, l);
  const double y = energy * tau / n;  // phase per momentum level
  const double k = std::nearbyint(y / kTwoPi);
  const double delta = y - kTwoPi * k;
  if (std::abs(delta) < 1e-8) {
    // Every term has phase -i delta q; expand to third order.
    const double s1 = n * (n - 1.0) / 2.0;
    const double s2 = (n - 1.0) * n * (2.0 * n - 1.0) / 6.0;
    const double s3 = s1 * s1;
    const Complex sum(n - delta * delta * s2 / 2.0, -delta * s1 + delta * delta * delta * s3 / 6.0);
    return sum / n;
  }
  const double ratio = std::sin(n * y / 2.0) / std::sin(y / 2.0);
  return std::polar(ratio / n, -y * (n - 1.0) / 2.0);
}

CVector CompositeState::slice(Eigen::Index pos) const {
  CVector out(system_dim);
  for (Eigen::Index s = 0; s < system_dim; ++s) out(s) = amplitude(s, pos);
  return out;
}

CompositeState CompositeState::product_at_zero(const CVector& system, int l) {
  if (l < 1 || l > 20) throw ValidationError("composite pointer needs 1 <= l <= 20");
  CompositeState c;
  c.system_dim = system.size();
  c.pointer_dim = 1LL << l;
  c.amplitudes = CVector::Zero(c.system_dim * c.pointer_dim);
  for (Eigen::Index s = 0; s < c.system_dim; ++s) c.amplitudes(s * c.pointer_dim) = system(s);
  return c;
}

CompositeState evolve_block(const ModeSpectrum& h, const CompositeState& state, const PointerConfig& cfg) {
  const Eigen::Index d = h.size();
  const Eigen::Index np = state.pointer_dim;
  if (h.modes.rows() != state.system_dim || h.modes.cols() != d)
    throw ValidationError("evolve_block: Hamiltonian and state system dimensions differ");
  if (np != cfg.levels() || state.amplitudes.size() != state.system_dim * np)
    throw ValidationError("evolve_block: pointer dimension does not match 2^l");

  // Fourier kernel F(x,q) = exp(+2 pi i x q / N) / sqrt(N).
  CMatrix fourier(np, np);
  const double norm = 1.0 / std::sqrt(static_cast<double>(np));
  for (Eigen::Index x = 0; x < np; ++x)
    for (Eigen::Index q = 0; q < np; ++q)
      fourier(x, q) = std::polar(norm, kTwoPi * static_cast<double>((x * q) % np) / static_cast<double>(np));

  // Rows: eigenmodes; columns: pointer positions.
  CMatrix grid(state.system_dim, np);
  for (Eigen::Index s = 0; s < state.system_dim; ++s)
    for (Eigen::Index x = 0; x < np; ++x) grid(s, x) = state.amplitude(s, x);
  CMatrix modal = h.modes.adjoint() * grid;
  CMatrix momentum = modal * fourier.conjugate();  // m_q = sum_x conj(F(x,q)) psi_x
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index q = 0; q < np; ++q) {
      const double phase = -h.energies(j) * cfg.tau * static_cast<double>(q) / static_cast<double>(np);
      momentum(j, q) *= std::polar(1.0, phase);
    }
  }
  const CMatrix out_grid = h.modes * (momentum * fourier.transpose());
  CompositeState out = state;
  for (Eigen::Index s = 0; s < state.system_dim; ++s)
    for (Eigen::Index x = 0; x < np; ++x) out.amplitudes(s * np + x) = out_grid(s, x);
  return out;
}

PostselectResult run_blocks_postselect(const ModeSpectrum& h, const CVector& psi0, const PointerConfig& cfg) {
  if (cfg.blocks < 1) throw ValidationError("run_blocks_postselect needs at least one block");
  if (psi0.size() != h.modes.rows()) throw ValidationError("run_blocks_postselect: state dimension mismatch");
  CVector c = h.coefficients(psi0);
  PostselectResult r;
  r.mode_factors.resize(h.size());
  for (Eigen::Index j = 0; j < h.size(); ++j) {
    const Complex g = std::pow(pointer_zero_amplitude(h.energies(j), cfg.tau, cfg.l), cfg.blocks);
    r.mode_factors(j) = std::abs(g);
    c(j) *= g;
  }
  const CVector phi = h.modes * c;
  r.success_prob = phi.squaredNorm();
  if (!(r.success_prob >= numeric_policy().min_postselect_prob))
    throw DegenerateError("post-selection probability vanishes: initial state has no weight on the zero mode");
  r.state = phi / std::sqrt(r.success_prob);
  return r;
}

PostselectResult run_blocks_postselect(const SpectralDecomposition& h, const Vector& psi0, const PointerConfig& cfg) {
  return run_blocks_postselect(ModeSpectrum{h.values, h.vectors.cast<Complex>()}, CVector(psi0.cast<Complex>()), cfg);
}

}  // namespace qmix
