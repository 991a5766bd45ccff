#include <gtest/gtest.h>

#include <qmix/chain_generators.hpp>
#include <qmix/errors.hpp>
#include <qmix/pointer_sim.hpp>
#include <qmix/walk_hamiltonian.hpp>

#include "oracles.hpp"

#include <cmath>
#include <numbers>

using namespace qmix;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(PointerAmplitude, ZeroEnergyIsExactlyOne) {
  for (int l : {1, 3, 10}) EXPECT_EQ(pointer_zero_amplitude(0.0, 7.0, l), Complex(1.0, 0.0));
}

TEST(PointerAmplitude, ClosedFormMatchesDirectSum) {
  const double gap = 0.25, tau = 2 * kPi / gap;
  const Complex a = pointer_zero_amplitude(1.5 * gap, tau, 3);
  const Complex b = oracle::pointer_sum(1.5 * gap, tau, 3);
  EXPECT_LT(std::abs(a - b), 1e-14);
  for (int l = 1; l <= 8; ++l)
    for (double e : {-0.9, -0.013, 1e-9, 1e-7, 0.31, 0.999})
      EXPECT_LT(std::abs(pointer_zero_amplitude(e, 5.3, l) - oracle::pointer_sum(e, 5.3, l)), 1e-13)
          << "l=" << l << " e=" << e;
}

TEST(PointerAmplitude, AliasedPhaseUsesSeries) {
  // E tau / N = 2 pi (1 + 1e-10): every term is within 1e-9 of one.
  const int l = 4;
  const double tau = 1.0;
  const double e = 16.0 * 2 * kPi * (1 + 1e-10);
  EXPECT_LT(std::abs(pointer_zero_amplitude(e, tau, l) - oracle::pointer_sum(e, tau, l)), 1e-12);
  EXPECT_NEAR(std::abs(pointer_zero_amplitude(e, tau, l)), 1.0, 1e-12);
}

TEST(PointerAmplitude, ConjugateSymmetryAndGapZero) {
  const double gap = 0.1;
  const PointerConfig c = PointerConfig::for_gap(gap, 0.01);
  EXPECT_LT(std::abs(pointer_zero_amplitude(gap, c.tau, c.l)), 1e-14);
  const Complex a = pointer_zero_amplitude(0.37, c.tau, c.l);
  EXPECT_LT(std::abs(std::conj(a) - pointer_zero_amplitude(-0.37, c.tau, c.l)), 1e-15);
}

TEST(PointerAmplitude, BelowHalfAboveGapOnGrid) {
  // Bound |gamma| <= gap / (2|E|) < 1/2 for gap <= |E| <= 1.
  int checked = 0;
  for (int gi = 0; gi < 40; ++gi) {
    const double gap = std::pow(10.0, -3.0 + 3.0 * gi / 39.0);
    const PointerConfig c = PointerConfig::for_gap(gap, 0.1);
    EXPECT_GE(std::ldexp(gap, c.l), 2.0);
    for (int ei = 0; ei < 25; ++ei) {
      const double e = gap + (1.0 - gap) * ei / 24.0;
      for (double sign : {1.0, -1.0}) {
        const double g = std::abs(pointer_zero_amplitude(sign * e, c.tau, c.l));
        EXPECT_LT(g, 0.5);
        EXPECT_LE(g, gap / (2 * e) + 1e-12);
        ++checked;
      }
    }
  }
  EXPECT_EQ(checked, 2000);
}

TEST(PointerConfig, Sizing) {
  const PointerConfig c = PointerConfig::for_gap(0.3, 0.01);
  EXPECT_EQ(c.l, 3);  // ceil(log2(1/0.3)) + 1 = 3, and 8 * 0.3 >= 2
  EXPECT_EQ(c.blocks, 7);
  EXPECT_NEAR(c.tau, 2 * kPi / 0.3, 1e-15);
  EXPECT_EQ(c.total_qubits(), 21);
  EXPECT_NEAR(c.total_time(), 7 * c.tau, 1e-12);
  // Exact power of two: ceil(log2(4)) + 1 = 3 and 8 * 0.25 = 2.
  EXPECT_EQ(PointerConfig::for_gap(0.25, 0.5).l, 3);
  EXPECT_EQ(PointerConfig::for_gap(0.25, 0.5).blocks, 1);
  EXPECT_THROW(PointerConfig::for_gap(0.0, 0.1), ValidationError);
  EXPECT_THROW(PointerConfig::for_gap(0.1, 1.0), ValidationError);
}

TEST(EvolveBlock, ZeroModeStaysAtPointerZero) {
  const Matrix h = oracle::random_symmetric(4, 5);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const ModeSpectrum ms{es.eigenvalues().array() - es.eigenvalues()(2), es.eigenvectors().cast<Complex>()};
  const PointerConfig cfg = PointerConfig::with_qubits(3, 0.3, 0.1);
  const CVector psi = ms.modes.col(2);
  const CompositeState out = evolve_block(ms, CompositeState::product_at_zero(psi, 3), cfg);
  EXPECT_LT((out.slice(0) - psi).norm(), 1e-14);
  EXPECT_NEAR(out.amplitudes.norm(), 1.0, 1e-12);
}

TEST(EvolveBlock, SingleModePointerZeroAmplitude) {
  const Matrix h = oracle::random_symmetric(3, 9);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const ModeSpectrum ms{es.eigenvalues(), es.eigenvectors().cast<Complex>()};
  const PointerConfig cfg = PointerConfig::with_qubits(4, 0.5, 0.1);
  for (int j = 0; j < 3; ++j) {
    const CompositeState out = evolve_block(ms, CompositeState::product_at_zero(ms.modes.col(j), 4), cfg);
    const Complex g = pointer_zero_amplitude(ms.energies(j), cfg.tau, cfg.l);
    EXPECT_LT((out.slice(0) - g * ms.modes.col(j)).norm(), 1e-13);
  }
}

TEST(EvolveBlock, MatchesDenseMatrixExponential) {
  for (int n : {2, 3, 4}) {
    for (int l : {1, 2, 3}) {
      const CMatrix h = oracle::random_hermitian(n, static_cast<unsigned>(10 * n + l));
      Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
      const ModeSpectrum ms{es.eigenvalues(), es.eigenvectors()};
      const PointerConfig cfg = PointerConfig::with_qubits(l, 0.7, 0.1);
      CVector psi = oracle::random_hermitian(n, 99u).col(0);
      psi.normalize();
      // An arbitrary pointer state, not only position zero.
      CompositeState in = CompositeState::product_at_zero(psi, l);
      in.amplitudes = oracle::random_hermitian(static_cast<int>(n << l), 7u).col(1).normalized();
      const CVector expected = oracle::unitary(oracle::composite_generator(h, l), cfg.tau) * in.amplitudes;
      const CompositeState out = evolve_block(ms, in, cfg);
      EXPECT_LT((out.amplitudes - expected).norm(), 1e-10) << "n=" << n << " l=" << l;
      EXPECT_NEAR(out.amplitudes.norm(), 1.0, 1e-12);
    }
  }
}

TEST(Postselect, TopModeIsKeptWithCertainty) {
  Rng rng(4);
  const StochasticMatrix p = random_reversible_chain(8, rng);
  const Discriminant d = discriminant(p);
  const EdgeWalkHamiltonian h = build_effective(d);
  const PointerConfig cfg = PointerConfig::for_gap(h.gap, 0.01);
  const PostselectResult r = run_blocks_postselect(h.mode_spectrum(), h.embed(Vector(d.spectrum.vectors.col(7))), cfg);
  EXPECT_NEAR(r.success_prob, 1.0, 1e-14);
  EXPECT_LT((h.reference_sector(r.state) - d.spectrum.vectors.col(7).cast<Complex>()).norm(), 1e-14);
}

TEST(Postselect, SingleBlockEqualsCompositeProjection) {
  const CMatrix hm = oracle::random_hermitian(4, 31);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hm);
  Vector e = es.eigenvalues();
  e.array() -= e(1);  // make mode 1 the zero mode
  const ModeSpectrum ms{e, es.eigenvectors()};
  const CMatrix h = ms.modes * e.cast<Complex>().asDiagonal() * ms.modes.adjoint();
  PointerConfig cfg = PointerConfig::with_qubits(3, 0.4, 0.4);
  ASSERT_EQ(cfg.blocks, 2);
  cfg.blocks = 1;
  CVector psi = oracle::random_hermitian(4, 8).col(2);
  psi.normalize();
  const PostselectResult r = run_blocks_postselect(ms, psi, cfg);
  CompositeState in = CompositeState::product_at_zero(psi, 3);
  const CVector full = oracle::unitary(oracle::composite_generator(h, 3), cfg.tau) * in.amplitudes;
  CVector zero(4);
  for (int s = 0; s < 4; ++s) zero(s) = full(s * 8);
  EXPECT_NEAR(r.success_prob, zero.squaredNorm(), 1e-10);
  EXPECT_LT((r.state - zero / zero.norm()).norm(), 1e-10);
}

TEST(Postselect, TwoBlocksEqualRepeatedCompositeProjection) {
  const Matrix hm = oracle::random_symmetric(3, 12);
  Eigen::SelfAdjointEigenSolver<Matrix> es(hm);
  Vector e = es.eigenvalues();
  e.array() -= e(2);
  const SpectralDecomposition sd{e, es.eigenvectors()};
  const Matrix h = sd.vectors * e.asDiagonal() * sd.vectors.transpose();
  const PointerConfig cfg = PointerConfig::with_qubits(2, 0.9, 0.25);
  ASSERT_EQ(cfg.blocks, 2);
  const Vector psi = Vector::Ones(3) / std::sqrt(3.0);
  const PostselectResult r = run_blocks_postselect(sd, psi, cfg);
  const CMatrix u = oracle::unitary(oracle::composite_generator(h.cast<Complex>(), 2), cfg.tau);
  CVector sys = psi.cast<Complex>();
  for (int b = 0; b < 2; ++b) {
    const CVector full = u * CompositeState::product_at_zero(sys, 2).amplitudes;
    for (int s = 0; s < 3; ++s) sys(s) = full(s * 4);
  }
  EXPECT_NEAR(r.success_prob, sys.squaredNorm(), 1e-10);
  EXPECT_LT((r.state - sys / sys.norm()).norm(), 1e-10);
}

TEST(Postselect, FilterReachesTopModeOnRandomChains) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(seed);
    const StochasticMatrix p = random_reversible_chain(10, rng);
    const Discriminant d = discriminant(p);
    const EdgeWalkHamiltonian h = build_effective(d);
    Vector psi = Vector::Zero(10);
    psi(static_cast<Eigen::Index>(seed % 10)) = 1.0;
    const double alpha_sq = std::pow(d.spectrum.vectors(static_cast<Eigen::Index>(seed % 10), 9), 2);
    for (double eps : {0.1, 0.01}) {
      const PointerConfig cfg = PointerConfig::for_gap(h.gap, eps * alpha_sq);
      const PostselectResult r = run_blocks_postselect(h.mode_spectrum(), h.embed(psi), cfg);
      for (Eigen::Index j = 0; j < r.mode_factors.size(); ++j)
        if (r.mode_factors(j) < 1.0) EXPECT_LE(r.mode_factors(j), cfg.eps_prime);
      const CVector out = r.state;
      CVector target = CVector::Zero(h.dim());
      target(h.top_index()) = 1.0;
      EXPECT_LE((out - target).norm(), eps);
      EXPECT_GE(r.success_prob, alpha_sq - eps);
    }
  }
}

TEST(Postselect, NoZeroModeWeightIsDegenerate) {
  const SpectralDecomposition sd{(Vector(2) << 0.0, 0.5).finished(), Matrix::Identity(2, 2)};
  const PointerConfig cfg = PointerConfig::with_qubits(3, 0.5, 1e-15 * 10);
  EXPECT_THROW(run_blocks_postselect(sd, Vector::Unit(2, 1), cfg), DegenerateError);
}
