#include <gtest/gtest.h>

#include <qmix/chain_generators.hpp>
#include <qmix/errors.hpp>
#include <qmix/qlsamp.hpp>
#include <qmix/random_graphs.hpp>

#include "oracles.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

using namespace qmix;

namespace {

Vector unit_state(Eigen::Index n, unsigned seed) {
  return oracle::random_symmetric(static_cast<int>(n), seed).col(0).normalized();
}

}  // namespace

TEST(Kernel, LimitsAndBound) {
  EXPECT_EQ(averaging_kernel(0.0, 5.0), Complex(1.0, 0.0));
  for (double x : {1e-9, 1e-5, 0.3, 4.0, 1e3}) {
    const Complex k = averaging_kernel(x, 1.0);
    const Complex direct = (1.0 - std::polar(1.0, -x)) / Complex(0.0, x);
    EXPECT_LE(std::abs(k), 1.0 + 1e-15);
    if (x > 1e-4) {
      EXPECT_LT(std::abs(k - direct), 1e-12);
    }
  }
  EXPECT_LT(std::abs(averaging_kernel(1.0, 1e8)), 1e-7);
}

TEST(TimeAveraged, EigenstateIsStationary) {
  const SpectralDecomposition s = eigh(oracle::random_symmetric(6, 3));
  const Vector v = s.vectors.col(2);
  for (double T : {0.1, 10.0, 1e5}) {
    const auto d = time_averaged_distribution(s, v, T);
    EXPECT_LT((d.probs - v.cwiseAbs2()).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(TimeAveraged, MatchesQuadratureRealAndComplex) {
  for (int d = 6; d <= 16; d += 5) {
    const Matrix h = oracle::random_symmetric(d, static_cast<unsigned>(d));
    const Vector psi = unit_state(d, 100u + static_cast<unsigned>(d));
    const SpectralDecomposition s = eigh(h);
    const Vector quad = oracle::quadrature_average(h, psi, 50.0, 20001);
    const auto real_path = time_averaged_distribution(s, psi, 50.0);
    EXPECT_LT((real_path.probs - quad).cwiseAbs().maxCoeff(), 1e-4);
    EXPECT_NEAR(real_path.probs.sum(), 1.0, 1e-10);
    const ModeSpectrum ms{s.values, s.vectors.cast<Complex>()};
    const auto cplx = time_averaged_distribution(ms, CVector(psi.cast<Complex>()), 50.0);
    EXPECT_LT((cplx.probs - real_path.probs).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_LT(cplx.imag_residual, 1e-10);
  }
}

TEST(TimeAveraged, ConvergesToLimitOnCompleteGraph) {
  const StochasticMatrix k8 = complete_graph_walk(8, false);
  const SpectralDecomposition s = eigh(k8.matrix());
  const Vector psi = Vector::Unit(8, 0);
  const auto lim = limiting_distribution(s, psi);
  EXPECT_NEAR(lim.probs.sum(), 1.0, 1e-12);
  EXPECT_LT((time_averaged_distribution(s, psi, 1e4).probs - lim.probs).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(Limiting, DegenerateGroupsKeepCrossTerms) {
  // K_8 has a 7-fold degenerate eigenvalue; ignoring degeneracy would be wrong.
  const SpectralDecomposition s = eigh(complete_graph_walk(8, false).matrix());
  const Vector psi = Vector::Unit(8, 0);
  const Vector grouped = limiting_distribution(s, psi).probs;
  const Vector split = limiting_distribution(s, psi, nullptr, 0.0).probs;
  // Walk on K_n from a node: 1/n^2 + (1 - 1/n)^2 on the start, 2/n^2 elsewhere.
  EXPECT_NEAR(grouped(0), 1.0 / 64 + 49.0 / 64, 1e-12);
  EXPECT_NEAR(grouped(3), 2.0 / 64, 1e-12);
  EXPECT_GT((grouped - split).cwiseAbs().maxCoeff(), 0.1);
}

TEST(Limiting, MatchesLongAverageOnSimpleSpectrum) {
  for (unsigned seed = 1; seed <= 5; ++seed) {
    const int d = 5 + static_cast<int>(seed) * 2;
    const Matrix h = oracle::random_symmetric(d, seed * 13);
    const SpectralDecomposition s = eigh(h);
    const Vector psi = unit_state(d, seed);
    const Vector lim = limiting_distribution(s, psi).probs;
    const Vector simple = (s.vectors * s.coefficients(psi).asDiagonal()).cwiseAbs2().rowwise().sum();
    EXPECT_LT((lim - simple).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((time_averaged_distribution(s, psi, 1e6).probs - lim).cwiseAbs().maxCoeff(), 2e-3);
  }
}

TEST(Limiting, GnpCloseToUniform) {
  const GnpSample g = sample_gnp(50, 0.5, 2024);
  const Vector lim = limiting_distribution(g.spectrum, Vector::Unit(50, 0)).probs;
  EXPECT_LE((lim.array() - 1.0 / 50).abs().maxCoeff(), 5.0 / 50);
}

TEST(GapStats, TwoPoint) {
  const GapStatistics g = gap_statistics((Vector(2) << 0.0, 1.0).finished());
  EXPECT_EQ(g.sigma, 1.0);
  EXPECT_EQ(g.delta_min, 1.0);
  EXPECT_EQ(g.delta, 1.0);
  EXPECT_TRUE(g.simple_spectrum);
  EXPECT_TRUE(g.sandwich_holds());
}

TEST(GapStats, EquallySpacedTwoWays) {
  for (int n : {3, 10, 57}) {
    const double h = 0.37;
    const Vector x = Vector::LinSpaced(n, 0.0, h * (n - 1));
    const GapStatistics g = gap_statistics(x);
    double closed = 0.0;
    for (int r = 1; r < n; ++r) closed += static_cast<double>(n - r) / r;
    closed /= h;
    EXPECT_NEAR(g.sigma, closed, 1e-10 * closed);
    EXPECT_NEAR(2.0 * g.sigma, oracle::ordered_pair_sum(x, 1e-12), 1e-10 * closed);
    double sum_r = 0.0;
    for (double s : g.sigma_r) sum_r += s;
    EXPECT_NEAR(sum_r, g.sigma, 1e-12 * g.sigma);
    EXPECT_NEAR(g.sigma1(), (n - 1) / h, 1e-10);
    EXPECT_NEAR(g.avg_gap, h, 1e-14);
    EXPECT_TRUE(g.sandwich_holds());
  }
}

TEST(GapStats, SandwichOnRandomSpectra) {
  for (unsigned seed = 1; seed <= 30; ++seed) {
    const SpectralDecomposition s = eigh(oracle::random_symmetric(4 + static_cast<int>(seed), seed));
    const GapStatistics g = gap_statistics(s.values);
    ASSERT_TRUE(g.simple_spectrum);
    EXPECT_TRUE(g.sandwich_holds()) << "seed " << seed;
  }
}

TEST(GapStats, DegenerateInputs) {
  EXPECT_THROW(gap_statistics((Vector(3) << 1.0, 1.0, 1.0).finished()), DegenerateError);
  EXPECT_THROW(gap_statistics((Vector(2) << 1.0, 0.0).finished()), ValidationError);
  const GapStatistics g = gap_statistics((Vector(4) << 0.0, 0.5, 0.5, 1.0).finished(), 1e-12);
  EXPECT_FALSE(g.simple_spectrum);
  EXPECT_EQ(g.delta_min, 0.5);
}

TEST(MixingBound, EigenstateAndUniformOverlaps) {
  const SpectralDecomposition s = eigh(oracle::random_symmetric(8, 4));
  EXPECT_NEAR(mixing_time_bound(s, s.vectors.col(3), 0.1), 0.0, 1e-12);
  // A state with equal overlaps 1/sqrt(n) on every eigenvector.
  const Vector psi = s.vectors * Vector::Constant(8, 1.0 / std::sqrt(8.0));
  const GapStatistics g = gap_statistics(s.values);
  EXPECT_NEAR(mixing_time_bound(s, psi, 0.1), g.sigma / (8 * 0.1), 1e-10 * g.sigma);
}

TEST(MixingBound, BoundsEmpiricalCrossing) {
  const SpectralDecomposition s = eigh(complete_graph_walk(8, false).matrix());
  const Vector psi = Vector::Unit(8, 0);
  const double eps = 0.1;
  const double bound = mixing_time_bound(s, psi, eps);
  const MixingTrace tr = mixing_trace(s, psi, eps, geometric_grid(0.01, 1e4, 600));
  ASSERT_TRUE(tr.t_mix.has_value());
  EXPECT_GE(bound, *tr.t_mix);
  // Distance at the bound itself is within epsilon.
  const Vector lim = limiting_distribution(s, psi).probs;
  EXPECT_LE((time_averaged_distribution(s, psi, bound).probs - lim).cwiseAbs().sum(), eps);
}

TEST(MixingBound, DistanceBelowEpsilonPastBoundOnRandomInstances) {
  for (unsigned seed = 1; seed <= 20; ++seed) {
    const int d = 4 + static_cast<int>(seed) * 3;
    const SpectralDecomposition s = eigh(oracle::random_symmetric(d, seed + 500));
    const Vector psi = unit_state(d, seed);
    const Vector lim = limiting_distribution(s, psi).probs;
    for (double eps : {0.2, 0.05}) {
      const double bound = mixing_time_bound(s, psi, eps);
      for (double f : {1.0, 1.5, 4.0}) {
        const double dist = (time_averaged_distribution(s, psi, f * bound).probs - lim).cwiseAbs().sum();
        EXPECT_LE(dist, eps) << "seed " << seed << " eps " << eps << " factor " << f;
      }
    }
  }
}

TEST(MixingTrace, EigenstateHasZeroDistance) {
  const SpectralDecomposition s = eigh(oracle::random_symmetric(5, 1));
  const MixingTrace tr = mixing_trace(s, s.vectors.col(1), 0.1, {1.0, 2.0, 3.0});
  for (double d : tr.distances) EXPECT_LT(d, 1e-14);
  EXPECT_EQ(tr.t_mix.value(), 1.0);
}

TEST(MixingTrace, ClosedFormMatchesRefinedQuadrature) {
  const Matrix h = oracle::random_symmetric(7, 77);
  const SpectralDecomposition s = eigh(h);
  const Vector psi = unit_state(7, 3);
  const Vector lim = limiting_distribution(s, psi).probs;
  const MixingTrace tr = mixing_trace(s, psi, 0.01, {20.0, 40.0});
  for (std::size_t k = 0; k < 2; ++k) {
    const Vector quad = oracle::quadrature_average(h, psi, tr.times[k], 40001);
    EXPECT_NEAR(tr.distances[k], (quad - lim).cwiseAbs().sum(), 1e-4);
  }
  EXPECT_THROW(mixing_trace(s, psi, 0.1, {2.0, 1.0}), ValidationError);
}

TEST(GapMap, SeriesExamples) {
  Discriminant d;
  const double delta = 1e-3;
  d.spectrum.values = (Vector(3) << 0.0, delta, 1.0).finished();
  d.spectrum.vectors = Matrix::Identity(3, 3);
  GapMap m = edge_walk_gap_map(d);
  // Cancellation-free form of 1 - sqrt(1 - delta^2).
  EXPECT_NEAR(m.per_gap[0].energy_gap, delta * delta / (1.0 + std::sqrt(1.0 - delta * delta)), 1e-20);
  EXPECT_NEAR(m.per_gap[0].energy_gap / (delta * delta / 2.0), 1.0, 1e-6);
  EXPECT_LT(m.per_gap[0].energy_gap, m.per_gap[0].chain_gap);

  d.spectrum.values = (Vector(3) << 0.2, 1.0 - delta, 1.0).finished();
  m = edge_walk_gap_map(d);
  EXPECT_NEAR(m.per_gap[1].energy_gap, std::sqrt(2 * delta - delta * delta), 1e-15);
  EXPECT_NEAR(m.per_gap[1].energy_gap / std::sqrt(2 * delta), 1.0, 1e-3);
  EXPECT_GT(m.per_gap[1].energy_gap, m.per_gap[1].chain_gap);
}

TEST(GapMap, MatchesHamiltonianSpectrumAndSandwich) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    Rng rng(seed);
    const StochasticMatrix p = random_reversible_chain(4 + static_cast<Eigen::Index>(seed), rng);
    const Discriminant d = discriminant(interpolate(p, MarkedSet({0}, p.n()), 0.3));
    const GapMap m = edge_walk_gap_map(d);
    const EdgeWalkHamiltonian h = build_effective(d);
    // Nonnegative energies of the dense generator are the images sqrt(1 - lambda^2).
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h.matrix());
    std::vector<double> pos, image;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      if (es.eigenvalues()(i) > -1e-9) pos.push_back(std::max(0.0, es.eigenvalues()(i)));
    for (Eigen::Index j = 0; j < d.spectrum.values.size(); ++j) {
      // The top level sits at energy zero exactly.
      const double l = j + 1 == d.spectrum.values.size() ? 1.0 : d.spectrum.values(j);
      image.push_back(std::sqrt(1.0 - l * l));
    }
    ASSERT_EQ(pos.size(), image.size());
    std::sort(pos.begin(), pos.end());
    std::sort(image.begin(), image.end());
    for (std::size_t j = 0; j < pos.size(); ++j) EXPECT_NEAR(pos[j], image[j], 1e-10);
    ASSERT_EQ(m.per_gap.size() + 1, image.size());
    for (std::size_t j = 0; j < m.per_gap.size(); ++j) {
      const double a = d.spectrum.values(static_cast<Eigen::Index>(j));
      const double b = j + 1 == image.size() - 1 ? 1.0 : d.spectrum.values(static_cast<Eigen::Index>(j + 1));
      EXPECT_NEAR(m.per_gap[j].energy_gap, std::abs(std::sqrt(1 - b * b) - std::sqrt(1 - a * a)), 1e-12);
    }
    EXPECT_TRUE(m.lower_holds);
    EXPECT_TRUE(m.upper_holds);
  }
}

TEST(EdgeWalkLimit, HalfWeightedFormula) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    Rng rng(seed + 7);
    const StochasticMatrix p = random_reversible_chain(8, rng);
    const EdgeWalkHamiltonian h = build_effective(discriminant(p));
    const Vector psi = Vector::Unit(8, static_cast<Eigen::Index>(seed % 8));
    const LimitingDistribution lim = edge_walk_limiting_distribution(h, psi);
    EXPECT_LT((lim.probs - edge_walk_limiting_formula(h, psi)).cwiseAbs().maxCoeff(), 1e-14);
    const Vector c = h.eigvecs.transpose() * psi;
    EXPECT_NEAR(lim.probs.sum(), c(7) * c(7) + 0.5 * (1 - c(7) * c(7)), 1e-12);
    // Long-time average of the effective dynamics, measured on the reference sector.
    CMatrix outcomes(h.dim(), 8);
    for (Eigen::Index f = 0; f < 8; ++f) outcomes.col(f) = h.embed(Vector(Vector::Unit(8, f)));
    const auto avg = time_averaged_distribution(h.mode_spectrum(), h.embed(psi), 1e6, &outcomes);
    EXPECT_LT((avg.probs - lim.probs).cwiseAbs().maxCoeff(), 2e-3);
  }
}
