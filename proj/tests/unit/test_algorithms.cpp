#include <gtest/gtest.h>

#include <qmix/algorithms.hpp>
#include <qmix/chain_generators.hpp>
#include <qmix/classical_times.hpp>
#include <qmix/errors.hpp>
#include <qmix/io.hpp>

#include <cmath>
#include <numbers>

using namespace qmix;

namespace {

StochasticMatrix random_chain(Eigen::Index n, std::uint64_t seed) {
  Rng rng(seed);
  return random_reversible_chain(n, rng);
}

}  // namespace

TEST(Search, OverlapsAtCrossingPoint) {
  const StochasticMatrix p = random_chain(12, 3);
  const MarkedSet m({4}, 12);
  const StationaryDistribution pi = with_marked(stationary_distribution(p), m);
  const double s = s_star(pi.p_marked);
  const Vector top = discriminant(interpolate(p, m, s)).spectrum.vectors.col(11);
  const double overlap = top.dot(pi.sqrt_pi());
  EXPECT_NEAR(overlap * overlap, 0.5 + std::sqrt(pi.p_marked * (1 - pi.p_marked)), 1e-10);
  const UMSplit u = u_m_split(pi, m, s);
  EXPECT_NEAR(std::pow(top.dot(u.m_state), 2), 0.5, 1e-10);
}

TEST(Search, LazyCompleteGraphSucceeds) {
  const StochasticMatrix p = complete_graph_walk(16);
  const MarkedSet m({0}, 16);
  const StationaryDistribution pi = with_marked(stationary_distribution(p), m);
  const SearchOutcome r = spatial_search(p, pi, m, 0.05, 11);
  EXPECT_GE(r.success_prob, 0.2);
  EXPECT_GE(r.success_prob, 0.25 - 0.05);
  EXPECT_NEAR(r.s_star, 1.0 - 1.0 / 15.0, 1e-15);
  EXPECT_NEAR(r.total_time, r.stage.config.tau * r.stage.config.blocks, 1e-9);
  EXPECT_NEAR(r.stage.top_overlap_sq, 0.5 + std::sqrt(pi.p_marked * (1 - pi.p_marked)), 1e-10);
}

TEST(Search, EffectiveMatchesCompositeSimulation) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const StochasticMatrix p = random_chain(6, seed);
    const MarkedSet m({static_cast<Eigen::Index>(seed % 6)}, 6);
    const StationaryDistribution pi = with_marked(stationary_distribution(p), m);
    if (pi.p_marked >= 0.5) continue;
    WalkOptions full;
    full.representation = Representation::full;
    const SearchOutcome a = spatial_search(p, pi, m, 0.05, 5);
    const SearchOutcome b = spatial_search(p, pi, m, 0.05, 5, full);
    EXPECT_NEAR(a.success_prob, b.success_prob, 1e-10);
    EXPECT_NEAR(a.stage.success_prob, b.stage.success_prob, 1e-10);
    EXPECT_LT((a.node_probs - b.node_probs).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_EQ(a.sampled_node, b.sampled_node);
  }
}

TEST(Search, SuccessAndGapBoundsOnRandomChains) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const Eigen::Index n = 4 + static_cast<Eigen::Index>(seed * 5 % 29);
    const StochasticMatrix p = random_chain(n, seed + 300);
    const MarkedSet m({0}, n);
    const StationaryDistribution pi = with_marked(stationary_distribution(p), m);
    const double eps = 0.05;
    const SearchOutcome r = spatial_search(p, pi, m, eps, seed);
    EXPECT_GE(r.success_prob, 0.25 - eps) << "seed " << seed;
    const double ht_plus = extended_hitting_time(p, pi, m, {0.0, 0.5}).ht_plus;
    EXPECT_GE(1.0 / r.stage.chain_gap, ht_plus / 2.0) << "seed " << seed;
  }
}

TEST(Search, RejectsHeavyMarkedSet) {
  const StochasticMatrix p = complete_graph_walk(4);
  const MarkedSet m({0, 1, 2}, 4);
  const StationaryDistribution pi = with_marked(stationary_distribution(p), m);
  EXPECT_THROW(spatial_search(p, pi, m, 0.05, 1), ValidationError);
  EXPECT_THROW(spatial_search(p, pi, MarkedSet({0}, 4), 0.3, 1), ValidationError);
}

TEST(Search, SamplingIsSeeded) {
  const StochasticMatrix p = complete_graph_walk(10);
  const MarkedSet m({3}, 10);
  const StationaryDistribution pi = with_marked(stationary_distribution(p), m);
  EXPECT_EQ(spatial_search(p, pi, m, 0.1, 42).sampled_node, spatial_search(p, pi, m, 0.1, 42).sampled_node);
  int marked_hits = 0;
  for (std::uint64_t s = 0; s < 200; ++s) marked_hits += spatial_search(p, pi, m, 0.1, s).is_marked;
  EXPECT_GT(marked_hits, 40);
}

TEST(QSSamp, StageOneTargetState) {
  const StochasticMatrix p = random_chain(9, 14);
  const Eigen::Index j = 2;
  const Vector pi = stationary_distribution(p);
  const double s = s_star(pi(j));
  const Vector top = discriminant(interpolate(p, MarkedSet({j}, 9), s)).spectrum.vectors.col(8);
  Vector expected = pi.cwiseSqrt() / std::sqrt(1 - pi(j));
  expected(j) = 1.0;
  expected /= std::sqrt(2.0);
  EXPECT_LT((top - expected).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(top(j), 1.0 / std::sqrt(2.0), 1e-10);
  EXPECT_GE(top.dot(pi.cwiseSqrt()), 1.0 / std::sqrt(2.0));
}

TEST(QSSamp, BundledChainHighFidelity) {
  const StochasticMatrix p = io::read_chain(std::string(QMIX_DATA_DIR) + "/chain12.txt");
  const QSSampOutcome r = qssamp_prepare(p, 0, 0.01);
  EXPECT_GE(r.fidelity_to_pi, 0.999);
  EXPECT_LE(r.distance_to_pi, 4 * 0.01);
  EXPECT_NEAR(r.stage1.top_overlap_sq, 0.5, 1e-10);
  EXPECT_GE(r.stage2.top_overlap_sq, 0.5 - 1e-10);
  EXPECT_GE(r.stage1.success_prob, 0.45);
  EXPECT_GE(r.stage2.success_prob, 0.45);
  // Measured distribution is TV-close to pi.
  const Vector pi = stationary_distribution(p);
  EXPECT_LE(0.5 * (r.state.cwiseAbs2() - pi).cwiseAbs().sum(), 0.02);
}

TEST(QSSamp, TimeBookkeeping) {
  const StochasticMatrix p = random_chain(10, 2);
  const double eps = 0.02;
  const QSSampOutcome r = qssamp_prepare(p, 3, eps);
  const int blocks = static_cast<int>(std::ceil(std::log2(4 / eps)));
  EXPECT_EQ(r.blocks_per_stage, blocks);
  EXPECT_EQ(r.stage2.config.blocks, blocks);
  const double expected =
      (2 * std::numbers::pi / r.stage1.hamiltonian_gap + 2 * std::numbers::pi / r.stage2.hamiltonian_gap) * blocks;
  EXPECT_NEAR(r.total_time, expected, 1e-9 * expected);
}

TEST(QSSamp, EffectiveMatchesFullAtSmallN) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const StochasticMatrix p = random_chain(5, seed + 50);
    WalkOptions full;
    full.representation = Representation::full;
    const QSSampOutcome a = qssamp_prepare(p, 1, 0.05);
    const QSSampOutcome b = qssamp_prepare(p, 1, 0.05, std::nullopt, full);
    EXPECT_NEAR(a.stage1.success_prob, b.stage1.success_prob, 1e-10);
    // Stage 2 of the effective path drops the stage-1 weight outside the
    // reference sector; the full path keeps it.
    EXPECT_NEAR(a.stage2.success_prob, b.stage2.success_prob, 10 * a.stage1.perp_weight + 1e-10);
    EXPECT_NEAR(a.distance_to_pi, b.distance_to_pi, 1e-3);
    EXPECT_LE(b.distance_to_pi, 4 * 0.05);
  }
}

TEST(QSSamp, ChainGapSizingUsesMoreQubits) {
  const StochasticMatrix p = random_chain(8, 4);
  WalkOptions opts;
  opts.sizing = PointerSizing::chain_gap;
  const QSSampOutcome a = qssamp_prepare(p, 0, 0.05);
  const QSSampOutcome b = qssamp_prepare(p, 0, 0.05, std::nullopt, opts);
  EXPECT_GE(b.stage1.config.l, a.stage1.config.l);
  EXPECT_EQ(b.stage1.config.tau, a.stage1.config.tau);
  EXPECT_LE(b.distance_to_pi, 0.2);
}

TEST(QSSamp, SuppliedWeightAndRejections) {
  const StochasticMatrix p = random_chain(7, 9);
  const Vector pi = stationary_distribution(p);
  const QSSampOutcome a = qssamp_prepare(p, 2, 0.05, pi(2));
  const QSSampOutcome b = qssamp_prepare(p, 2, 0.05);
  EXPECT_EQ(a.distance_to_pi, b.distance_to_pi);
  EXPECT_THROW(qssamp_prepare(p, 2, 0.05, 0.6), ValidationError);
  EXPECT_THROW(qssamp_prepare(p, 9, 0.05), ValidationError);
  Matrix m(2, 2);
  m << .5, .5, .5, .5;
  EXPECT_THROW(qssamp_prepare(StochasticMatrix(m), 0, 0.05), ValidationError);
}

TEST(Cost, Arithmetic) {
  EXPECT_EQ(cost_total({0, 1, 1, 4}), 4.0);
  EXPECT_EQ(cost_total({3, 0, 0, 9}), 3.0);
  const StochasticMatrix p = complete_graph_walk(8);
  const MarkedSet m({0}, 8);
  const StationaryDistribution pi = with_marked(stationary_distribution(p), m);
  const double ht_plus = extended_hitting_time(p, pi, m, {0.0}).ht_plus;
  const double total = cost_total({1, 2, 3, ht_plus});
  EXPECT_TRUE(std::isfinite(total));
  EXPECT_GT(total, 0.0);
  EXPECT_THROW(cost_total({0, 1, 1, -1}), ValidationError);
}
