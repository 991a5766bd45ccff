#include <qmix/algorithms.hpp>
#include <qmix/chain_generators.hpp>
#include <qmix/classical_times.hpp>
#include <qmix/walk_hamiltonian.hpp>

#include <benchmark/benchmark.h>

namespace {

qmix::StochasticMatrix chain(Eigen::Index n) {
  qmix::Rng rng(static_cast<std::uint64_t>(n));
  return qmix::random_reversible_chain(n, rng);
}

void BM_Discriminant(benchmark::State& state) {
  const auto p = chain(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qmix::discriminant(p));
}
BENCHMARK(BM_Discriminant)->RangeMultiplier(2)->Range(8, 256);

void BM_HittingTimeSpectral(benchmark::State& state) {
  const auto p = chain(state.range(0));
  const qmix::MarkedSet m({0}, p.n());
  const auto pi = qmix::with_marked(qmix::stationary_distribution(p), m);
  for (auto _ : state) benchmark::DoNotOptimize(qmix::hitting_time_spectral(p, pi, m));
}
BENCHMARK(BM_HittingTimeSpectral)->RangeMultiplier(2)->Range(8, 256);

void BM_SpatialSearch(benchmark::State& state) {
  const auto p = chain(state.range(0));
  const qmix::MarkedSet m({0}, p.n());
  const auto pi = qmix::with_marked(qmix::stationary_distribution(p), m);
  for (auto _ : state) benchmark::DoNotOptimize(qmix::spatial_search(p, pi, m, 0.05, 1));
}
BENCHMARK(BM_SpatialSearch)->RangeMultiplier(2)->Range(8, 128);

void BM_QSSampEffective(benchmark::State& state) {
  const auto p = chain(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qmix::qssamp_prepare(p, 0, 0.01));
}
BENCHMARK(BM_QSSampEffective)->RangeMultiplier(2)->Range(8, 128);

void BM_QSSampFull(benchmark::State& state) {
  const auto p = chain(state.range(0));
  qmix::WalkOptions opts;
  opts.representation = qmix::Representation::full;
  for (auto _ : state) benchmark::DoNotOptimize(qmix::qssamp_prepare(p, 0, 0.01, std::nullopt, opts));
}
BENCHMARK(BM_QSSampFull)->DenseRange(4, 10, 2);

void BM_ClassicalMixing(benchmark::State& state) {
  const auto p = chain(state.range(0));
  const qmix::StationaryDistribution pi{qmix::stationary_distribution(p), 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(qmix::classical_mixing_time(p, pi, 0.25));
}
BENCHMARK(BM_ClassicalMixing)->RangeMultiplier(2)->Range(8, 64);

}  // namespace
