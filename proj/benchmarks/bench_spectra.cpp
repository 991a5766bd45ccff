#include <qmix/qlsamp.hpp>
#include <qmix/random_graphs.hpp>

#include <benchmark/benchmark.h>

namespace {

void BM_SampleGnpWithSpectrum(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(qmix::sample_gnp(n, 0.5, ++seed));
}
BENCHMARK(BM_SampleGnpWithSpectrum)->RangeMultiplier(2)->Range(50, 800)->Unit(benchmark::kMillisecond);

void BM_TimeAverageAt(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const auto g = qmix::sample_gnp(n, 0.5, 7);
  const qmix::TimeAverager avg(g.spectrum, qmix::Vector::Unit(n, 0));
  double t = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(avg.at(t));
    t *= 1.01;
  }
}
BENCHMARK(BM_TimeAverageAt)->RangeMultiplier(2)->Range(25, 400);

void BM_GapStatistics(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const auto g = qmix::sample_gnp(n, 0.5, 9);
  for (auto _ : state) benchmark::DoNotOptimize(qmix::gap_statistics(g.spectrum.values, 1e-12));
}
BENCHMARK(BM_GapStatistics)->RangeMultiplier(2)->Range(50, 800);

void BM_RmtReport(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const auto g = qmix::sample_gnp(n, 0.5, 11);
  const auto model = qmix::classical_locations(n, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(qmix::rmt_report(g, model, 0.25));
}
BENCHMARK(BM_RmtReport)->RangeMultiplier(2)->Range(50, 400);

}  // namespace

BENCHMARK_MAIN();
