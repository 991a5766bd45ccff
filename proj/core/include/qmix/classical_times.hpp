#pragma once

#include "qmix/markov.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace qmix {

enum class HittingMethod { spectral, montecarlo };

/// Expected steps to reach the marked set from a pi-distributed unmarked start.
struct HittingTimeReport {
  double ht = 0.0;
  HittingMethod method = HittingMethod::spectral;
  double stderr_ = 0.0;
  std::uint64_t trials = 0;
  // Monte Carlo only: mean over all pi-distributed starts, marked starts counting 0 steps.
  double raw_mean = 0.0;
  double raw_stderr = 0.0;
  std::uint64_t unmarked_starts = 0;
  // Spectral only: the absorbing block had repeated eigenvalues.
  bool degenerate_spectrum = false;
};

HittingTimeReport hitting_time_spectral(const StochasticMatrix& p, const StationaryDistribution& pi,
                                        const MarkedSet& marked);

/// Seeded walks from pi until absorption. Trials run in fixed blocks with
/// per-block derived seeds. Throws TimeoutError past `max_total_steps`.
HittingTimeReport hitting_time_montecarlo(const StochasticMatrix& p, const MarkedSet& marked, std::uint64_t trials,
                                          std::uint64_t seed, std::uint64_t max_total_steps = 100'000'000ULL);

/// Sum over the non-top modes of D(P(s)) of |<v_j(s)|U>|^2 / (1 - lambda_j(s)).
double interpolated_hitting_time(const StochasticMatrix& p, const StationaryDistribution& pi, const MarkedSet& marked,
                                 double s);

struct ExtendedHittingTimeReport {
  double ht_plus = 0.0;
  std::vector<std::pair<double, double>> per_s_values;
  std::vector<double> per_s_ht_plus;
  // (1/Delta(s)) * sum_j |<v_j(s)|U>|^2 over the non-top modes.
  std::vector<double> per_s_gap_bound;
  double invariance_residual = 0.0;
  bool consistent = true;
};

ExtendedHittingTimeReport extended_hitting_time(const StochasticMatrix& p, const StationaryDistribution& pi,
                                                const MarkedSet& marked, const std::vector<double>& s_grid);

struct ClassicalMixingReport {
  long long t_mix_empirical = 0;
  double t_mix_bound = 0.0;
  double epsilon = 0.0;
  double spectral_gap = 0.0;
};

/// max_x (1/2) || e_x P^t - pi ||_1.
double worst_tv_distance(const StochasticMatrix& p, const Vector& pi, long long t);

/// Worst-case TV distance for each t (ascending), by incremental powers.
std::vector<double> tv_trace(const StochasticMatrix& p, const Vector& pi, const std::vector<long long>& times);

ClassicalMixingReport classical_mixing_time(const StochasticMatrix& p, const StationaryDistribution& pi,
                                            double epsilon);

}  // namespace qmix
