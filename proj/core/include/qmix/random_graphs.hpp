#pragma once

#include "qmix/qlsamp.hpp"
#include "qmix/spectral.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace qmix {

struct GnpSample {
  Eigen::Index n = 0;
  double p = 0.0;
  std::uint64_t seed = 0;
  Matrix adjacency;
  Matrix normalized;  // adjacency / (n p)
  SpectralDecomposition spectrum;
  long long edges = 0;
  bool connected = false;
};

/// Eigensolve is skipped when `with_spectrum` is false.
GnpSample sample_gnp(Eigen::Index n, double p, std::uint64_t seed, bool with_spectrum = true,
                     Eigen::Index max_n = 2000);

/// Semicircle of radius 2 sqrt((1-p)/(np)), the bulk law of adjacency / (np).
struct SemicircleModel {
  Eigen::Index n = 0;
  double p = 0.0;
  double radius = 0.0;             // 2 sqrt(n p (1-p)), unnormalised
  double radius_normalized = 0.0;  // 2 sqrt((1-p)/(n p))
  std::vector<double> locations;   // gamma_1 .. gamma_{n-1}

  double density(double x) const;
  double cdf(double x) const;
  double location(Eigen::Index i) const { return locations.at(static_cast<std::size_t>(i - 1)); }
};

SemicircleModel classical_locations(Eigen::Index n, double p);

/// min over i <= n/2, 1 <= r <= n-2i of (gamma_{i+r} - gamma_i) n^{7/6} i^{1/3} sqrt(p) / r.
double spacing_constant(const SemicircleModel& m);

/// n^eps (n^{-2/3} a_i^{-1/3} + n^{-1-phi}) / sqrt(p n), a_i = max(i, n-i), phi = log p / log n.
double rigidity_envelope(Eigen::Index n, double p, Eigen::Index i, double eps);

struct TailPoint {
  double x = 0.0;    // normalised gap delta_i n^{3/2} sqrt(p)
  double cdf = 0.0;  // fraction of gaps <= x
};

struct RmtReport {
  double lambda_top = 0.0;
  double lambda_second = 0.0;
  double delta_min = 0.0;
  double deloc_max = 0.0;
  long long rigidity_violations = 0;
  double rigidity_worst_ratio = 0.0;  // max |lambda_i - gamma_i| / envelope
  double sigma1 = 0.0;
  double sigma = 0.0;
  double avg_bulk_gap = 0.0;
  bool simple_spectrum = false;
  std::vector<TailPoint> tail_hist;
  double tail_constant = 0.0;  // max cdf / (x log n)
  double ks_distance = 0.0;    // bulk vs semicircle
};

/// `simple_tol` separates eigenvalues for the simple-spectrum flag and pair sums.
RmtReport rmt_report(const GnpSample& sample, const SemicircleModel& model, double eps_exponent,
                     double simple_tol = 1e-12);

/// Kolmogorov-Smirnov distance of the ascending eigenvalues (top excluded) to the semicircle.
double semicircle_ks_distance(const Vector& ascending, const SemicircleModel& m);

struct MixingCell {
  Eigen::Index n = 0;
  int seed_index = 0;
  std::uint64_t seed = 0;
  std::optional<double> t_mix;
  double limit_uniform_distance = 0.0;  // || P(inf) - uniform ||_inf
  double sigma = 0.0;
  double sigma1 = 0.0;
  double delta_min = 0.0;
  double deloc_max = 0.0;
  std::vector<double> distances;  // one per grid point, only when traces are kept
};

struct MixingExponentResult {
  std::vector<MixingCell> cells;
  std::vector<std::pair<Eigen::Index, double>> per_size_median;
  double exponent = 0.0;
  double intercept = 0.0;
  double fit_residual = 0.0;  // RMS of the log-log fit
  int flagged = 0;            // cells without a crossing
};

struct MixingExperimentConfig {
  std::vector<Eigen::Index> sizes;
  double p = 0.5;
  double epsilon = 0.1;
  int seeds_per_size = 3;
  double t_max = 1e7;
  int grid_points = 400;
  std::uint64_t master_seed = 0;
  int threads = 1;
  bool keep_traces = false;
};

/// The t grid the experiment evaluates on.
std::vector<double> mixing_grid(const MixingExperimentConfig& cfg);

MixingExponentResult mixing_exponent_experiment(const MixingExperimentConfig& cfg);

struct SigmaCell {
  Eigen::Index n = 0;
  int seed_index = 0;
  std::uint64_t seed = 0;
  double sigma1 = 0.0;
  double sigma = 0.0;
  double delta_min = 0.0;
  double deloc_max = 0.0;
  double avg_bulk_gap = 0.0;
  bool simple_spectrum = false;
  bool sandwich = false;
  bool sigma1_ok = false;
  bool sigma_ok = false;
  bool delta_min_ok = false;
  bool deloc_ok = false;
  bool avg_gap_ok = false;
};

struct SigmaScalingConfig {
  std::vector<Eigen::Index> sizes;
  double p = 0.5;
  int seeds_per_size = 20;
  std::uint64_t master_seed = 0;
  double exponent_slack = 0.2;
  int threads = 1;
};

std::vector<SigmaCell> sigma_scaling_experiment(const SigmaScalingConfig& cfg);

/// Seed of cell (n, seed_index) under `master`.
std::uint64_t cell_seed(std::uint64_t master, Eigen::Index n, int seed_index);

}  // namespace qmix
