#pragma once

#include "qmix/markov.hpp"
#include "qmix/spectral.hpp"
#include "qmix/walk_hamiltonian.hpp"

#include <optional>
#include <vector>

namespace qmix {

/// (1/T) int_0^T exp(-i delta t) dt, stable for small delta*T.
Complex averaging_kernel(double delta, double T);

struct TimeAveragedDistribution {
  Vector probs;
  double T = 0.0;
  double imag_residual = 0.0;
};

struct LimitingDistribution {
  Vector probs;
  double degeneracy_tol = 0.0;
};

/// Precomputes W_fi = <f|v_i><v_i|psi0> for repeated horizons.
///
/// Outcome vectors are the columns of `outcomes`; the identity (node basis)
/// is used when none are given.
class TimeAverager {
 public:
  TimeAverager(const SpectralDecomposition& spec, const Vector& psi0, const Matrix* outcomes = nullptr);
  TimeAverager(const ModeSpectrum& spec, const CVector& psi0, const CMatrix* outcomes = nullptr);

  TimeAveragedDistribution at(double T) const;
  LimitingDistribution limit(std::optional<double> degeneracy_tol = std::nullopt) const;
  const Vector& energies() const noexcept { return energies_; }

 private:
  Vector energies_;
  Matrix w_real_;   // real path
  CMatrix w_cplx_;  // general path
  bool real_ = true;
};

TimeAveragedDistribution time_averaged_distribution(const SpectralDecomposition& spec, const Vector& psi0, double T,
                                                    const Matrix* outcomes = nullptr);
TimeAveragedDistribution time_averaged_distribution(const ModeSpectrum& spec, const CVector& psi0, double T,
                                                    const CMatrix* outcomes = nullptr);

LimitingDistribution limiting_distribution(const SpectralDecomposition& spec, const Vector& psi0,
                                           const Matrix* outcomes = nullptr,
                                           std::optional<double> degeneracy_tol = std::nullopt);
LimitingDistribution limiting_distribution(const ModeSpectrum& spec, const CVector& psi0,
                                           const CMatrix* outcomes = nullptr,
                                           std::optional<double> degeneracy_tol = std::nullopt);

/// Gap quantities of one spectrum. Pair sums run over unordered pairs i < l
/// whose eigenvalues differ by more than `tol`.
struct GapStatistics {
  Vector spectrum;
  double delta = 0.0;        // top minus second largest
  double delta_min = 0.0;    // smallest gap between distinct eigenvalues
  double avg_gap = 0.0;      // (max - min) / (n - 1)
  double sigma = 0.0;
  std::vector<double> sigma_r;  // sigma_r[r-1] for index offset r
  bool simple_spectrum = false;
  double tol = 0.0;

  double sigma1() const { return sigma_r.empty() ? 0.0 : sigma_r.front(); }
  /// 1/delta_min <= sigma <= n log(n) / delta_min.
  bool sandwich_holds() const;
};

GapStatistics gap_statistics(const Vector& ascending, std::optional<double> tol = std::nullopt);

/// (1/epsilon) sum_{i<l, distinct} |<v_i|psi0>||<v_l|psi0>| / |lambda_l - lambda_i|.
double mixing_time_bound(const SpectralDecomposition& spec, const Vector& psi0, double epsilon,
                         std::optional<double> tol = std::nullopt);

struct MixingTrace {
  std::vector<double> times;
  std::vector<double> distances;  // || P(t) - P(inf) ||_1
  std::optional<double> t_mix;
  double epsilon = 0.0;
};

MixingTrace mixing_trace(const SpectralDecomposition& spec, const Vector& psi0, double epsilon,
                         const std::vector<double>& t_grid);

/// `count` points from t_min to t_max, evenly spaced in log t.
std::vector<double> geometric_grid(double t_min, double t_max, int count);

struct GapMapEntry {
  double lambda_low = 0.0;
  double lambda_high = 0.0;
  double chain_gap = 0.0;   // lambda_high - lambda_low
  double energy_gap = 0.0;  // |sqrt(1-lambda_high^2) - sqrt(1-lambda_low^2)|
};

struct GapMap {
  double delta_min_chain = 0.0;
  double delta_min_energy = 0.0;
  double spectral_gap = 0.0;     // 1 - lambda_{n-1}
  double lower_bound = 0.0;      // lambda_1 * delta_min_chain
  double upper_bound = 0.0;      // 2 * delta_min_chain / sqrt(spectral_gap)
  bool lower_holds = false;
  bool upper_holds = false;
  std::vector<GapMapEntry> per_gap;
};

/// Consecutive discriminant gaps and their images under lambda -> sqrt(1 - lambda^2).
GapMap edge_walk_gap_map(const Discriminant& d);

/// Long-time reference-sector distribution of the edge walk started at |psi0,0>.
LimitingDistribution edge_walk_limiting_distribution(const EdgeWalkHamiltonian& h, const Vector& psi0,
                                                     std::optional<double> degeneracy_tol = std::nullopt);
/// Closed form for a simple spectrum: |c_top v_top(f)|^2 + (1/2) sum_k |c_k v_k(f)|^2.
Vector edge_walk_limiting_formula(const EdgeWalkHamiltonian& h, const Vector& psi0);

}  // namespace qmix
