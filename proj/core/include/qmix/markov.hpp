#pragma once

#include "qmix/spectral.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qmix {

/// Row-stochastic matrix. Construction validates entries and row sums.
class StochasticMatrix {
 public:
  StochasticMatrix() = default;
  /// Throws ValidationError listing every offending entry or row.
  explicit StochasticMatrix(Matrix rows);

  Eigen::Index n() const noexcept { return p_.rows(); }
  const Matrix& matrix() const noexcept { return p_; }
  double operator()(Eigen::Index x, Eigen::Index y) const { return p_(x, y); }

 private:
  Matrix p_;
};

/// Strictly increasing set of state indices.
class MarkedSet {
 public:
  MarkedSet() = default;
  /// Sorts; rejects duplicates and indices outside [0, n).
  MarkedSet(std::vector<Eigen::Index> indices, Eigen::Index n);

  const std::vector<Eigen::Index>& indices() const noexcept { return idx_; }
  std::size_t size() const noexcept { return idx_.size(); }
  bool empty() const noexcept { return idx_.empty(); }
  Eigen::Index universe() const noexcept { return n_; }
  bool contains(Eigen::Index x) const { return mask_.at(static_cast<std::size_t>(x)); }
  /// Complement in index order.
  std::vector<Eigen::Index> unmarked() const;
  bool proper() const noexcept { return !idx_.empty() && static_cast<Eigen::Index>(idx_.size()) < n_; }

 private:
  std::vector<Eigen::Index> idx_;
  std::vector<bool> mask_;
  Eigen::Index n_ = 0;
};

struct StationaryDistribution {
  Vector pi;
  double p_marked = 0.0;

  double pi_min() const { return pi.minCoeff(); }
  Vector sqrt_pi() const { return pi.cwiseSqrt(); }
};

/// Stationary distribution with p_marked filled in for `marked`.
StationaryDistribution with_marked(const Vector& pi, const MarkedSet& marked);

struct ErgodicityReport {
  bool strongly_connected = false;
  bool aperiodic = false;
  bool ergodic = false;
  bool reversible = false;
  double detailed_balance_residual = 0.0;
  double stationarity_residual = 0.0;
  std::optional<Vector> pi;
};

StochasticMatrix make_lazy(const StochasticMatrix& p);

ErgodicityReport check_ergodic_reversible(const StochasticMatrix& p);

/// Stationary distribution by linear solve. Throws DegenerateError on reducible input.
Vector stationary_distribution(const StochasticMatrix& p);

/// Time reversal P*_xy = pi_y p_yx / pi_x.
Matrix time_reversal(const StochasticMatrix& p, const Vector& pi);

struct InterpolatedChain {
  StochasticMatrix base;
  MarkedSet marked;
  double s = 0.0;
  StochasticMatrix result;
};

/// Marked rows become (1-s)*row + s*self-loop; s in [0,1].
InterpolatedChain interpolate(const StochasticMatrix& p, const MarkedSet& marked, double s);

/// Closed-form stationary state of P(s); s in [0,1).
StationaryDistribution stationary_of_interpolated(const StationaryDistribution& pi, const MarkedSet& marked,
                                                  double s);

/// Root of the coefficient balance: 1 - p_M/(1 - p_M). Throws if p_M is outside (0, 1/2).
double s_star(double p_marked);

struct Discriminant {
  Matrix matrix;
  SpectralDecomposition spectrum;
  double raw_asymmetry = 0.0;

  Eigen::Index n() const noexcept { return matrix.rows(); }
  double top() const { return spectrum.values(n() - 1); }
  double second() const { return spectrum.values(n() - 2); }
  double spectral_gap() const { return top() - second(); }
};

/// sqrt(p_xy p_yx), symmetrised, eigendecomposed.
Discriminant discriminant(const StochasticMatrix& p);
/// Requires chain.s < 1.
Discriminant discriminant(const InterpolatedChain& chain);

struct UMSplit {
  Vector u_state;
  Vector m_state;
  Vector v_top;
  double coef_u = 0.0;
  double coef_m = 0.0;
};

UMSplit u_m_split(const StationaryDistribution& pi, const MarkedSet& marked, double s);

}  // namespace qmix
