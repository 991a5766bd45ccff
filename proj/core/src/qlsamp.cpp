#include "qmix/qlsamp.hpp"

#include "qmix/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qmix {
namespace {

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

double resolve_tol(const Vector& energies, std::optional<double> tol) {
  if (tol) {
    if (!(*tol >= 0.0)) throw ValidationError("degeneracy tolerance must be nonnegative");
    return *tol;
  }
  return default_degeneracy_tol(energies);
}

void require_ascending(const Vector& v) {
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (v(i) < v(i - 1)) throw ValidationError("spectrum must be sorted ascending");
}

void require_horizon(double T) {
  if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("averaging horizon T must be positive");
}

}  // namespace

Complex averaging_kernel(double delta, double T) {
  const double x = 0.5 * delta * T;
  return std::polar(sinc(x), -x);
}

TimeAverager::TimeAverager(const SpectralDecomposition& spec, const Vector& psi0, const Matrix* outcomes)
    : energies_(spec.values), real_(true) {
  if (psi0.size() != spec.vectors.rows()) throw ValidationError("initial state has wrong dimension");
  require_ascending(energies_);
  const Vector c = spec.coefficients(psi0);
  const Matrix overlaps = outcomes ? Matrix(outcomes->transpose() * spec.vectors) : spec.vectors;
  if (outcomes && outcomes->rows() != spec.vectors.rows()) throw ValidationError("outcome vectors have wrong dimension");
  w_real_ = overlaps * c.asDiagonal();
}

TimeAverager::TimeAverager(const ModeSpectrum& spec, const CVector& psi0, const CMatrix* outcomes)
    : energies_(spec.energies), real_(false) {
  if (psi0.size() != spec.modes.rows()) throw ValidationError("initial state has wrong dimension");
  require_ascending(energies_);
  const CVector c = spec.coefficients(psi0);
  if (outcomes && outcomes->rows() != spec.modes.rows()) throw ValidationError("outcome vectors have wrong dimension");
  const CMatrix overlaps = outcomes ? CMatrix(outcomes->adjoint() * spec.modes) : spec.modes;
  w_cplx_ = overlaps * c.asDiagonal();
}

TimeAveragedDistribution TimeAverager::at(double T) const {
  require_horizon(T);
  const Eigen::Index n = energies_.size();
  TimeAveragedDistribution out;
  out.T = T;
  if (real_) {
    // Re K(delta, T) = sin(delta T) / (delta T); the imaginary part cancels pairwise.
    Matrix k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      k(i, i) = 1.0;
      for (Eigen::Index l = i + 1; l < n; ++l) k(i, l) = k(l, i) = sinc((energies_(i) - energies_(l)) * T);
    }
    out.probs = (w_real_ * k).cwiseProduct(w_real_).rowwise().sum();
    return out;
  }
  CMatrix k(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index l = 0; l < n; ++l) k(i, l) = averaging_kernel(energies_(i) - energies_(l), T);
  const CVector p = (w_cplx_ * k).cwiseProduct(w_cplx_.conjugate()).rowwise().sum();
  out.probs = p.real();
  out.imag_residual = p.size() ? p.imag().cwiseAbs().maxCoeff() : 0.0;
  if (out.imag_residual > 1e-10) throw IllConditionedError("time-averaged probabilities have an imaginary residue");
  return out;
}

LimitingDistribution TimeAverager::limit(std::optional<double> degeneracy_tol) const {
  LimitingDistribution out;
  out.degeneracy_tol = resolve_tol(energies_, degeneracy_tol);
  const auto groups = degeneracy_groups(energies_, out.degeneracy_tol);
  const Eigen::Index d = real_ ? w_real_.rows() : w_cplx_.rows();
  out.probs = Vector::Zero(d);
  for (const auto& g : groups) {
    if (real_) {
      Vector acc = Vector::Zero(d);
      for (Eigen::Index i : g) acc += w_real_.col(i);
      out.probs += acc.cwiseAbs2();
    } else {
      CVector acc = CVector::Zero(d);
      for (Eigen::Index i : g) acc += w_cplx_.col(i);
      out.probs += acc.cwiseAbs2();
    }
  }
  return out;
}

TimeAveragedDistribution time_averaged_distribution(const SpectralDecomposition& spec, const Vector& psi0, double T,
                                                    const Matrix* outcomes) {
  return TimeAverager(spec, psi0, outcomes).at(T);
}

TimeAveragedDistribution time_averaged_distribution(const ModeSpectrum& spec, const CVector& psi0, double T,
                                                    const CMatrix* outcomes) {
  return TimeAverager(spec, psi0, outcomes).at(T);
}

LimitingDistribution limiting_distribution(const SpectralDecomposition& spec, const Vector& psi0,
                                           const Matrix* outcomes, std::optional<double> degeneracy_tol) {
  return TimeAverager(spec, psi0, outcomes).limit(degeneracy_tol);
}

LimitingDistribution limiting_distribution(const ModeSpectrum& spec, const CVector& psi0, const CMatrix* outcomes,
                                           std::optional<double> degeneracy_tol) {
  return TimeAverager(spec, psi0, outcomes).limit(degeneracy_tol);
}

bool GapStatistics::sandwich_holds() const {
  const auto n = static_cast<double>(spectrum.size());
  return 1.0 / delta_min <= sigma && sigma <= n * std::log(n) / delta_min;
}

GapStatistics gap_statistics(const Vector& ascending, std::optional<double> tol) {
  require_ascending(ascending);
  GapStatistics g;
  g.spectrum = ascending;
  g.tol = resolve_tol(ascending, tol);
  const Eigen::Index n = ascending.size();
  if (n < 2 || ascending(n - 1) - ascending(0) <= g.tol)
    throw DegenerateError("gap statistics need at least two distinct eigenvalues");
  g.delta = ascending(n - 1) - ascending(n - 2);
  g.avg_gap = (ascending(n - 1) - ascending(0)) / static_cast<double>(n - 1);
  g.delta_min = std::numeric_limits<double>::infinity();
  g.simple_spectrum = true;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double d = ascending(i + 1) - ascending(i);
    if (d > g.tol)
      g.delta_min = std::min(g.delta_min, d);
    else
      g.simple_spectrum = false;
  }
  g.sigma_r.assign(static_cast<std::size_t>(n - 1), 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index l = i + 1; l < n; ++l) {
      const double d = ascending(l) - ascending(i);
      if (d > g.tol) g.sigma_r[static_cast<std::size_t>(l - i - 1)] += 1.0 / d;
    }
  }
  for (double s : g.sigma_r) g.sigma += s;
  return g;
}

double mixing_time_bound(const SpectralDecomposition& spec, const Vector& psi0, double epsilon,
                         std::optional<double> tol) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ValidationError("epsilon must lie in (0,1)");
  const double t = resolve_tol(spec.values, tol);
  const Vector c = spec.coefficients(psi0).cwiseAbs();
  double sum = 0.0;
  const Eigen::Index n = c.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (c(i) == 0.0) continue;
    for (Eigen::Index l = i + 1; l < n; ++l) {
      const double d = std::abs(spec.values(l) - spec.values(i));
      if (d > t) sum += c(i) * c(l) / d;
    }
  }
  return sum / epsilon;
}

std::vector<double> geometric_grid(double t_min, double t_max, int count) {
  if (!(t_min > 0.0 && t_max >= t_min) || count < 1) throw ValidationError("geometric grid needs 0 < t_min <= t_max");
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = t_max;
    return out;
  }
  const double a = std::log(t_min), b = std::log(t_max);
  for (int k = 0; k < count; ++k) out[static_cast<std::size_t>(k)] = std::exp(a + (b - a) * k / (count - 1));
  out.front() = t_min;
  out.back() = t_max;
  return out;
}

MixingTrace mixing_trace(const SpectralDecomposition& spec, const Vector& psi0, double epsilon,
                         const std::vector<double>& t_grid) {
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  for (std::size_t k = 1; k < t_grid.size(); ++k)
    if (!(t_grid[k] > t_grid[k - 1])) throw ValidationError("mixing trace needs an increasing time grid");
  const TimeAverager avg(spec, psi0);
  const Vector limit = avg.limit().probs;
  MixingTrace tr;
  tr.epsilon = epsilon;
  tr.times = t_grid;
  tr.distances.reserve(t_grid.size());
  for (double t : t_grid) {
    const double d = (avg.at(t).probs - limit).cwiseAbs().sum();
    tr.distances.push_back(d);
    if (!tr.t_mix && d <= epsilon) tr.t_mix = t;
  }
  return tr;
}

GapMap edge_walk_gap_map(const Discriminant& d) {
  const Vector& lam = d.spectrum.values;
  const Eigen::Index n = lam.size();
  if (n < 2) throw DegenerateError("gap map needs at least two eigenvalues");
  const double tol = default_degeneracy_tol(lam);
  GapMap m;
  m.delta_min_chain = std::numeric_limits<double>::infinity();
  m.delta_min_energy = std::numeric_limits<double>::infinity();
  auto energy = [](double l) {
    l = std::clamp(l, -1.0, 1.0);
    return std::sqrt((1.0 - l) * (1.0 + l));
  };
  for (Eigen::Index j = 0; j + 1 < n; ++j) {
    GapMapEntry e;
    e.lambda_low = std::clamp(lam(j), -1.0, 1.0);
    // The top level is the stationary one; its image is energy zero exactly.
    e.lambda_high = j + 2 == n ? 1.0 : std::clamp(lam(j + 1), -1.0, 1.0);
    e.chain_gap = e.lambda_high - e.lambda_low;
    if (!(e.chain_gap > tol)) throw DegenerateError("gap map needs a simple spectrum");
    // sqrt(1-a^2) - sqrt(1-b^2) = (b-a)(b+a) / (sqrt(1-a^2) + sqrt(1-b^2))
    e.energy_gap =
        std::abs(e.chain_gap * (e.lambda_low + e.lambda_high)) / (energy(e.lambda_low) + energy(e.lambda_high));
    m.delta_min_chain = std::min(m.delta_min_chain, e.chain_gap);
    m.delta_min_energy = std::min(m.delta_min_energy, e.energy_gap);
    m.per_gap.push_back(e);
  }
  m.spectral_gap = 1.0 - lam(n - 2);
  m.lower_bound = lam(0) * m.delta_min_chain;
  m.upper_bound = 2.0 * m.delta_min_chain / std::sqrt(m.spectral_gap);
  const double slack = 1e-12 * m.delta_min_energy;
  m.lower_holds = m.delta_min_energy + slack >= m.lower_bound;
  m.upper_holds = m.delta_min_energy <= m.upper_bound + slack;
  return m;
}

LimitingDistribution edge_walk_limiting_distribution(const EdgeWalkHamiltonian& h, const Vector& psi0,
                                                     std::optional<double> degeneracy_tol) {
  if (psi0.size() != h.n) throw ValidationError("initial state has wrong dimension");
  CMatrix outcomes(h.dim(), h.n);
  for (Eigen::Index f = 0; f < h.n; ++f) outcomes.col(f) = h.embed(Vector(Vector::Unit(h.n, f)));
  return limiting_distribution(h.mode_spectrum(), h.embed(psi0), &outcomes, degeneracy_tol);
}

Vector edge_walk_limiting_formula(const EdgeWalkHamiltonian& h, const Vector& psi0) {
  if (psi0.size() != h.n) throw ValidationError("initial state has wrong dimension");
  const Vector c = h.eigvecs.transpose() * psi0;
  Vector probs = (c(h.n - 1) * h.eigvecs.col(h.n - 1)).cwiseAbs2();
  for (Eigen::Index k = 0; k + 1 < h.n; ++k) probs += 0.5 * (c(k) * h.eigvecs.col(k)).cwiseAbs2();
  return probs;
}

}  // namespace qmix
