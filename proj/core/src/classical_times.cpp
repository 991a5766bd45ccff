#include "qmix/classical_times.hpp"

#include "qmix/errors.hpp"
#include "qmix/numeric_policy.hpp"
#include "qmix/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qmix {
namespace {

constexpr std::uint64_t kTrialBlock = 4096;

Vector unmarked_overlap_state(const StationaryDistribution& pi, const MarkedSet& marked) {
  Vector u = Vector::Zero(pi.pi.size());
  for (Eigen::Index x : marked.unmarked()) u(x) = std::sqrt(pi.pi(x));
  return u / u.norm();
}

void require_proper(const MarkedSet& marked, Eigen::Index n) {
  if (marked.universe() != n) throw ValidationError("marked set and chain sizes differ");
  if (!marked.proper()) throw ValidationError("marked set must be a proper nonempty subset");
}

std::size_t sample_cdf(const double* cdf, std::size_t len, double u) {
  const double* it = std::upper_bound(cdf, cdf + len, u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cdf), len - 1);
}

double tv_from_power(const Matrix& pt, const Vector& pi) {
  double worst = 0.0;
  for (Eigen::Index x = 0; x < pt.rows(); ++x)
    worst = std::max(worst, 0.5 * (pt.row(x).transpose() - pi).cwiseAbs().sum());
  return worst;
}

}  // namespace

HittingTimeReport hitting_time_spectral(const StochasticMatrix& p, const StationaryDistribution& pi,
                                        const MarkedSet& marked) {
  require_proper(marked, p.n());
  const std::vector<Eigen::Index> u = marked.unmarked();
  const auto nu = static_cast<Eigen::Index>(u.size());
  Matrix block(nu, nu);
  for (Eigen::Index a = 0; a < nu; ++a)
    for (Eigen::Index b = 0; b < nu; ++b) block(a, b) = std::sqrt(p(u[a], u[b]) * p(u[b], u[a]));
  const SpectralDecomposition spec = eigh(block);

  Vector ustate(nu);
  for (Eigen::Index a = 0; a < nu; ++a) ustate(a) = std::sqrt(pi.pi(u[a]));
  ustate /= ustate.norm();
  const Vector c = spec.coefficients(ustate);

  HittingTimeReport r;
  r.method = HittingMethod::spectral;
  const double tol = numeric_policy().hitting_singular_tol;
  for (Eigen::Index j = 0; j < nu; ++j) {
    const double denom = 1.0 - spec.values(j);
    if (denom <= tol) {
      std::ostringstream os;
      os << "hitting time: absorbing-block eigenvalue " << j << " = " << spec.values(j)
         << " is numerically 1 (marked set unreachable?)";
      throw IllConditionedError(os.str());
    }
    r.ht += c(j) * c(j) / denom;
  }
  r.degenerate_spectrum = degeneracy_groups(spec.values, default_degeneracy_tol(spec.values)).size() <
                          static_cast<std::size_t>(nu);
  return r;
}

HittingTimeReport hitting_time_montecarlo(const StochasticMatrix& p, const MarkedSet& marked, std::uint64_t trials,
                                          std::uint64_t seed, std::uint64_t max_total_steps) {
  if (trials == 0) throw ValidationError("Monte Carlo hitting time needs at least one trial");
  if (marked.universe() != p.n()) throw ValidationError("marked set and chain sizes differ");
  if (marked.empty()) throw ValidationError("marked set must be nonempty");
  const Eigen::Index n = p.n();
  const auto un = static_cast<std::size_t>(n);

  std::vector<double> start_cdf(un);
  std::vector<double> row_cdf(un * un);
  {
    const Vector pi = stationary_distribution(p);
    double acc = 0.0;
    for (std::size_t x = 0; x < un; ++x) start_cdf[x] = (acc += pi(static_cast<Eigen::Index>(x)));
    for (std::size_t x = 0; x < un; ++x) {
      acc = 0.0;
      for (std::size_t y = 0; y < un; ++y)
        row_cdf[x * un + y] = (acc += p(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)));
    }
  }

  double sum_all = 0.0, sumsq_all = 0.0, sum_u = 0.0, sumsq_u = 0.0;
  std::uint64_t n_u = 0, total_steps = 0;
  const std::uint64_t blocks = (trials + kTrialBlock - 1) / kTrialBlock;
  for (std::uint64_t b = 0; b < blocks; ++b) {
    Rng rng(derive_seed(seed, {b}));
    const std::uint64_t count = std::min(kTrialBlock, trials - b * kTrialBlock);
    for (std::uint64_t t = 0; t < count; ++t) {
      std::size_t x = sample_cdf(start_cdf.data(), un, uniform01(rng) * start_cdf.back());
      const bool started_marked = marked.contains(static_cast<Eigen::Index>(x));
      std::uint64_t steps = 0;
      while (!marked.contains(static_cast<Eigen::Index>(x))) {
        const double* row = row_cdf.data() + x * un;
        x = sample_cdf(row, un, uniform01(rng) * row[un - 1]);
        ++steps;
        if (++total_steps > max_total_steps)
          throw TimeoutError("Monte Carlo hitting time exceeded the step budget of " +
                             std::to_string(max_total_steps));
      }
      const auto s = static_cast<double>(steps);
      sum_all += s;
      sumsq_all += s * s;
      if (!started_marked) {
        sum_u += s;
        sumsq_u += s * s;
        ++n_u;
      }
    }
  }

  auto mean_stderr = [](double sum, double sumsq, std::uint64_t k) -> std::pair<double, double> {
    if (k == 0) return {0.0, 0.0};
    const double kd = static_cast<double>(k);
    const double mean = sum / kd;
    if (k < 2) return {mean, 0.0};
    const double var = std::max(0.0, (sumsq - kd * mean * mean) / (kd - 1.0));
    return {mean, std::sqrt(var / kd)};
  };

  HittingTimeReport r;
  r.method = HittingMethod::montecarlo;
  r.trials = trials;
  r.unmarked_starts = n_u;
  std::tie(r.raw_mean, r.raw_stderr) = mean_stderr(sum_all, sumsq_all, trials);
  std::tie(r.ht, r.stderr_) = mean_stderr(sum_u, sumsq_u, n_u);
  return r;
}

double interpolated_hitting_time(const StochasticMatrix& p, const StationaryDistribution& pi, const MarkedSet& marked,
                                 double s) {
  require_proper(marked, p.n());
  const Discriminant d = discriminant(interpolate(p, marked, s));
  const Vector c = d.spectrum.coefficients(unmarked_overlap_state(pi, marked));
  double ht = 0.0;
  for (Eigen::Index j = 0; j + 1 < d.n(); ++j) ht += c(j) * c(j) / (1.0 - d.spectrum.values(j));
  return ht;
}

ExtendedHittingTimeReport extended_hitting_time(const StochasticMatrix& p, const StationaryDistribution& pi,
                                                const MarkedSet& marked, const std::vector<double>& s_grid) {
  if (s_grid.empty()) throw ValidationError("extended hitting time needs a nonempty s grid");
  require_proper(marked, p.n());
  const StationaryDistribution base = with_marked(pi.pi, marked);
  const double pm = base.p_marked;
  const Vector ustate = unmarked_overlap_state(base, marked);

  ExtendedHittingTimeReport r;
  for (double s : s_grid) {
    if (!(s >= 0.0 && s <= 1.0 - 1e-6)) throw ValidationError("extended hitting time: s must lie in [0, 1-1e-6]");
    const Discriminant d = discriminant(interpolate(p, marked, s));
    const Vector c = d.spectrum.coefficients(ustate);
    double ht = 0.0, weight = 0.0;
    for (Eigen::Index j = 0; j + 1 < d.n(); ++j) {
      ht += c(j) * c(j) / (1.0 - d.spectrum.values(j));
      weight += c(j) * c(j);
    }
    const double scale = 1.0 - s * (1.0 - pm);
    r.per_s_values.emplace_back(s, ht);
    r.per_s_ht_plus.push_back(ht * scale * scale / (pm * pm));
    r.per_s_gap_bound.push_back(weight / (1.0 - d.second()));
  }
  double mean = 0.0;
  for (double v : r.per_s_ht_plus) mean += v;
  mean /= static_cast<double>(r.per_s_ht_plus.size());
  r.ht_plus = mean;
  for (double v : r.per_s_ht_plus) r.invariance_residual = std::max(r.invariance_residual, std::abs(v - mean) / mean);
  r.consistent = r.invariance_residual <= 1e-6;
  return r;
}

double worst_tv_distance(const StochasticMatrix& p, const Vector& pi, long long t) {
  if (t < 0) throw ValidationError("time must be nonnegative");
  Matrix result = Matrix::Identity(p.n(), p.n());
  Matrix base = p.matrix();
  for (unsigned long long e = static_cast<unsigned long long>(t); e; e >>= 1) {
    if (e & 1ULL) result = (result * base).eval();
    if (e > 1) base = (base * base).eval();
  }
  return tv_from_power(result, pi);
}

std::vector<double> tv_trace(const StochasticMatrix& p, const Vector& pi, const std::vector<long long>& times) {
  std::vector<double> out;
  out.reserve(times.size());
  Matrix power = Matrix::Identity(p.n(), p.n());
  long long current = 0;
  for (long long t : times) {
    if (t < current) throw ValidationError("tv_trace needs ascending times");
    for (; current < t; ++current) power = (power * p.matrix()).eval();
    out.push_back(tv_from_power(power, pi));
  }
  return out;
}

ClassicalMixingReport classical_mixing_time(const StochasticMatrix& p, const StationaryDistribution& pi,
                                            double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ValidationError("epsilon must lie in (0,1)");
  ClassicalMixingReport r;
  r.epsilon = epsilon;
  const Discriminant d = discriminant(p);
  r.spectral_gap = d.spectral_gap();
  r.t_mix_bound = std::log(1.0 / (epsilon * pi.pi_min())) / r.spectral_gap;

  const Eigen::Index n = p.n();
  if (tv_from_power(Matrix::Identity(n, n), pi.pi) <= epsilon) return r;

  // squares[k] = P^(2^k)
  std::vector<Matrix> squares{p.matrix()};
  long long hi = 1;
  while (tv_from_power(squares.back(), pi.pi) > epsilon) {
    if (hi > (1LL << 52)) throw IllConditionedError("classical mixing time did not converge");
    squares.push_back(squares.back() * squares.back());
    hi *= 2;
  }
  auto power = [&](long long t) {
    Matrix m = Matrix::Identity(n, n);
    for (std::size_t k = 0; t; ++k, t >>= 1)
      if (t & 1LL) m = (m * squares[k]).eval();
    return m;
  };
  long long lo = hi / 2;  // tv(lo) > epsilon (or lo == 0)
  while (hi - lo > 1) {
    const long long mid = lo + (hi - lo) / 2;
    if (tv_from_power(power(mid), pi.pi) <= epsilon)
      hi = mid;
    else
      lo = mid;
  }
  r.t_mix_empirical = hi;
  return r;
}

}  // namespace qmix
