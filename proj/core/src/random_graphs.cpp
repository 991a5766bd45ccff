#include "qmix/random_graphs.hpp"

#include "qmix/errors.hpp"
#include "qmix/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <thread>

namespace qmix {
namespace {

bool graph_connected(const Matrix& adj) {
  const Eigen::Index n = adj.rows();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<Eigen::Index> stack{0};
  seen[0] = true;
  Eigen::Index count = 1;
  while (!stack.empty()) {
    const Eigen::Index x = stack.back();
    stack.pop_back();
    for (Eigen::Index y = 0; y < n; ++y) {
      if (adj(x, y) != 0.0 && !seen[static_cast<std::size_t>(y)]) {
        seen[static_cast<std::size_t>(y)] = true;
        ++count;
        stack.push_back(y);
      }
    }
  }
  return count == n;
}

// Runs job(k) for k in [0, count) on `threads` workers; each slot is written once.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& job) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || count < 2) {
    for (std::size_t k = 0; k < count; ++k) job(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t k = next++; k < count; k = next++) job(k);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void require_sizes(const std::vector<Eigen::Index>& sizes, Eigen::Index min_n) {
  if (sizes.empty()) throw ValidationError("experiment needs at least one size");
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    if (sizes[k] < min_n) throw ValidationError("experiment sizes must be >= " + std::to_string(min_n));
    if (k && sizes[k] <= sizes[k - 1]) throw ValidationError("experiment sizes must increase");
  }
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

std::uint64_t cell_seed(std::uint64_t master, Eigen::Index n, int seed_index) {
  return derive_seed(master, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(seed_index)});
}

GnpSample sample_gnp(Eigen::Index n, double p, std::uint64_t seed, bool with_spectrum, Eigen::Index max_n) {
  if (n < 2) throw ValidationError("G(n,p) needs n >= 2");
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("G(n,p) needs p in (0,1)");
  if (n > max_n) throw ValidationError("G(n,p) size " + std::to_string(n) + " exceeds cap " + std::to_string(max_n));
  GnpSample g;
  g.n = n;
  g.p = p;
  g.seed = seed;
  g.adjacency = Matrix::Zero(n, n);
  Rng rng(splitmix64(seed));
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = x + 1; y < n; ++y) {
      if (uniform01(rng) < p) {
        g.adjacency(x, y) = g.adjacency(y, x) = 1.0;
        ++g.edges;
      }
    }
  }
  g.normalized = g.adjacency / (static_cast<double>(n) * p);
  g.connected = graph_connected(g.adjacency);
  if (with_spectrum) g.spectrum = eigh(g.normalized);
  return g;
}

double SemicircleModel::density(double x) const {
  const double r = radius_normalized;
  if (std::abs(x) >= r) return 0.0;
  return 2.0 / (std::numbers::pi * r * r) * std::sqrt(r * r - x * x);
}

double SemicircleModel::cdf(double x) const {
  const double r = radius_normalized;
  if (x <= -r) return 0.0;
  if (x >= r) return 1.0;
  return 0.5 + x * std::sqrt(r * r - x * x) / (std::numbers::pi * r * r) + std::asin(x / r) / std::numbers::pi;
}

SemicircleModel classical_locations(Eigen::Index n, double p) {
  if (n < 4) throw ValidationError("classical locations need n >= 4");
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("classical locations need p in (0,1)");
  SemicircleModel m;
  m.n = n;
  m.p = p;
  const auto nd = static_cast<double>(n);
  m.radius = 2.0 * std::sqrt(nd * p * (1.0 - p));
  m.radius_normalized = 2.0 * std::sqrt((1.0 - p) / (nd * p));
  m.locations.resize(static_cast<std::size_t>(n - 1));
  for (Eigen::Index i = 1; i < n; ++i) {
    const double target = static_cast<double>(i) / nd;
    double lo = -m.radius_normalized, hi = m.radius_normalized;
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
      const double f = m.cdf(mid);
      if (std::abs(f - target) <= 1e-12) break;
      (f < target ? lo : hi) = mid;
      mid = 0.5 * (lo + hi);
    }
    m.locations[static_cast<std::size_t>(i - 1)] = mid;
  }
  return m;
}

double spacing_constant(const SemicircleModel& m) {
  const auto nd = static_cast<double>(m.n);
  const double scale = std::pow(nd, 7.0 / 6.0) * std::sqrt(m.p);
  double c = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 1; 2 * i <= m.n; ++i) {
    const double gi = m.location(i);
    const double wi = scale * std::cbrt(static_cast<double>(i));
    for (Eigen::Index r = 1; r <= m.n - 2 * i && i + r <= m.n - 1; ++r)
      c = std::min(c, (m.location(i + r) - gi) * wi / static_cast<double>(r));
  }
  return c;
}

double rigidity_envelope(Eigen::Index n, double p, Eigen::Index i, double eps) {
  const auto nd = static_cast<double>(n);
  const double alpha = static_cast<double>(std::max(i, n - i));
  const double phi = std::log(p) / std::log(nd);
  return std::pow(nd, eps) * (std::pow(nd, -2.0 / 3.0) / std::cbrt(alpha) + std::pow(nd, -1.0 - phi)) /
         std::sqrt(p * nd);
}

double semicircle_ks_distance(const Vector& ascending, const SemicircleModel& m) {
  const Eigen::Index bulk = ascending.size() - 1;
  if (bulk < 1) throw ValidationError("KS distance needs at least two eigenvalues");
  const auto bd = static_cast<double>(bulk);
  double ks = 0.0;
  for (Eigen::Index k = 0; k < bulk; ++k) {
    const double f = m.cdf(ascending(k));
    ks = std::max({ks, std::abs(f - static_cast<double>(k) / bd), std::abs(f - static_cast<double>(k + 1) / bd)});
  }
  return ks;
}

RmtReport rmt_report(const GnpSample& sample, const SemicircleModel& model, double eps_exponent, double simple_tol) {
  const Vector& lam = sample.spectrum.values;
  const Eigen::Index n = lam.size();
  if (n != sample.n || n < 4) throw ValidationError("rmt_report needs a computed spectrum with n >= 4");
  if (model.n != n) throw ValidationError("rmt_report: model and sample sizes differ");
  RmtReport r;
  r.lambda_top = lam(n - 1);
  r.lambda_second = lam(n - 2);
  const GapStatistics g = gap_statistics(lam, simple_tol);
  r.delta_min = g.delta_min;
  r.sigma1 = g.sigma1();
  r.sigma = g.sigma;
  r.simple_spectrum = g.simple_spectrum;
  r.deloc_max = sample.spectrum.vectors.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 1; i < n; ++i) {
    const double env = rigidity_envelope(n, sample.p, i, eps_exponent);
    const double dev = std::abs(lam(i - 1) - model.location(i));
    r.rigidity_worst_ratio = std::max(r.rigidity_worst_ratio, dev / env);
    if (dev > env) ++r.rigidity_violations;
  }
  r.avg_bulk_gap = (lam(n - 2) - lam(0)) / static_cast<double>(n - 2);

  const auto nd = static_cast<double>(n);
  const double scale = std::pow(nd, 1.5) * std::sqrt(sample.p);
  std::vector<double> xs;
  for (Eigen::Index i = 0; i + 2 < n; ++i) xs.push_back((lam(i + 1) - lam(i)) * scale);
  std::sort(xs.begin(), xs.end());
  const double logn = std::log(nd);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double cdf = static_cast<double>(k + 1) / static_cast<double>(xs.size());
    r.tail_hist.push_back({xs[k], cdf});
    if (xs[k] > 0.0) r.tail_constant = std::max(r.tail_constant, cdf / (xs[k] * logn));
  }
  r.ks_distance = semicircle_ks_distance(lam, model);
  return r;
}

std::vector<double> mixing_grid(const MixingExperimentConfig& cfg) {
  return geometric_grid(1.0, cfg.t_max, cfg.grid_points);
}

MixingExponentResult mixing_exponent_experiment(const MixingExperimentConfig& cfg) {
  require_sizes(cfg.sizes, 10);
  if (cfg.seeds_per_size < 1) throw ValidationError("need at least one seed per size");
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) throw ValidationError("epsilon must lie in (0,1)");
  if (!(cfg.t_max > 1.0)) throw ValidationError("t_max must exceed 1");
  const std::vector<double> grid = mixing_grid(cfg);

  MixingExponentResult res;
  for (Eigen::Index n : cfg.sizes)
    for (int s = 0; s < cfg.seeds_per_size; ++s) {
      MixingCell c;
      c.n = n;
      c.seed_index = s;
      c.seed = cell_seed(cfg.master_seed, n, s);
      res.cells.push_back(c);
    }

  parallel_for(res.cells.size(), cfg.threads, [&](std::size_t k) {
    MixingCell& c = res.cells[k];
    const GnpSample g = sample_gnp(c.n, cfg.p, c.seed);
    const Vector psi0 = Vector::Unit(c.n, 0);
    const TimeAverager avg(g.spectrum, psi0);
    const Vector limit = avg.limit().probs;
    c.limit_uniform_distance = (limit.array() - 1.0 / static_cast<double>(c.n)).abs().maxCoeff();
    const GapStatistics st = gap_statistics(g.spectrum.values, 1e-12);
    c.sigma = st.sigma;
    c.sigma1 = st.sigma1();
    c.delta_min = st.delta_min;
    c.deloc_max = g.spectrum.vectors.cwiseAbs().maxCoeff();
    for (double t : grid) {
      const double dist = (avg.at(t).probs - limit).cwiseAbs().sum();
      if (cfg.keep_traces) c.distances.push_back(dist);
      if (!c.t_mix && dist <= cfg.epsilon) {
        c.t_mix = t;
        if (!cfg.keep_traces) break;
      }
    }
  });

  std::vector<double> xs, ys;
  for (Eigen::Index n : cfg.sizes) {
    std::vector<double> vals;
    for (const auto& c : res.cells) {
      if (c.n != n) continue;
      if (c.t_mix)
        vals.push_back(*c.t_mix);
      else
        ++res.flagged;
    }
    if (vals.empty()) continue;
    const double med = median(vals);
    res.per_size_median.emplace_back(n, med);
    xs.push_back(std::log(static_cast<double>(n)));
    ys.push_back(std::log(med));
  }
  if (xs.size() >= 2) {
    const auto m = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      sx += xs[k];
      sy += ys[k];
      sxx += xs[k] * xs[k];
      sxy += xs[k] * ys[k];
    }
    res.exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    res.intercept = (sy - res.exponent * sx) / m;
    double ss = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const double e = ys[k] - (res.exponent * xs[k] + res.intercept);
      ss += e * e;
    }
    res.fit_residual = std::sqrt(ss / m);
  } else {
    res.exponent = std::numeric_limits<double>::quiet_NaN();
  }
  return res;
}

std::vector<SigmaCell> sigma_scaling_experiment(const SigmaScalingConfig& cfg) {
  require_sizes(cfg.sizes, 4);
  if (cfg.seeds_per_size < 1) throw ValidationError("need at least one seed per size");
  std::vector<SigmaCell> cells;
  for (Eigen::Index n : cfg.sizes)
    for (int s = 0; s < cfg.seeds_per_size; ++s) {
      SigmaCell c;
      c.n = n;
      c.seed_index = s;
      c.seed = cell_seed(cfg.master_seed, n, s);
      cells.push_back(c);
    }
  const double e = 2.5 + cfg.exponent_slack;
  parallel_for(cells.size(), cfg.threads, [&](std::size_t k) {
    SigmaCell& c = cells[k];
    const GnpSample g = sample_gnp(c.n, cfg.p, c.seed);
    const GapStatistics st = gap_statistics(g.spectrum.values, 1e-12);
    const auto nd = static_cast<double>(c.n);
    const double sp = std::sqrt(cfg.p);
    c.sigma1 = st.sigma1();
    c.sigma = st.sigma;
    c.delta_min = st.delta_min;
    c.simple_spectrum = st.simple_spectrum;
    c.sandwich = st.sandwich_holds();
    c.deloc_max = g.spectrum.vectors.cwiseAbs().maxCoeff();
    const Vector& lam = g.spectrum.values;
    c.avg_bulk_gap = (lam(c.n - 2) - lam(0)) / (nd - 2.0);
    c.sigma1_ok = c.sigma1 <= std::pow(nd, e) * sp;
    c.sigma_ok = c.sigma <= std::pow(nd, e - std::log(cfg.p) / std::log(nd)) * sp;
    c.delta_min_ok = c.delta_min >= std::pow(nd, -e) / sp;
    c.deloc_ok = c.deloc_max <= std::pow(nd, -0.5 + cfg.exponent_slack);
    const double ref = 1.0 / (std::pow(nd, 1.5) * sp);
    c.avg_gap_ok = c.avg_bulk_gap <= 4.0 * ref && c.avg_bulk_gap >= ref / 4.0;
  });
  return cells;
}

}  // namespace qmix
