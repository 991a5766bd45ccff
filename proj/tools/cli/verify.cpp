#include "commands.hpp"

#include <qmix/chain_generators.hpp>
#include <qmix/classical_times.hpp>
#include <qmix/pointer_sim.hpp>
#include <qmix/qlsamp.hpp>
#include <qmix/rng.hpp>
#include <qmix/walk_hamiltonian.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace qmix::cli {
namespace {

StochasticMatrix chain_for(std::uint64_t master, std::uint64_t k, Eigen::Index n) {
  Rng rng(derive_seed(master, {0x7e51ULL, k}));
  return random_reversible_chain(n, rng);
}

// Pointer amplitude below 1/2 across a gap/energy grid, then the filtering
// guarantee on random walk Hamiltonians.
void suite_pointer(const RunConfig& cfg, Artifacts& art) {
  auto csv = art.csv("pointer_grid.csv", {"gap", "energy", "qubits", "abs_gamma"});
  double worst = 0.0;
  int points = 0;
  for (int gi = 0; gi < 40; ++gi) {
    const double gap = std::pow(10.0, -3.0 + 3.0 * gi / 39.0);
    const PointerConfig c = PointerConfig::for_gap(gap, 0.1);
    for (int ei = 0; ei < 25; ++ei) {
      const double e = (ei % 2 ? -1.0 : 1.0) * (gap + (1.0 - gap) * ei / 24.0);
      const double g = std::abs(pointer_zero_amplitude(e, c.tau, c.l));
      csv.row({gap, e, static_cast<long long>(c.l), g});
      worst = std::max(worst, g);
      ++points;
    }
  }
  art.check(worst < 0.5, "max |gamma| over " + std::to_string(points) + " grid points = " + io::format_double(worst) +
                             " < 1/2");
  int fails = 0, runs = 0;
  for (std::uint64_t k = 0; k < 20; ++k) {
    const Eigen::Index n = 4 + static_cast<Eigen::Index>(k % 9);
    const Discriminant d = discriminant(chain_for(cfg.master_seed, k, n));
    const EdgeWalkHamiltonian h = build_effective(d);
    const Eigen::Index start = static_cast<Eigen::Index>(k) % n;
    const double alpha_sq = std::pow(d.spectrum.vectors(start, n - 1), 2);
    for (double eps : {0.1, 0.01}) {
      const PointerConfig pc = PointerConfig::for_gap(h.gap, eps * alpha_sq);
      const PostselectResult r = run_blocks_postselect(h.mode_spectrum(), h.embed(Vector(Vector::Unit(n, start))), pc);
      const Complex top = r.state(h.top_index());
      CVector aligned = r.state * (std::abs(top) / top);
      aligned(h.top_index()) -= 1.0;
      if (aligned.norm() > eps || r.success_prob < alpha_sq - eps) ++fails;
      ++runs;
    }
  }
  art.check(fails == 0, "filtered state within epsilon of the top mode with probability >= alpha^2 - epsilon (" +
                            std::to_string(runs - fails) + "/" + std::to_string(runs) + ")");
}

// Effective energies against a dense eigensolve, and the full build's zero count.
void suite_spectral(const RunConfig& cfg, Artifacts& art) {
  double worst = 0.0;
  int zero_bad = 0;
  for (std::uint64_t k = 0; k < 20; ++k) {
    const Eigen::Index n = 3 + static_cast<Eigen::Index>(k % 10);
    const InterpolatedChain chain =
        interpolate(chain_for(cfg.master_seed, 100 + k, n), MarkedSet({0}, n), 0.15 * static_cast<double>(k % 6));
    const Discriminant d = discriminant(chain);
    const EdgeWalkHamiltonian h = build_effective(d);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h.matrix());
    const Vector e = h.energies();
    worst = std::max(worst, (es.eigenvalues() - e).cwiseAbs().maxCoeff());
    if (n <= 6) {
      Eigen::SelfAdjointEigenSolver<CMatrix> fs(build_full(chain).matrix());
      const auto zeros = (fs.eigenvalues().array().abs() < 1e-8).count();
      zero_bad += zeros != (n - 1) * (n - 1) + 1;
    }
  }
  art.check(worst <= 1e-10, "effective energies match a dense eigensolve (max err " + io::format_double(worst) + ")");
  art.check(zero_bad == 0, "full build has (n-1)^2 + 1 zero energies");
}

// Rescaled interpolated hitting times are constant in s and match a direct solve.
void suite_hitting(const RunConfig& cfg, Artifacts& art) {
  double worst_inv = 0.0, worst_direct = 0.0;
  for (std::uint64_t k = 0; k < 10; ++k) {
    const Eigen::Index n = 4 + static_cast<Eigen::Index>(k % 9);
    const StochasticMatrix p = chain_for(cfg.master_seed, 200 + k, n);
    const MarkedSet m({0}, n);
    const StationaryDistribution pi = with_marked(stationary_distribution(p), m);
    if (!(pi.p_marked < 0.5)) continue;
    std::vector<double> grid;
    for (int i = 0; i <= 19; ++i) grid.push_back(0.05 * i);
    worst_inv = std::max(worst_inv, extended_hitting_time(p, pi, m, grid).invariance_residual);
    // Absorption times (I - P_UU)^{-1} 1 averaged under pi restricted to U.
    const Matrix q = p.matrix().bottomRightCorner(n - 1, n - 1);
    const Vector h = (Matrix::Identity(n - 1, n - 1) - q).fullPivLu().solve(Vector::Ones(n - 1));
    const Vector w = pi.pi.tail(n - 1) / (1.0 - pi.p_marked);
    const double direct = w.dot(h);
    worst_direct = std::max(worst_direct, std::abs(hitting_time_spectral(p, pi, m).ht - direct) / direct);
  }
  art.check(worst_inv <= 1e-8, "HT+ invariance residual " + io::format_double(worst_inv) + " <= 1e-8");
  art.check(worst_direct <= 1e-8, "spectral hitting time vs linear solve " + io::format_double(worst_direct) + " <= 1e-8");
}

void suite_sandwich(const RunConfig& cfg, Artifacts& art) {
  int checked = 0, bad = 0;
  for (std::uint64_t k = 0; k < 50; ++k) {
    const Eigen::Index n = 3 + static_cast<Eigen::Index>(k % 30);
    const GapStatistics g = gap_statistics(discriminant(chain_for(cfg.master_seed, 300 + k, n)).spectrum.values, 1e-12);
    if (!g.simple_spectrum) continue;
    ++checked;
    bad += !g.sandwich_holds();
  }
  art.check(checked > 0 && bad == 0, "pair-sum sandwich on " + std::to_string(checked) + " simple spectra");
}

}  // namespace

void run_verify(const RunConfig& cfg, Artifacts& art) {
  const std::string suite = cfg.text_or("suite", "all");
  const std::map<std::string, void (*)(const RunConfig&, Artifacts&)> suites = {
      {"pointer", suite_pointer}, {"spectral", suite_spectral}, {"hitting", suite_hitting}, {"sandwich", suite_sandwich}};
  if (suite == "all") {
    for (const auto& [name, fn] : suites) {
      art.note("[" + name + "]");
      fn(cfg, art);
    }
    return;
  }
  // "lemma1" is an accepted alias for the pointer suite.
  const auto it = suites.find(suite == "lemma1" ? "pointer" : suite);
  if (it == suites.end()) throw InputError("unknown suite '" + suite + "' (lemma1 or pointer, spectral, hitting, sandwich, all)");
  it->second(cfg, art);
}

}  // namespace qmix::cli
