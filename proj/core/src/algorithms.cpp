#include "qmix/algorithms.hpp"

#include "qmix/errors.hpp"
#include "qmix/rng.hpp"

#include <cmath>

namespace qmix {
namespace {

void require_valid(const StochasticMatrix& p, const WalkOptions& opts) {
  if (opts.trust_input) return;
  const ErgodicityReport r = check_ergodic_reversible(p);
  if (!r.ergodic) throw ValidationError("chain is not ergodic");
  if (!r.reversible) throw ValidationError("chain is not reversible");
}

PointerConfig sizing(const FilterStage& st, double eps_prime, PointerSizing how) {
  if (how == PointerSizing::hamiltonian_gap) return PointerConfig::for_gap(st.hamiltonian_gap, eps_prime);
  PointerConfig from_chain = PointerConfig::for_gap(st.chain_gap, eps_prime);
  PointerConfig cfg = PointerConfig::for_gap(st.hamiltonian_gap, eps_prime);
  cfg.l = std::max(cfg.l, from_chain.l);
  return cfg;
}

// Filters `system` (in the reference sector) towards the zero mode of H(s).
// Returns the post-selected state projected back onto the reference sector
// (effective) or the whole n^2 vector (full).
struct StageResult {
  FilterStage info;
  CVector system;  // reference-sector amplitudes, unnormalised
  CVector full;    // full representation only
};

StageResult run_stage(const StochasticMatrix& p, const MarkedSet& marked, double s, const CVector& system,
                      const CVector* full_input, double eps_prime, const WalkOptions& opts) {
  const InterpolatedChain chain = interpolate(p, marked, s);
  const Discriminant d = discriminant(chain);
  const EdgeWalkHamiltonian h = build_effective(d);
  StageResult out;
  out.info.s = s;
  out.info.chain_gap = 1.0 - h.lambdas(h.n - 2);
  out.info.hamiltonian_gap = h.gap;
  out.info.config = sizing(out.info, eps_prime, opts.sizing);
  const Vector top = d.spectrum.vectors.col(d.n() - 1);

  if (opts.representation == Representation::effective) {
    const CVector psi = h.embed(system);
    out.info.top_overlap_sq = std::norm(top.cast<Complex>().dot(system)) / system.squaredNorm();
    const PostselectResult r = run_blocks_postselect(h.mode_spectrum(), psi, out.info.config);
    out.info.success_prob = r.success_prob;
    out.info.perp_weight = h.perp_weight(r.state);
    out.system = h.reference_sector(r.state);
    return out;
  }

  const FullHamiltonian f = build_full(chain, opts.full_max_n);
  const CVector psi = full_input ? *full_input : f.embed(system);
  out.info.top_overlap_sq = std::norm(f.embed(top.cast<Complex>()).dot(psi)) / psi.squaredNorm();
  const PostselectResult r = run_blocks_postselect(f.spectrum(), psi, out.info.config);
  out.info.success_prob = r.success_prob;
  out.system = f.reference_sector(r.state);
  out.info.perp_weight = std::max(0.0, 1.0 - out.system.squaredNorm());
  out.full = r.state;
  return out;
}

}  // namespace

Eigen::Index sample_index(const Vector& weights, std::uint64_t seed) {
  if (weights.size() == 0) throw ValidationError("sample_index: empty weights");
  const double total = weights.sum();
  if (!(total > 0.0)) throw DegenerateError("sample_index: weights sum to zero");
  Rng rng(derive_seed(seed, {0x5eedULL}));
  const double u = uniform01(rng) * total;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    acc += weights(i);
    if (u < acc) return i;
  }
  return weights.size() - 1;
}

SearchOutcome spatial_search(const StochasticMatrix& p, const StationaryDistribution& pi, const MarkedSet& marked,
                             double epsilon, std::uint64_t seed, const WalkOptions& opts) {
  if (!(epsilon > 0.0 && epsilon < 0.25)) throw ValidationError("spatial search needs epsilon in (0, 1/4)");
  if (marked.universe() != p.n() || !marked.proper())
    throw ValidationError("spatial search needs a proper nonempty marked set");
  require_valid(p, opts);
  const StationaryDistribution base = with_marked(pi.pi, marked);
  SearchOutcome out;
  out.p_marked = base.p_marked;
  out.s_star = s_star(base.p_marked);

  const CVector start = base.sqrt_pi().cast<Complex>();
  const StageResult st = run_stage(p, marked, out.s_star, start, nullptr, epsilon / 2.0, opts);
  out.stage = st.info;
  out.total_time = st.info.config.total_time();
  out.node_probs = st.system.cwiseAbs2();
  for (Eigen::Index x : marked.indices()) out.marked_weight += out.node_probs(x);
  out.success_prob = st.info.success_prob * out.marked_weight;
  out.sampled_node = sample_index(out.node_probs, seed);
  out.is_marked = marked.contains(out.sampled_node);
  return out;
}

QSSampOutcome qssamp_prepare(const StochasticMatrix& p, Eigen::Index j, double epsilon, std::optional<double> pi_j,
                             const WalkOptions& opts) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ValidationError("QSSamp needs epsilon in (0,1)");
  if (j < 0 || j >= p.n()) throw ValidationError("QSSamp start state out of range");
  require_valid(p, opts);
  const MarkedSet marked({j}, p.n());
  const double weight = pi_j ? *pi_j : stationary_distribution(p)(j);
  if (!(weight < 0.5)) throw ValidationError("QSSamp needs pi_j < 1/2 so that the crossing point lies in [0,1)");

  QSSampOutcome out;
  out.s_star = s_star(weight);
  CVector start = CVector::Zero(p.n());
  start(j) = 1.0;
  const double eps_prime = epsilon / 4.0;

  const StageResult first = run_stage(p, marked, out.s_star, start, nullptr, eps_prime, opts);
  out.stage1 = first.info;
  const double kept = first.system.norm();
  if (!(kept > 0.0)) throw DegenerateError("QSSamp stage 1 left no weight in the reference sector");
  const CVector mid = first.system / kept;
  const CVector* carry = opts.representation == Representation::full ? &first.full : nullptr;
  const StageResult second = run_stage(p, marked, 0.0, mid, carry, eps_prime, opts);
  out.stage2 = second.info;
  if (out.stage1.success_prob < 1e-12 || out.stage2.success_prob < 1e-12)
    throw DegenerateError("QSSamp post-selection probability below 1e-12");

  out.blocks_per_stage = out.stage1.config.blocks;
  out.total_time = out.stage1.config.total_time() + out.stage2.config.total_time();

  CVector final_state = second.system;
  const double norm = final_state.norm();
  if (!(norm > 0.0)) throw DegenerateError("QSSamp stage 2 left no weight in the reference sector");
  final_state /= norm;
  const Vector target = stationary_distribution(p).cwiseSqrt();
  const Complex overlap = target.cast<Complex>().dot(final_state);
  out.fidelity_to_pi = std::norm(overlap);
  const Complex phase = std::abs(overlap) > 0.0 ? std::conj(overlap) / std::abs(overlap) : Complex(1.0);
  out.raw_state = final_state * phase;
  out.state = out.raw_state.real();
  out.distance_to_pi = (out.raw_state - target.cast<Complex>()).norm();
  return out;
}

double cost_total(const CostModel& c) {
  if (!(c.ht_plus >= 0.0)) throw ValidationError("cost model needs a nonnegative extended hitting time");
  return c.setup + std::sqrt(c.ht_plus) * (c.update + c.check);
}

}  // namespace qmix
