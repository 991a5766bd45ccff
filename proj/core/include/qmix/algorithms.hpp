#pragma once

#include "qmix/markov.hpp"
#include "qmix/pointer_sim.hpp"
#include "qmix/walk_hamiltonian.hpp"

#include <cstdint>
#include <optional>

namespace qmix {

/// Which space the walk is simulated in.
enum class Representation {
  effective,  // (2n-1)-dimensional invariant subspace
  full,       // dense n^2 build; small n only
};

/// How many pointer qubits each block uses.
enum class PointerSizing {
  hamiltonian_gap,  // from the edge-walk gap
  chain_gap,        // from the discriminant gap 1 - lambda_{n-1}
};

struct WalkOptions {
  Representation representation = Representation::effective;
  PointerSizing sizing = PointerSizing::hamiltonian_gap;
  Eigen::Index full_max_n = 12;
  // Skip the ergodicity / reversibility check when the caller vouches for it.
  bool trust_input = false;
};

struct FilterStage {
  double s = 0.0;
  double chain_gap = 0.0;       // 1 - lambda_{n-1}(s)
  double hamiltonian_gap = 0.0; // sqrt(1 - lambda_{n-1}(s)^2)
  PointerConfig config;
  double success_prob = 0.0;
  double perp_weight = 0.0;     // post-selected weight outside the reference sector
  double top_overlap_sq = 0.0;  // |<v_top(s)|input>|^2
};

struct SearchOutcome {
  Eigen::Index sampled_node = 0;
  bool is_marked = false;
  double success_prob = 0.0;     // stage probability times marked weight of the reference sector
  double marked_weight = 0.0;    // sum over marked x of |<x,0|phi>|^2
  double total_time = 0.0;
  double s_star = 0.0;
  double p_marked = 0.0;
  FilterStage stage;
  Vector node_probs;             // |<x,0|phi>|^2
};

/// Spatial search from sqrt(pi) at the crossing point s*.
SearchOutcome spatial_search(const StochasticMatrix& p, const StationaryDistribution& pi, const MarkedSet& marked,
                             double epsilon, std::uint64_t seed, const WalkOptions& opts = {});

struct QSSampOutcome {
  Vector state;                  // phase-aligned, real part of the final reference-sector state
  CVector raw_state;
  double fidelity_to_pi = 0.0;   // |<sqrt(pi)|state>|^2
  double distance_to_pi = 0.0;   // || state - sqrt(pi) ||_2 after phase alignment
  double s_star = 0.0;
  FilterStage stage1;
  FilterStage stage2;
  double total_time = 0.0;
  int blocks_per_stage = 0;
};

/// Two-stage stationary-state preparation from the basis state |j>.
/// `pi_j` may supply the stationary weight of j; otherwise it is computed.
QSSampOutcome qssamp_prepare(const StochasticMatrix& p, Eigen::Index j, double epsilon,
                             std::optional<double> pi_j = std::nullopt, const WalkOptions& opts = {});

struct CostModel {
  double setup = 0.0;
  double update = 0.0;
  double check = 0.0;
  double ht_plus = 0.0;
};

double cost_total(const CostModel& c);

/// Seeded inverse-CDF draw from a nonnegative weight vector.
Eigen::Index sample_index(const Vector& weights, std::uint64_t seed);

}  // namespace qmix
