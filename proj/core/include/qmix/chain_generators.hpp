#pragma once

#include "qmix/markov.hpp"
#include "qmix/rng.hpp"

namespace qmix {

/// Simple random walk on K_n (no self-loops), made lazy if `lazy`.
StochasticMatrix complete_graph_walk(Eigen::Index n, bool lazy = true);

/// Simple random walk on the n-cycle, made lazy if `lazy`.
StochasticMatrix cycle_walk(Eigen::Index n, bool lazy = true);

/// Walk on a random symmetric weighted graph containing a Hamiltonian cycle,
/// each other edge present with probability `density`, weights in [0.1, 1).
/// Reversible with pi proportional to weighted degree.
StochasticMatrix random_reversible_chain(Eigen::Index n, Rng& rng, double density = 0.5, bool lazy = true);

/// Walk on a weighted symmetric graph: P_xy = w_xy / sum_y w_xy.
StochasticMatrix walk_from_weights(const Matrix& weights);

}  // namespace qmix
