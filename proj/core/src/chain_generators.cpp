#include "qmix/chain_generators.hpp"

#include "qmix/errors.hpp"

namespace qmix {

StochasticMatrix walk_from_weights(const Matrix& weights) {
  if (weights.rows() != weights.cols()) throw ValidationError("weight matrix is not square");
  if ((weights.array() < 0.0).any()) throw ValidationError("weights must be nonnegative");
  Matrix p = weights;
  for (Eigen::Index x = 0; x < p.rows(); ++x) {
    const double deg = p.row(x).sum();
    if (!(deg > 0.0)) throw ValidationError("vertex " + std::to_string(x) + " has zero weighted degree");
    p.row(x) /= deg;
  }
  return StochasticMatrix(std::move(p));
}

StochasticMatrix complete_graph_walk(Eigen::Index n, bool lazy) {
  if (n < 2) throw ValidationError("complete graph walk needs n >= 2");
  Matrix w = Matrix::Ones(n, n) - Matrix::Identity(n, n);
  StochasticMatrix p = walk_from_weights(w);
  return lazy ? make_lazy(p) : p;
}

StochasticMatrix cycle_walk(Eigen::Index n, bool lazy) {
  if (n < 3) throw ValidationError("cycle walk needs n >= 3");
  Matrix w = Matrix::Zero(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    w(x, (x + 1) % n) = 1.0;
    w((x + 1) % n, x) = 1.0;
  }
  StochasticMatrix p = walk_from_weights(w);
  return lazy ? make_lazy(p) : p;
}

StochasticMatrix random_reversible_chain(Eigen::Index n, Rng& rng, double density, bool lazy) {
  if (n < 2) throw ValidationError("random chain needs n >= 2");
  if (!(density >= 0.0 && density <= 1.0)) throw ValidationError("edge density must lie in [0,1]");
  Matrix w = Matrix::Zero(n, n);
  auto weight = [&rng] { return 0.1 + 0.9 * uniform01(rng); };
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = x + 1; y < n; ++y) {
      const bool ring = (y == x + 1) || (x == 0 && y == n - 1);
      if (ring || uniform01(rng) < density) {
        w(x, y) = weight();
        w(y, x) = w(x, y);
      }
    }
  }
  StochasticMatrix p = walk_from_weights(w);
  return lazy ? make_lazy(p) : p;
}

}  // namespace qmix
