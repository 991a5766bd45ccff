#include "qmix/markov.hpp"

#include "qmix/errors.hpp"
#include "qmix/numeric_policy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qmix {
namespace {

using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

BoolMatrix support(const Matrix& p) { return p.array() > 0.0; }

bool reaches_all(const BoolMatrix& adj, bool transpose) {
  const Eigen::Index n = adj.rows();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<Eigen::Index> stack{0};
  seen[0] = true;
  Eigen::Index count = 1;
  while (!stack.empty()) {
    const Eigen::Index x = stack.back();
    stack.pop_back();
    for (Eigen::Index y = 0; y < n; ++y) {
      const bool edge = transpose ? adj(y, x) : adj(x, y);
      if (edge && !seen[static_cast<std::size_t>(y)]) {
        seen[static_cast<std::size_t>(y)] = true;
        ++count;
        stack.push_back(y);
      }
    }
  }
  return count == n;
}

// Wielandt: a primitive n x n matrix has A^k > 0 for every k >= (n-1)^2 + 1.
// An irreducible matrix with a positive diagonal entry is primitive.
bool primitive(const BoolMatrix& adj) {
  const Eigen::Index n = adj.rows();
  if (adj.diagonal().any()) return true;
  const Eigen::Index bound = (n - 1) * (n - 1) + 1;
  Matrix power = adj.cast<double>();
  Eigen::Index k = 1;
  while (k < bound) {
    power = ((power * power).array() > 0.0).cast<double>().matrix();
    k *= 2;
    if ((power.array() > 0.0).all()) return true;
  }
  return (power.array() > 0.0).all();
}

}  // namespace

StochasticMatrix::StochasticMatrix(Matrix rows) : p_(std::move(rows)) {
  std::vector<std::string> problems;
  if (p_.rows() != p_.cols()) {
    std::ostringstream os;
    os << "matrix is " << p_.rows() << "x" << p_.cols() << ", expected square";
    throw ValidationError("invalid stochastic matrix: " + os.str(), {os.str()});
  }
  if (p_.rows() == 0) throw ValidationError("invalid stochastic matrix: empty");
  const double tol = numeric_policy().row_sum_tol;
  for (Eigen::Index x = 0; x < p_.rows(); ++x) {
    for (Eigen::Index y = 0; y < p_.cols(); ++y) {
      const double v = p_(x, y);
      if (!std::isfinite(v) || v < 0.0 || v > 1.0 + tol) {
        std::ostringstream os;
        os << "entry (" << x << "," << y << ") = " << v << " outside [0,1]";
        problems.push_back(os.str());
      }
    }
    const double sum = p_.row(x).sum();
    if (!(std::abs(sum - 1.0) <= tol)) {
      std::ostringstream os;
      os.precision(17);
      os << "row " << x << " sums to " << sum;
      problems.push_back(os.str());
    }
  }
  if (!problems.empty()) {
    std::string msg = "invalid stochastic matrix: " + problems.front();
    if (problems.size() > 1) msg += " (+" + std::to_string(problems.size() - 1) + " more)";
    throw ValidationError(msg, std::move(problems));
  }
}

MarkedSet::MarkedSet(std::vector<Eigen::Index> indices, Eigen::Index n)
    : idx_(std::move(indices)), mask_(static_cast<std::size_t>(std::max<Eigen::Index>(n, 0)), false), n_(n) {
  std::sort(idx_.begin(), idx_.end());
  for (std::size_t i = 0; i < idx_.size(); ++i) {
    if (idx_[i] < 0 || idx_[i] >= n) {
      throw ValidationError("marked index " + std::to_string(idx_[i]) + " outside [0," + std::to_string(n) + ")");
    }
    if (i > 0 && idx_[i] == idx_[i - 1]) throw ValidationError("duplicate marked index " + std::to_string(idx_[i]));
    mask_[static_cast<std::size_t>(idx_[i])] = true;
  }
}

std::vector<Eigen::Index> MarkedSet::unmarked() const {
  std::vector<Eigen::Index> out;
  out.reserve(static_cast<std::size_t>(n_) - idx_.size());
  for (Eigen::Index x = 0; x < n_; ++x)
    if (!mask_[static_cast<std::size_t>(x)]) out.push_back(x);
  return out;
}

StationaryDistribution with_marked(const Vector& pi, const MarkedSet& marked) {
  if (pi.size() != marked.universe()) throw ValidationError("stationary vector and marked set sizes differ");
  StationaryDistribution out{pi, 0.0};
  for (Eigen::Index x : marked.indices()) out.p_marked += pi(x);
  return out;
}

StochasticMatrix make_lazy(const StochasticMatrix& p) {
  const Eigen::Index n = p.n();
  return StochasticMatrix(0.5 * (Matrix::Identity(n, n) + p.matrix()));
}

Vector stationary_distribution(const StochasticMatrix& p) {
  const Eigen::Index n = p.n();
  if (n == 1) return Vector::Ones(1);
  if (!reaches_all(support(p.matrix()), false) || !reaches_all(support(p.matrix()), true))
    throw DegenerateError("stationary distribution is not unique: chain is reducible");
  Matrix a = p.matrix().transpose() - Matrix::Identity(n, n);
  a.row(n - 1).setOnes();
  Vector b = Vector::Zero(n);
  b(n - 1) = 1.0;
  Eigen::FullPivLU<Matrix> lu(a);
  if (!lu.isInvertible()) throw IllConditionedError("stationary system is singular");
  Vector pi = lu.solve(b);
  pi = pi.cwiseMax(0.0);
  return pi / pi.sum();
}

Matrix time_reversal(const StochasticMatrix& p, const Vector& pi) {
  const Eigen::Index n = p.n();
  Matrix out(n, n);
  for (Eigen::Index x = 0; x < n; ++x)
    for (Eigen::Index y = 0; y < n; ++y) out(x, y) = pi(y) * p(y, x) / pi(x);
  return out;
}

ErgodicityReport check_ergodic_reversible(const StochasticMatrix& p) {
  ErgodicityReport r;
  const BoolMatrix adj = support(p.matrix());
  r.strongly_connected = reaches_all(adj, false) && reaches_all(adj, true);
  r.aperiodic = r.strongly_connected && primitive(adj);
  r.ergodic = r.aperiodic;
  if (!r.strongly_connected) return r;
  const Vector pi = stationary_distribution(p);
  r.pi = pi;
  r.stationarity_residual = (p.matrix().transpose() * pi - pi).cwiseAbs().maxCoeff();
  const Matrix flow = pi.asDiagonal() * p.matrix();
  r.detailed_balance_residual = asymmetry(flow);
  r.reversible = r.detailed_balance_residual <= numeric_policy().reversibility_tol;
  return r;
}

InterpolatedChain interpolate(const StochasticMatrix& p, const MarkedSet& marked, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw ValidationError("interpolation parameter s must lie in [0,1]");
  if (marked.empty()) throw ValidationError("interpolation needs a nonempty marked set");
  if (marked.universe() != p.n()) throw ValidationError("marked set and chain sizes differ");
  Matrix m = p.matrix();
  if (s > 0.0) {
    for (Eigen::Index x : marked.indices()) {
      m.row(x) *= (1.0 - s);
      m(x, x) += s;
    }
  }
  return InterpolatedChain{p, marked, s, StochasticMatrix(std::move(m))};
}

StationaryDistribution stationary_of_interpolated(const StationaryDistribution& pi, const MarkedSet& marked,
                                                  double s) {
  if (!(s >= 0.0 && s < 1.0)) throw ValidationError("stationary state of P(s) needs s in [0,1): P(1) is not ergodic");
  const StationaryDistribution base = with_marked(pi.pi, marked);
  const double norm = 1.0 - s * (1.0 - base.p_marked);
  Vector out = base.pi;
  for (Eigen::Index x = 0; x < out.size(); ++x) out(x) = (marked.contains(x) ? out(x) : (1.0 - s) * out(x)) / norm;
  return with_marked(out, marked);
}

double s_star(double p_marked) {
  if (!(p_marked > 0.0 && p_marked < 0.5)) {
    std::ostringstream os;
    os << "marked mass p_M = " << p_marked << " must lie in (0, 1/2): the crossing point 1 - p_M/(1 - p_M) is "
       << "otherwise outside [0,1)";
    throw ValidationError(os.str());
  }
  return 1.0 - p_marked / (1.0 - p_marked);
}

Discriminant discriminant(const StochasticMatrix& p) {
  const Matrix& m = p.matrix();
  Discriminant d;
  d.matrix = (m.array() * m.transpose().array()).sqrt().matrix();
  d.raw_asymmetry = asymmetry(d.matrix);
  if (d.raw_asymmetry > numeric_policy().symmetry_tol)
    throw IllConditionedError("discriminant asymmetry exceeds tolerance before symmetrisation");
  d.matrix = 0.5 * (d.matrix + d.matrix.transpose()).eval();
  d.spectrum = eigh(d.matrix);
  return d;
}

Discriminant discriminant(const InterpolatedChain& chain) {
  if (chain.s > numeric_policy().ergodic_s_cap)
    throw ValidationError("discriminant of P(s) needs s below the ergodicity cap");
  return discriminant(chain.result);
}

UMSplit u_m_split(const StationaryDistribution& pi, const MarkedSet& marked, double s) {
  if (!(s >= 0.0 && s < 1.0)) throw ValidationError("u_m_split needs s in [0,1)");
  const StationaryDistribution base = with_marked(pi.pi, marked);
  const double pm = base.p_marked;
  if (!(pm > 0.0 && pm < 1.0)) throw ValidationError("u_m_split needs 0 < p_M < 1");
  const Eigen::Index n = base.pi.size();
  UMSplit out;
  out.u_state = Vector::Zero(n);
  out.m_state = Vector::Zero(n);
  for (Eigen::Index x = 0; x < n; ++x) {
    const double r = std::sqrt(base.pi(x));
    if (marked.contains(x))
      out.m_state(x) = r / std::sqrt(pm);
    else
      out.u_state(x) = r / std::sqrt(1.0 - pm);
  }
  const double norm = 1.0 - s * (1.0 - pm);
  out.coef_u = std::sqrt((1.0 - s) * (1.0 - pm) / norm);
  out.coef_m = std::sqrt(pm / norm);
  out.v_top = out.coef_u * out.u_state + out.coef_m * out.m_state;
  return out;
}

}  // namespace qmix
