#include "qmix/walk_hamiltonian.hpp"

#include "qmix/errors.hpp"
#include "qmix/numeric_policy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qmix {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Orthogonal Q with Q e_0 = u (unit u), from a Householder reflection.
Matrix complete_column(const Vector& u) {
  const Eigen::Index n = u.size();
  Vector v = u;
  // Reflect u onto -sign(u_0) e_0 so v never cancels.
  const double sign = u(0) >= 0.0 ? 1.0 : -1.0;
  v(0) += sign;
  Matrix q = Matrix::Identity(n, n) - (2.0 / v.squaredNorm()) * v * v.transpose();
  // Q u = -sign e_0, so Q e_0 = -sign u.
  q.col(0) *= -sign;
  return q;
}

}  // namespace

EdgeWalkHamiltonian build_effective(const Discriminant& d) {
  const auto& pol = numeric_policy();
  EdgeWalkHamiltonian h;
  h.n = d.n();
  if (h.n < 2) throw ValidationError("edge-walk Hamiltonian needs at least two states");
  h.lambdas = d.spectrum.values;
  h.eigvecs = d.spectrum.vectors;
  for (Eigen::Index k = 0; k < h.n; ++k) {
    double& l = h.lambdas(k);
    if (std::abs(l) > 1.0) {
      if (std::abs(l) - 1.0 > pol.eigenvalue_clamp_tol) {
        std::ostringstream os;
        os.precision(17);
        os << "discriminant eigenvalue " << k << " = " << l << " lies outside [-1,1]";
        throw ValidationError(os.str());
      }
      l = std::copysign(1.0, l);
      ++h.clamped;
    }
  }
  if (std::abs(1.0 - h.lambdas(h.n - 1)) > pol.top_eigenvalue_tol)
    throw ValidationError("top discriminant eigenvalue is not 1; the chain is not reversible");
  h.lambdas(h.n - 1) = 1.0;
  if (1.0 - h.lambdas(h.n - 2) <= pol.hitting_singular_tol)
    throw DegenerateError("top eigenvalue of the discriminant is not simple");
  h.mu.resize(h.n - 1);
  for (Eigen::Index k = 0; k + 1 < h.n; ++k) {
    const double l = h.lambdas(k);
    h.mu(k) = std::sqrt((1.0 - l) * (1.0 + l));
  }
  h.gap = h.mu(h.n - 2);
  return h;
}

Vector EdgeWalkHamiltonian::energies() const {
  Vector e(dim());
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    e(2 * k) = -mu(k);
    e(2 * k + 1) = mu(k);
  }
  e(dim() - 1) = 0.0;
  std::sort(e.data(), e.data() + e.size());
  return e;
}

ModeSpectrum EdgeWalkHamiltonian::mode_spectrum() const {
  const Eigen::Index d = dim();
  std::vector<std::pair<double, CVector>> modes;
  modes.reserve(static_cast<std::size_t>(d));
  const Complex i(0.0, 1.0);
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    CVector plus = CVector::Zero(d), minus = CVector::Zero(d);
    plus(a_index(k)) = kInvSqrt2;
    plus(b_index(k)) = i * kInvSqrt2;
    minus(a_index(k)) = kInvSqrt2;
    minus(b_index(k)) = -i * kInvSqrt2;
    modes.emplace_back(-mu(k), std::move(minus));
    modes.emplace_back(mu(k), std::move(plus));
  }
  CVector top = CVector::Zero(d);
  top(top_index()) = 1.0;
  modes.emplace_back(0.0, std::move(top));
  std::stable_sort(modes.begin(), modes.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  ModeSpectrum out;
  out.energies.resize(d);
  out.modes.resize(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    out.energies(j) = modes[static_cast<std::size_t>(j)].first;
    out.modes.col(j) = modes[static_cast<std::size_t>(j)].second;
  }
  return out;
}

CMatrix EdgeWalkHamiltonian::matrix() const {
  CMatrix h = CMatrix::Zero(dim(), dim());
  const Complex i(0.0, 1.0);
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    h(a_index(k), b_index(k)) = -i * mu(k);
    h(b_index(k), a_index(k)) = i * mu(k);
  }
  return h;
}

CVector EdgeWalkHamiltonian::embed(const CVector& system) const {
  if (system.size() != n) throw ValidationError("embed: system vector has wrong dimension");
  const CVector c = eigvecs.transpose().cast<Complex>() * system;
  CVector out = CVector::Zero(dim());
  for (Eigen::Index k = 0; k + 1 < n; ++k) out(a_index(k)) = c(k);
  out(top_index()) = c(n - 1);
  return out;
}

CVector EdgeWalkHamiltonian::reference_sector(const CVector& effective) const {
  if (effective.size() != dim()) throw ValidationError("reference_sector: wrong effective dimension");
  CVector c(n);
  for (Eigen::Index k = 0; k + 1 < n; ++k) c(k) = effective(a_index(k));
  c(n - 1) = effective(top_index());
  return eigvecs.cast<Complex>() * c;
}

double EdgeWalkHamiltonian::perp_weight(const CVector& effective) const {
  if (effective.size() != dim()) throw ValidationError("perp_weight: wrong effective dimension");
  double w = 0.0;
  for (Eigen::Index k = 0; k + 1 < n; ++k) w += std::norm(effective(b_index(k)));
  return w;
}

FullHamiltonian build_full(const InterpolatedChain& chain, Eigen::Index max_n) {
  const StochasticMatrix& p = chain.result;
  const Eigen::Index n = p.n();
  if (n > max_n) throw ValidationError("full edge-walk build refused: n = " + std::to_string(n) + " exceeds " +
                                       std::to_string(max_n));
  FullHamiltonian f;
  f.n = n;
  const Eigen::Index dim = n * n;
  f.isometry = Matrix::Zero(dim, dim);
  for (Eigen::Index x = 0; x < n; ++x) {
    const Vector u = p.matrix().row(x).transpose().cwiseSqrt();
    const Matrix q = complete_column(u / u.norm());
    f.completion_residual =
        std::max(f.completion_residual, (q.transpose() * q - Matrix::Identity(n, n)).cwiseAbs().maxCoeff());
    f.isometry.block(x * n, x * n, n, n) = q;
  }
  if (f.completion_residual > 1e-10) throw IllConditionedError("unitary completion residual exceeds 1e-10");
  f.swap = Matrix::Identity(dim, dim);
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = 0; y < n; ++y) {
      if (x == y || p(x, y) <= 0.0) continue;
      f.swap(x * n + y, x * n + y) = 0.0;
      f.swap(x * n + y, y * n + x) = 1.0;
    }
  }
  // A one-way edge would make S non-unitary.
  if ((f.swap.transpose() * f.swap - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() > 0.0)
    throw ValidationError("swap operator is not a permutation: chain support is not symmetric");
  f.reflection = f.isometry.transpose() * f.swap * f.isometry;
  f.reflection = 0.5 * (f.reflection + f.reflection.transpose()).eval();
  Matrix pi0 = Matrix::Zero(dim, dim);
  for (Eigen::Index x = 0; x < n; ++x) pi0(x * n, x * n) = 1.0;
  f.generator = f.reflection * pi0 - pi0 * f.reflection;
  return f;
}

CMatrix FullHamiltonian::matrix() const { return Complex(0.0, 1.0) * generator.cast<Complex>(); }

ModeSpectrum FullHamiltonian::spectrum() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw IllConditionedError("full Hamiltonian eigensolve failed");
  return ModeSpectrum{solver.eigenvalues(), solver.eigenvectors()};
}

CVector FullHamiltonian::embed(const CVector& system) const {
  if (system.size() != n) throw ValidationError("embed: system vector has wrong dimension");
  CVector out = CVector::Zero(dim());
  for (Eigen::Index x = 0; x < n; ++x) out(x * n) = system(x);
  return out;
}

CVector FullHamiltonian::reference_sector(const CVector& full) const {
  if (full.size() != dim()) throw ValidationError("reference_sector: wrong full dimension");
  CVector out(n);
  for (Eigen::Index x = 0; x < n; ++x) out(x) = full(x * n);
  return out;
}

CVector FullHamiltonian::from_effective(const EdgeWalkHamiltonian& eff, const CVector& coords) const {
  if (eff.n != n || coords.size() != eff.dim()) throw ValidationError("from_effective: dimension mismatch");
  CVector out = CVector::Zero(dim());
  const CMatrix w = reflection.cast<Complex>();
  for (Eigen::Index k = 0; k < n; ++k) {
    const CVector a = embed(CVector(eff.eigvecs.col(k).cast<Complex>()));
    if (k + 1 == n) {
      out += coords(eff.top_index()) * a;
      continue;
    }
    out += coords(EdgeWalkHamiltonian::a_index(k)) * a;
    const Complex cb = coords(EdgeWalkHamiltonian::b_index(k));
    if (cb == Complex(0.0) || eff.mu(k) == 0.0) continue;
    const CVector b = (w * a - eff.lambdas(k) * a) / eff.mu(k);
    out += cb * b;
  }
  return out;
}

}  // namespace qmix
