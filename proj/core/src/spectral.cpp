#include "qmix/spectral.hpp"

#include "qmix/errors.hpp"
#include "qmix/numeric_policy.hpp"

#include <algorithm>
#include <cmath>

namespace qmix {

SpectralDecomposition eigh(const Matrix& m) {
  if (m.rows() != m.cols()) throw ValidationError("eigh: matrix is not square");
  SpectralDecomposition out;
  if (m.rows() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw IllConditionedError("eigh: eigensolver did not converge");
  out.values = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  for (Eigen::Index j = 0; j < out.vectors.cols(); ++j) {
    Eigen::Index arg = 0;
    out.vectors.col(j).cwiseAbs().maxCoeff(&arg);
    if (out.vectors(arg, j) < 0.0) out.vectors.col(j) *= -1.0;
  }
  return out;
}

double asymmetry(const Matrix& m) {
  if (m.rows() != m.cols()) throw ValidationError("asymmetry: matrix is not square");
  if (m.size() == 0) return 0.0;
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

std::vector<std::vector<Eigen::Index>> degeneracy_groups(const Vector& ascending, double tol) {
  std::vector<std::vector<Eigen::Index>> groups;
  for (Eigen::Index i = 0; i < ascending.size(); ++i) {
    if (groups.empty() || ascending(i) - ascending(groups.back().back()) > tol) groups.emplace_back();
    groups.back().push_back(i);
  }
  return groups;
}

double default_degeneracy_tol(const Vector& ascending) {
  if (ascending.size() < 2) return 1e-300;
  const double width = ascending.maxCoeff() - ascending.minCoeff();
  return std::max(numeric_policy().relative_degeneracy_tol * width, 1e-300);
}

}  // namespace qmix
