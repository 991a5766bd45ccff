#pragma once

// Independent reference computations used only by tests. None of these call
// into the routines they are compared against.

#include <qmix/markov.hpp>
#include <qmix/spectral.hpp>

#include <functional>
#include <vector>

namespace oracle {

using qmix::CMatrix;
using qmix::Complex;
using qmix::CVector;
using qmix::Matrix;
using qmix::Vector;

/// pi P^t from the uniform start until the change drops below tol.
Vector power_iteration_stationary(const Matrix& p, double tol = 1e-15, int max_iter = 1000000);

/// Sorted real parts of the eigenvalues of a general matrix.
Vector general_eigenvalues(const Matrix& m);

/// Expected absorption time from a pi-distributed unmarked start, (I - P_UU)^{-1} 1.
double fundamental_matrix_hitting(const Matrix& p, const Vector& pi, const std::vector<bool>& marked);

/// exp(-i h t) via Eigen's matrix exponential.
CMatrix unitary(const CMatrix& h, double t);

/// (1/N) sum_{q<N} exp(-i e tau q / N) by direct summation.
Complex pointer_sum(double e, double tau, int l);

/// Trapezoid average over [0, T] of |<f|exp(-iHt)|psi>|^2 for every f.
Vector quadrature_average(const Matrix& h, const Vector& psi, double T, int points);

/// sum over ordered i != l of 1/|x_l - x_i| for distinct values, by direct loops.
double ordered_pair_sum(const Vector& x, double tol);

/// Dense composite Hamiltonian H (x) p_hat with p_hat = diag(q / N) in the momentum basis,
/// the pointer then transformed to positions with kernel exp(+2 pi i x q / N) / sqrt(N).
CMatrix composite_generator(const CMatrix& h, int l);

/// Random Hermitian matrix with entries of unit scale.
CMatrix random_hermitian(int d, unsigned seed);
Matrix random_symmetric(int d, unsigned seed);

}  // namespace oracle
