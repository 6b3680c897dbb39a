#pragma once

#include <complex>
#include <vector>

#include "hillmaslov/matrix.hpp"

namespace hillmaslov {

// Singular values (descending) and right singular vectors of a real matrix,
// computed by one-sided Jacobi. Column k of v pairs with singular_values[k].
struct SvdResult {
  std::vector<double> singular_values;
  Matrix v;
};

SvdResult jacobi_svd(const Matrix& a);

// Orthonormal basis (as matrix columns) of the numerical null space of a:
// right singular vectors whose singular value is below tol * max(1, sigma_max)
// -- relative to the matrix scale, floored at unit scale so that a matrix
// which is zero up to rounding yields the full space. Full column rank yields
// a matrix with zero columns.
Matrix kernel_basis(const Matrix& a, double tol = 1e-8);

struct EigenResult {
  std::vector<std::complex<double>> values;
  Matrix vectors;          // orthonormal columns; symmetric solver only
  bool has_vectors = false;
};

// Cyclic Jacobi for symmetric matrices. Input must be symmetric to within
// 1e-12 relative; eigenvalues are returned descending with matching
// orthonormal eigenvectors. Throws ConvergenceError past 100 * dim sweeps.
EigenResult eig_symmetric(const Matrix& a);

// Real nonsymmetric eigenvalues via Hessenberg reduction and Francis
// double-shift QR. Complex eigenvalues come out in exact conjugate pairs.
// Throws ConvergenceError past 100 * dim iterations.
EigenResult eig_general(const Matrix& a);

struct Signature {
  int n_plus = 0;
  int n_minus = 0;
  int n_zero = 0;
};

// Inertia of a symmetric matrix: eigenvalue counts above tol, below -tol,
// and within [-tol, tol].
Signature signature(const Matrix& gram, double tol);

}  // namespace hillmaslov
