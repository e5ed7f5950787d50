// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "koop/errors.hpp"

namespace koop
{

using Complex = std::complex<double>;

// All matrices are complex double precision, column-major (Eigen default).
using DenseMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kMachineEpsilon = std::numeric_limits<double>::epsilon();

struct SvdResult
{
  DenseMatrix U;               // rows x p, orthonormal columns
  RealVector singular_values;  // p = min(rows, cols), nonincreasing
  DenseMatrix V;               // cols x p, orthonormal columns
};

struct QrResult
{
  DenseMatrix Q;                  // rows x p, orthonormal columns
  DenseMatrix R;                  // p x cols, upper triangular
  std::vector<Eigen::Index> perm; // A(:, perm[j]) is the j-th column of Q*R
  Eigen::Index rank = 0;          // numerical rank from the diagonal of R
};

struct EigResult
{
  ComplexVector eigenvalues;
  DenseMatrix right_vectors;  // unit Euclidean norm columns
};

struct VandermondeResult
{
  ComplexVector values;
  double condition_estimate = 1.0;  // 1-norm estimate; 1 for the DFT path
  bool used_dft = false;
  std::optional<std::string> warning;
};

/// Throws ContractViolation if any entry is NaN or infinite.
void require_finite(const DenseMatrix &A, const char *what);

SvdResult svd(const DenseMatrix &A);

/// Column-pivoted Householder QR, A(:,perm) = Q*R.
QrResult pivoted_qr(const DenseMatrix &A);

/// Unpivoted thin QR with R's diagonal made real and nonnegative.
QrResult thin_qr(const DenseMatrix &A);

EigResult eig(const DenseMatrix &A);

/// Eigendecomposition of a unitary matrix through the complex Schur form. The
/// returned eigenvector matrix is unitary.
EigResult schur_unitary_eig(const DenseMatrix &U, double unitarity_tol = 1e-8);

/// Minimum-Frobenius-norm minimizer of ||A X - B||_F. Singular values below
/// rel_tol * sigma_1 are discarded; the default is max(rows, cols) * eps.
DenseMatrix solve_least_squares(const DenseMatrix &A, const DenseMatrix &B,
                                std::optional<double> rel_tol = std::nullopt);

/// Solves sum_j w_j nodes_j^k = rhs_k for k = 0..n-1.
VandermondeResult solve_vandermonde(std::span<const Complex> nodes, std::span<const Complex> rhs);

/// Numerical rank from singular values: max{ i : sigma_i > sigma_1 * tau }.
Eigen::Index numerical_rank(const RealVector &singular_values, double tau);

/// Smallest singular value of a Hermitian positive semidefinite matrix, via
/// its smallest eigenvalue (clipped at zero).
double smallest_eigenvalue_hermitian(const DenseMatrix &H);

DenseMatrix hermitian_part(const DenseMatrix &A);

}  // namespace koop
