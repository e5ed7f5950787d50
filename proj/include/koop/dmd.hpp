// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "koop/dictionary.hpp"

namespace koop
{

/// Gram matrices of a dictionary on snapshot data and the EDMD matrix.
///   G = Psi_X^* W Psi_X,  A = Psi_X^* W Psi_Y,  L = Psi_Y^* W Psi_Y,
///   K = (W^{1/2} Psi_X)^+ (W^{1/2} Psi_Y).
struct KoopmanFit
{
  DenseMatrix G;
  DenseMatrix A;
  DenseMatrix L;
  DenseMatrix K;
  /// Triangular factor of [W^{1/2} Psi_X, W^{1/2} Psi_Y] = Q [RX RY]. Then
  /// G = RX^* RX, A = RX^* RY, L = RY^* RY, and quadratic forms in G, A, L can
  /// be evaluated as norms without cancellation. Empty when the fit was built
  /// from Gram matrices alone.
  DenseMatrix RX;
  DenseMatrix RY;
  /// Smallest eigenvalue of the Hermitian part of L - K^* G K. It is a Schur
  /// complement and should be nonnegative up to rounding.
  double defect_min_eigenvalue = 0.0;
};

KoopmanFit edmd_fit(const DataMatrices &data);

struct DmdResult
{
  Eigen::Index rank = 0;
  ComplexVector eigenvalues;   // k
  DenseMatrix Z;               // Ritz vectors, n x k, unit norm
  RealVector residuals;        // r_k(i) = ||C_k b_i - lambda_i z_i||
  std::optional<DenseMatrix> Z_exact;  // C_k B_k
  std::optional<DenseMatrix> C;        // C_k = Y_c V_k Sigma_k^{-1}
  RealVector singular_values;  // of the scaled X, all of them
};

struct DmdOptions
{
  /// Relative truncation threshold; defaults to (number of rows) * eps.
  std::optional<double> tol;
  bool exact_vectors = false;
  bool keep_C = false;
};

/// DMD with column scaling and data-driven residuals. X and Y hold snapshots
/// as columns (n x M). Eigenvectors of the Rayleigh quotient have unit norm and
/// their largest-modulus entry made real and positive.
DmdResult dmd(const DenseMatrix &X, const DenseMatrix &Y, const DmdOptions &opts = {});

struct Reconstruction
{
  std::vector<Eigen::Index> selection;
  ComplexVector coefficients;
  RealVector relative_errors;  // per snapshot, ||x_m - xhat_m|| / ||x_m||
};

/// Coefficients minimizing sum_m w_m^2 ||x_m - sum_j z_j a_j lambda_j^{m-1}||^2
/// over the selected modes, solved as a dense (M*n) x l least-squares problem.
/// Empty weights mean w_m = 1.
Reconstruction reconstruct(const DmdResult &result, const DenseMatrix &X,
                           const std::vector<Eigen::Index> &selection,
                           const RealVector &weights = RealVector());

/// Quick coefficients a = Z_sel^+ x_1, with the same error report.
Reconstruction reconstruct_from_first(const DmdResult &result, const DenseMatrix &X,
                                      const std::vector<Eigen::Index> &selection);

/// Indices with residual <= threshold, by ascending residual and then by
/// ascending | 1 - |lambda| |.
std::vector<Eigen::Index> select_modes_by_residual(const DmdResult &result, double threshold);

}  // namespace koop
