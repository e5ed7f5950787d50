// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <utility>
#include <vector>

#include "koop/dictionary.hpp"

namespace koop
{

struct HankelConfig
{
  Eigen::Index N = 0;  // delay depth
  Eigen::Index M = 0;  // rows
  double eps_tol = 1e-10;
  /// Keep singular values >= eps_tol * sigma_1 instead of >= eps_tol.
  bool relative_tol = false;

  void validate(Eigen::Index length, Eigen::Index observables) const;
};

struct HankelResult
{
  ComplexVector eigenvalues;  // r
  DenseMatrix coeffs;         // U_2 V, pN x r
  Eigen::Index rank = 0;
  RealVector scalings;        // alpha_k, alpha_1 = 1
  RealVector singular_values; // all singular values of the concatenated X
};

/// Psi_X(i, j) = s(i + j) and Psi_Y(i, j) = s(i + j + 1) for 0 <= i < M, 0 <= j < N.
std::pair<DenseMatrix, DenseMatrix> hankel_matrices(std::span<const Complex> series,
                                                    Eigen::Index M, Eigen::Index N);

/// Observable values along a trajectory: column k holds g_k(x_j).
DenseMatrix observable_series(const RealMatrix &trajectory, const std::vector<Observable> &obs);

/// Scaled, concatenated Hankel pair [alpha_1 Psi^(1) ... alpha_p Psi^(p)] with
/// ergodic weights 1/M. `series` is length x p.
DataMatrices hankel_data(const DenseMatrix &series, const HankelConfig &config,
                         RealVector *scalings = nullptr);

HankelResult hankel_dmd(const DenseMatrix &series, const HankelConfig &config);

/// Residuals of the returned eigenpairs measured on the Hankel data.
RealVector hankel_residuals(const DenseMatrix &series, const HankelConfig &config,
                            const HankelResult &result);

}  // namespace koop
