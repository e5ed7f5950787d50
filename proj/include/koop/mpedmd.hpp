// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "koop/dictionary.hpp"

namespace koop
{

struct MpResult
{
  DenseMatrix K_mp;          // N x N, G-unitary
  ComplexVector eigenvalues; // on the unit circle
  DenseMatrix V;             // G-orthonormal eigenvector coefficients
  DenseMatrix G;

  // Factors of W^{1/2} Psi_X = Q R P^T and the unitary core U_2 U_1^*, kept so
  // that G-inner products can be evaluated without forming G^{-1}.
  DenseMatrix R;
  std::vector<Eigen::Index> perm;
  DenseMatrix unitary_core;
  DenseMatrix Vhat;  // unitary eigenvectors of the core
};

MpResult mpedmd_fit(const DataMatrices &data);

/// Atoms on the periodic interval [-pi, pi).
struct AtomicSpectralMeasure
{
  std::vector<double> theta;
  std::vector<double> mass;

  double total() const;
  void sort_by_angle();
};

/// R P^T g: coordinates in which the G-inner product is Euclidean.
ComplexVector g_coordinates(const MpResult &result, const ComplexVector &g);

/// theta_j = arg lambda_j, p_j = |v_j^* G g|^2. Eigenvalues within 1e-10 of one
/// another are merged. The masses sum to g^* G g, or to 1 when normalize is set.
AtomicSpectralMeasure scalar_measure(const MpResult &result, const ComplexVector &g,
                                     bool normalize = true);

/// A measure on the circle made of atoms plus a uniform part of the given
/// total mass.
struct CircleMeasure
{
  AtomicSpectralMeasure atoms;
  double uniform_mass = 0.0;

  double total() const { return atoms.total() + uniform_mass; }
};

/// Wasserstein-1 distance on the circle of circumference 2*pi between measures
/// of equal total mass: min_t integral |F_mu - F_nu - t| dtheta.
double circular_w1(const CircleMeasure &mu, const CircleMeasure &nu);

/// W_1 between the mpEDMD measure of g (normalized) and a reference measure.
double delay_measure_bound_check(const MpResult &result, const ComplexVector &g,
                                 const CircleMeasure &reference);

/// Wraps an angle into [-pi, pi).
double wrap_to_pi(double theta);

}  // namespace koop
