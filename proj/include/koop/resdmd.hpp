// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "koop/dmd.hpp"

namespace koop
{

struct ValidatedEigenpair
{
  Complex lambda;
  ComplexVector coeffs;  // dictionary coordinates g
  double res = 0.0;
};

/// Relative residual
///   res^2 = g^*(L - lambda A^* - conj(lambda) A + |lambda|^2 G) g / (g^* G g),
/// clipped at zero before the square root. When the fit carries the triangular
/// factor, the numerator is evaluated as ||(RY - lambda RX) g||^2.
double residual(const KoopmanFit &fit, Complex lambda, const ComplexVector &coeffs);

/// The same quantity evaluated from the data matrices as
/// ||W^{1/2}(Psi_Y - lambda Psi_X) g|| / ||W^{1/2} Psi_X g||, which avoids the
/// cancellation in the quadratic form.
double residual_from_data(const DataMatrices &data, Complex lambda, const ComplexVector &coeffs);

/// Eigenpairs of fit.K with their residuals, sorted by ascending residual.
std::vector<ValidatedEigenpair> validate_eigenpairs(const KoopmanFit &fit);

struct PseudospectrumOptions
{
  /// Evaluate sigma_min(W^{1/2} Psi_Y R^{-1} - z Q) without forming the squared
  /// form. Slower, accurate down to machine precision instead of its root.
  bool direct = false;
  bool vectors = false;
};

struct PseudospectrumGrid
{
  std::vector<Complex> points;
  RealVector tau;
  double epsilon = 0.0;
  std::vector<bool> accepted;  // tau < epsilon
  std::vector<ComplexVector> coeffs;  // pseudoeigenfunction coefficients, if requested
};

/// Polar grid r_min..r_max (n_r values, inclusive) times n_theta angles
/// 2*pi*j/n_theta.
std::vector<Complex> polar_grid(double r_min, double r_max, int n_r, int n_theta);

PseudospectrumGrid pseudospectrum(const DataMatrices &data, const std::vector<Complex> &grid,
                                  double epsilon, const PseudospectrumOptions &opts = {});

/// Iterated one-step forecast bounds b_1..b_n:
///   b_1 = c * proj_error + sqrt(g^*(L - K^*GK)g),
///   b_{j+1} = c * b_j + sqrt((K^j g)^*(L - K^*GK)(K^j g)).
std::vector<double> forecast_bound(const KoopmanFit &fit, const ComplexVector &coeffs,
                                   double proj_error, double opnorm_bound, int steps);

}  // namespace koop
