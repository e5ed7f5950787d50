// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "koop/mpedmd.hpp"

namespace koop
{

/// Moments c_n = <K^n g, g> = integral e^{i n theta} dxi(theta), n = -N..N.
struct MomentSequence
{
  enum class Source
  {
    trajectory_autocorrelation,
    gram_matrices,
    analytic_oracle
  };
  int N = 0;
  std::vector<Complex> c;  // c[n + N]
  Source source = Source::analytic_oracle;

  Complex at(int n) const { return c[static_cast<std::size_t>(n + N)]; }
  /// Builds c_{-N}..c_N from c_0..c_N by Hermitian symmetry.
  static MomentSequence from_nonnegative(std::vector<Complex> c_nonneg, Source source);
  void validate() const;
};

/// c_n = (1/(M-n)) sum_{k=0}^{M-1-n} g(x_{k+n}) conj(g(x_k)), c_{-n} = conj(c_n).
MomentSequence moments_from_trajectory(std::span<const Complex> series, int N);

/// Moments <K^n g, g>_G = g^* G K^n g from a fitted matrix.
MomentSequence moments_from_matrix(const DenseMatrix &K, const DenseMatrix &G,
                                   const ComplexVector &g, int N);

using DensityFunction = std::function<double(double)>;

struct SpectralMeasureApprox
{
  enum class Representation
  {
    atoms,
    density_samples,
    density_function
  };
  Representation representation = Representation::atoms;

  std::vector<double> theta;          // atom locations or sample grid
  std::vector<Complex> weights;       // atoms
  std::vector<double> values;         // density samples
  DensityFunction density;            // density_function
  std::vector<bool> failed;           // per-sample failure flags (resolvent path)

  std::string method;
  int N = 0;
  double epsilon = 0.0;
  std::string kernel;
  double weight_l1 = 0.0;        // sum |w_j| for atoms
  double max_imag_residue = 0.0; // largest discarded imaginary part
  double condition_estimate = 1.0;
  std::vector<std::string> warnings;
};

/// Atoms matching the moments c_{-N}..c_N exactly. Default nodes are
/// theta_j = 2 pi j / (2N+1), j = -N..N.
SpectralMeasureApprox interpolatory_quadrature(const MomentSequence &moments,
                                               std::optional<std::vector<double>> nodes = {});

/// Atoms: exact weighted sum. Densities: periodic trapezoid rule on
/// max(2N+1, quad_degree) nodes (or the stored samples).
Complex integrate_against(const SpectralMeasureApprox &measure,
                          const std::function<Complex(double)> &testfn, int quad_degree = 0);

/// (1/2pi) sum_{|k|<=N} c_k e^{-ik theta}.
SpectralMeasureApprox fourier_density(const MomentSequence &moments);

struct Filter
{
  enum class Kind
  {
    hat,
    cosine,
    vandeven4,
    bump,
    custom
  };
  Kind kind = Kind::hat;
  int order = 1;
  std::function<double(double)> nu;  // on [-1, 1]

  static Filter make(Kind kind);
  static Filter from_name(const std::string &name);
  double operator()(double x) const;
};

std::string to_string(Filter::Kind kind);

struct FilterCheck
{
  bool admissible = false;
  double value_at_zero = 0.0;
  double order_at_zero = 0.0;  // estimated order of 1 - nu(x) as x -> 0+
  double order_at_one = 0.0;   // estimated order of nu(x) as x -> 1-
  bool even = false;
  std::string detail;
};

/// Numerical check that nu is even with nu(0) = 1, nu^{(n)}(0) = 0 for
/// 1 <= n < m and nu^{(n)}(1) = 0 for n < m. The vanishing orders are read off
/// from finite-difference ratios nu(1-h)/nu(1-h/2) as h shrinks.
FilterCheck check_filter(const Filter &filter, int m);

/// (1/2pi) sum_{|k|<=N} nu(k/N) c_k e^{-ik theta}.
SpectralMeasureApprox filtered_density(const MomentSequence &moments, const Filter &filter);

struct RationalKernel
{
  int m = 1;
  double epsilon = 0.0;
  std::vector<Complex> poles;     // a_j; b_j = conj(a_j)
  std::vector<Complex> residues;  // alpha_j; beta_j = conj(alpha_j)
  double condition_estimate = 1.0;
  std::optional<std::string> warning;

  /// Unscaled kernel K(x) on the real line.
  double K(double x) const;
  /// Periodic kernel (1/2pi) sum_j Im(alpha_j cot((theta - eps a_j)/2)).
  double operator()(double theta) const;
};

RationalKernel rational_kernel_build(int m, double epsilon);

/// Poisson kernel (1/2pi)(1 - r^2)/(1 - 2r cos theta + r^2). The m = 1 rational
/// kernel equals this with r = exp(-epsilon).
double poisson_kernel(double r, double theta);

/// Operator data for the resolvent path: a matrix K with G-inner product and
/// the observable coordinates g.
struct ResolventSource
{
  DenseMatrix K;
  DenseMatrix G;
  ComplexVector g;
};

/// The same operator in G-orthonormal coordinates, where K is the unitary core.
ResolventSource resolvent_source(const MpResult &result, const ComplexVector &g);

/// sum_j K_eps(theta - theta_j) p_j on the grid.
SpectralMeasureApprox smoothed_density(const AtomicSpectralMeasure &atoms,
                                       const RationalKernel &kernel,
                                       const std::vector<double> &theta_grid);

/// -(1/2pi) sum_j Re(alpha_j g^* G (K + z_j)(K - z_j)^{-1} g), z_j = e^{i(theta - eps a_j)},
/// through a Schur factorization of K. Points where the shifted triangle has
/// condition number above 1e14 are flagged and set to NaN.
SpectralMeasureApprox smoothed_density(const ResolventSource &source,
                                       const RationalKernel &kernel,
                                       const std::vector<double> &theta_grid);

/// n equispaced points on [-pi, pi).
std::vector<double> theta_grid(int n = 2048);

}  // namespace koop
