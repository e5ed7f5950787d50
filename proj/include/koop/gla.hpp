// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "koop/numerics.hpp"

namespace koop
{

struct TracePoint
{
  Eigen::Index n = 0;
  ComplexVector value;
  /// ||value - final average||, a proxy for the remaining error.
  double change = 0.0;
};

struct KoopmanMode
{
  Complex z;
  ComplexVector mode;
  std::vector<TracePoint> trace;
};

struct GlaOptions
{
  /// Record the average at n = 1, 2, 4, ... and at the horizon.
  bool trace = false;
};

/// (1/n) sum_{k=1}^n z^{-k} g(x_k) with compensated summation. Row k of
/// `series` holds g(x_k); row 0 is x_0 and is not used. Powers of z are
/// evaluated directly, so |z| != 1 is allowed for finite horizons as long as
/// the terms stay representable.
ComplexVector gla_average(const DenseMatrix &series, Complex z, Eigen::Index n,
                          std::vector<TracePoint> *trace = nullptr);

struct ModeExtraction
{
  std::vector<KoopmanMode> modes;
  std::vector<std::string> warnings;
};

/// Successive averaging: each mode is computed on the series with the
/// previously found modes z_i^k s_i subtracted.
ModeExtraction extract_modes(const DenseMatrix &series, const std::vector<Complex> &eigenvalues,
                             Eigen::Index n, const GlaOptions &opts = {});

/// (1,2) entry of the Cesaro average (1/n) sum_{k=1}^n T^k of the Jordan block
/// T = [[1, 1], [0, 1]] at z = 1, computed with gla_average on the orbit
/// T^k e_2. Equals (n+1)/2.
double gla_cesaro_counterexample_check(Eigen::Index n);

}  // namespace koop
