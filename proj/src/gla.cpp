// SPDX-License-Identifier: Apache-2.0

#include "koop/gla.hpp"

#include <cmath>

namespace koop
{

namespace
{

// Neumaier variant of Kahan summation, applied to real and imaginary parts.
struct CompensatedSum
{
  double sum = 0.0, c = 0.0;

  void add(double x)
  {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
    {
      c += (sum - t) + x;
    }
    else
    {
      c += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + c; }
};

Complex inverse_power(Complex z, Eigen::Index k)
{
  // z^{-k} = exp(-k log z); exact on the unit circle up to one rounding in
  // the angle product.
  const double kk = static_cast<double>(k);
  const double mag = std::exp(-kk * std::log(std::abs(z)));
  return std::polar(mag, -kk * std::arg(z));
}

}  // namespace

ComplexVector gla_average(const DenseMatrix &series, Complex z, Eigen::Index n,
                          std::vector<TracePoint> *trace)
{
  KOOP_REQUIRE(n >= 1, "gla_average: n must be positive");
  KOOP_REQUIRE(series.rows() >= n + 1, "gla_average: series shorter than n + 1");
  KOOP_REQUIRE(std::abs(z) > 0.0 && std::isfinite(std::abs(z)), "gla_average: z must be nonzero");
  const Eigen::Index p = series.cols();
  std::vector<CompensatedSum> re(static_cast<std::size_t>(p)), im(static_cast<std::size_t>(p));
  std::vector<TracePoint> points;
  Eigen::Index next_mark = 1;
  for (Eigen::Index k = 1; k <= n; ++k)
  {
    const Complex w = inverse_power(z, k);
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
    {
      throw NumericalFailure("gla_average: z^{-k} overflowed at k = " + std::to_string(k));
    }
    for (Eigen::Index c = 0; c < p; ++c)
    {
      const Complex t = w * series(k, c);
      re[static_cast<std::size_t>(c)].add(t.real());
      im[static_cast<std::size_t>(c)].add(t.imag());
    }
    if (trace && (k == next_mark || k == n))
    {
      ComplexVector v(p);
      for (Eigen::Index c = 0; c < p; ++c)
      {
        v(c) = Complex(re[static_cast<std::size_t>(c)].value(), im[static_cast<std::size_t>(c)].value()) /
               static_cast<double>(k);
      }
      points.push_back({k, v, 0.0});
      while (next_mark <= k)
      {
        next_mark *= 2;
      }
    }
  }
  ComplexVector out(p);
  for (Eigen::Index c = 0; c < p; ++c)
  {
    out(c) = Complex(re[static_cast<std::size_t>(c)].value(), im[static_cast<std::size_t>(c)].value()) /
             static_cast<double>(n);
    if (!std::isfinite(out(c).real()) || !std::isfinite(out(c).imag()))
    {
      throw NumericalFailure("gla_average: average is not finite");
    }
  }
  if (trace)
  {
    for (auto &tp : points)
    {
      tp.change = (tp.value - out).norm();
    }
    *trace = std::move(points);
  }
  return out;
}

ModeExtraction extract_modes(const DenseMatrix &series, const std::vector<Complex> &eigenvalues,
                             Eigen::Index n, const GlaOptions &opts)
{
  KOOP_REQUIRE(!eigenvalues.empty(), "extract_modes: no eigenvalues given");
  for (std::size_t j = 1; j < eigenvalues.size(); ++j)
  {
    KOOP_REQUIRE(std::abs(eigenvalues[j]) <= std::abs(eigenvalues[j - 1]) * (1.0 + 1e-12),
                 "extract_modes: eigenvalues must be ordered by nonincreasing modulus");
  }
  ModeExtraction out;
  for (std::size_t j = 1; j < eigenvalues.size(); ++j)
  {
    if (std::abs(std::abs(eigenvalues[j]) - std::abs(eigenvalues[j - 1])) > 1e-12)
    {
      out.warnings.push_back("extract_modes: eigenvalue moduli differ; successive subtraction "
                             "may be numerically unstable");
      break;
    }
  }
  DenseMatrix residual = series;
  const Eigen::Index rows = std::min<Eigen::Index>(series.rows(), n + 1);
  for (const Complex z : eigenvalues)
  {
    KoopmanMode m;
    m.z = z;
    m.mode = gla_average(residual, z, n, opts.trace ? &m.trace : nullptr);
    // Subtract s z^k from rows 0..n.
    for (Eigen::Index k = 0; k < rows; ++k)
    {
      const Complex zk = inverse_power(z, -k);
      residual.row(k) -= (zk * m.mode).transpose();
    }
    out.modes.push_back(std::move(m));
  }
  return out;
}

double gla_cesaro_counterexample_check(Eigen::Index n)
{
  KOOP_REQUIRE(n >= 1, "gla_cesaro_counterexample_check: n must be positive");
  // T^k e_2 = (k, 1).
  DenseMatrix orbit(n + 1, 2);
  for (Eigen::Index k = 0; k <= n; ++k)
  {
    orbit(k, 0) = static_cast<double>(k);
    orbit(k, 1) = 1.0;
  }
  return gla_average(orbit, 1.0, n)(0).real();
}

}  // namespace koop
