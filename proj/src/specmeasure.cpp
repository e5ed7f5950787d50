// SPDX-License-Identifier: Apache-2.0

#include "koop/specmeasure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "koop/parallel.hpp"

namespace koop
{

namespace
{

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

MomentSequence MomentSequence::from_nonnegative(std::vector<Complex> c_nonneg, Source source)
{
  KOOP_REQUIRE(!c_nonneg.empty(), "MomentSequence: c_0 is required");
  MomentSequence m;
  m.N = static_cast<int>(c_nonneg.size()) - 1;
  m.source = source;
  m.c.resize(2 * c_nonneg.size() - 1);
  for (int n = 0; n <= m.N; ++n)
  {
    m.c[static_cast<std::size_t>(m.N + n)] = c_nonneg[static_cast<std::size_t>(n)];
    m.c[static_cast<std::size_t>(m.N - n)] = std::conj(c_nonneg[static_cast<std::size_t>(n)]);
  }
  // c_0 is real for any positive measure.
  m.c[static_cast<std::size_t>(m.N)] = c_nonneg[0].real();
  return m;
}

void MomentSequence::validate() const
{
  KOOP_REQUIRE(N >= 0 && c.size() == static_cast<std::size_t>(2 * N + 1),
               "MomentSequence: expected 2N+1 values");
  for (const Complex &v : c)
  {
    KOOP_REQUIRE(std::isfinite(v.real()) && std::isfinite(v.imag()),
                 "MomentSequence: non-finite moment");
  }
}

MomentSequence moments_from_trajectory(std::span<const Complex> series, int N)
{
  KOOP_REQUIRE(N >= 0, "moments_from_trajectory: N must be nonnegative");
  const auto M = static_cast<std::ptrdiff_t>(series.size());
  KOOP_REQUIRE(M >= 2 * N + 2, "moments_from_trajectory: series shorter than 2N + 2");
  std::vector<Complex> c(static_cast<std::size_t>(N + 1));
  parallel_for(c.size(),
               [&](std::size_t nn)
               {
                 const auto n = static_cast<std::ptrdiff_t>(nn);
                 Complex acc = 0.0;
                 for (std::ptrdiff_t k = 0; k + n < M; ++k)
                 {
                   acc += series[static_cast<std::size_t>(k + n)] *
                          std::conj(series[static_cast<std::size_t>(k)]);
                 }
                 c[nn] = acc / static_cast<double>(M - n);
               });
  return MomentSequence::from_nonnegative(std::move(c),
                                          MomentSequence::Source::trajectory_autocorrelation);
}

MomentSequence moments_from_matrix(const DenseMatrix &K, const DenseMatrix &G,
                                   const ComplexVector &g, int N)
{
  KOOP_REQUIRE(N >= 0, "moments_from_matrix: N must be nonnegative");
  KOOP_REQUIRE(K.rows() == K.cols() && G.rows() == K.rows() && g.size() == K.rows(),
               "moments_from_matrix: dimension mismatch");
  const ComplexVector Gg = G * g;
  std::vector<Complex> c;
  ComplexVector v = g;
  for (int n = 0; n <= N; ++n)
  {
    c.push_back(Gg.dot(v));
    v = K * v;
  }
  return MomentSequence::from_nonnegative(std::move(c), MomentSequence::Source::gram_matrices);
}

SpectralMeasureApprox interpolatory_quadrature(const MomentSequence &moments,
                                               std::optional<std::vector<double>> nodes)
{
  moments.validate();
  const int N = moments.N;
  const std::size_t n = moments.c.size();
  std::vector<double> theta;
  if (nodes)
  {
    KOOP_REQUIRE(nodes->size() == n, "interpolatory_quadrature: need 2N+1 nodes");
    theta = *nodes;
  }
  else
  {
    for (int j = -N; j <= N; ++j)
    {
      theta.push_back(kTwoPi * j / static_cast<double>(2 * N + 1));
    }
  }
  // sum_j w_j z_j^k = c_k for k = -N..N. With u_j = w_j z_j^{-N} this is a
  // Vandermonde system in the powers 0..2N.
  std::vector<Complex> z(n);
  for (std::size_t j = 0; j < n; ++j)
  {
    z[j] = std::polar(1.0, theta[j]);
  }
  const VandermondeResult v = solve_vandermonde(z, moments.c);

  SpectralMeasureApprox out;
  out.representation = SpectralMeasureApprox::Representation::atoms;
  out.method = "interpolatory_quadrature";
  out.N = N;
  out.condition_estimate = v.condition_estimate;
  if (v.warning)
  {
    out.warnings.push_back(*v.warning);
  }
  for (std::size_t j = 0; j < n; ++j)
  {
    const Complex w = v.values(static_cast<Eigen::Index>(j)) * std::polar(1.0, N * theta[j]);
    out.theta.push_back(theta[j]);
    out.weights.push_back(w);
    out.weight_l1 += std::abs(w);
    out.max_imag_residue = std::max(out.max_imag_residue, std::abs(w.imag()));
  }
  return out;
}

Complex integrate_against(const SpectralMeasureApprox &measure,
                          const std::function<Complex(double)> &testfn, int quad_degree)
{
  using R = SpectralMeasureApprox::Representation;
  switch (measure.representation)
  {
    case R::atoms:
    {
      Complex acc = 0.0;
      for (std::size_t j = 0; j < measure.theta.size(); ++j)
      {
        acc += measure.weights[j] * testfn(measure.theta[j]);
      }
      return acc;
    }
    case R::density_samples:
    {
      KOOP_REQUIRE(!measure.theta.empty() && measure.theta.size() == measure.values.size(),
                   "integrate_against: malformed density samples");
      Complex acc = 0.0;
      for (std::size_t j = 0; j < measure.theta.size(); ++j)
      {
        acc += measure.values[j] * testfn(measure.theta[j]);
      }
      return acc * (kTwoPi / static_cast<double>(measure.theta.size()));
    }
    case R::density_function:
    {
      KOOP_REQUIRE(static_cast<bool>(measure.density), "integrate_against: missing density");
      const int l = std::max(2 * measure.N + 1, quad_degree);
      Complex acc = 0.0;
      for (int j = 0; j < l; ++j)
      {
        const double t = -kPi + kTwoPi * j / l;
        acc += measure.density(t) * testfn(t);
      }
      return acc * (kTwoPi / l);
    }
  }
  return 0.0;
}

namespace
{

SpectralMeasureApprox weighted_series(const MomentSequence &moments, std::vector<double> nu,
                                      std::string method)
{
  moments.validate();
  const int N = moments.N;
  std::vector<Complex> a(static_cast<std::size_t>(N + 1));
  double asym = 0.0;
  for (int k = 0; k <= N; ++k)
  {
    a[static_cast<std::size_t>(k)] = nu[static_cast<std::size_t>(k)] * moments.at(k);
    asym += nu[static_cast<std::size_t>(k)] * std::abs(moments.at(-k) - std::conj(moments.at(k)));
  }
  SpectralMeasureApprox out;
  out.representation = SpectralMeasureApprox::Representation::density_function;
  out.method = std::move(method);
  out.N = N;
  out.max_imag_residue = asym / kTwoPi;
  out.density = [a](double theta)
  {
    // Hermitian symmetry folds the series into c_0 + 2 Re sum_{k>0}.
    double acc = a[0].real();
    for (std::size_t k = 1; k < a.size(); ++k)
    {
      acc += 2.0 * (a[k] * std::polar(1.0, -static_cast<double>(k) * theta)).real();
    }
    return acc / kTwoPi;
  };
  return out;
}

}  // namespace

SpectralMeasureApprox fourier_density(const MomentSequence &moments)
{
  return weighted_series(moments, std::vector<double>(static_cast<std::size_t>(moments.N + 1), 1.0),
                         "fourier");
}

std::string to_string(Filter::Kind kind)
{
  switch (kind)
  {
    case Filter::Kind::hat:
      return "hat";
    case Filter::Kind::cosine:
      return "cosine";
    case Filter::Kind::vandeven4:
      return "vandeven4";
    case Filter::Kind::bump:
      return "bump";
    case Filter::Kind::custom:
      return "custom";
  }
  return "unknown";
}

Filter Filter::make(Kind kind)
{
  Filter f;
  f.kind = kind;
  switch (kind)
  {
    case Kind::hat:
      f.order = 1;
      f.nu = [](double x) { return 1.0 - std::abs(x); };
      break;
    case Kind::cosine:
      f.order = 2;
      f.nu = [](double x) { return 0.5 * (1.0 + std::cos(kPi * x)); };
      break;
    case Kind::vandeven4:
      f.order = 4;
      f.nu = [](double x)
      {
        const double a = std::abs(x), a4 = a * a * a * a;
        return 1.0 - 35.0 * a4 + 84.0 * a4 * a - 70.0 * a4 * a * a + 20.0 * a4 * a * a * a;
      };
      break;
    case Kind::bump:
      // Vanishes to all orders at 0 and 1; the declared order is what the
      // admissibility check tests.
      f.order = 8;
      f.nu = [](double x)
      {
        constexpr double c = 0.109550455106347;
        const double a = std::abs(x);
        if (a == 0.0)
        {
          return 1.0;
        }
        if (a >= 1.0)
        {
          return 0.0;
        }
        return std::exp(-2.0 / (1.0 - a) * std::exp(-c / (a * a * a * a)));
      };
      break;
    case Kind::custom:
      throw ContractViolation("Filter::make: custom filters need an explicit function");
  }
  return f;
}

Filter Filter::from_name(const std::string &name)
{
  for (Kind k : {Kind::hat, Kind::cosine, Kind::vandeven4, Kind::bump})
  {
    if (to_string(k) == name)
    {
      return make(k);
    }
  }
  if (name == "vandeven")
  {
    return make(Kind::vandeven4);
  }
  throw ContractViolation("unknown filter: " + name);
}

double Filter::operator()(double x) const
{
  KOOP_REQUIRE(static_cast<bool>(nu), "Filter: no function");
  return std::abs(x) > 1.0 ? 0.0 : nu(x);
}

namespace
{

// Order p of f(h) ~ h^p as h -> 0+, from f(h)/f(h/2). Exact zeros count as
// infinite order.
double vanishing_order(const std::function<double(double)> &f)
{
  double est = 0.0;
  for (double h : {1.0 / 64.0, 1.0 / 128.0})
  {
    const double a = std::abs(f(h)), b = std::abs(f(0.5 * h));
    if (a == 0.0 || b == 0.0)
    {
      return std::numeric_limits<double>::infinity();
    }
    est = std::log2(a / b);
  }
  return est;
}

}  // namespace

FilterCheck check_filter(const Filter &filter, int m)
{
  KOOP_REQUIRE(m >= 1, "check_filter: order must be positive");
  FilterCheck out;
  out.value_at_zero = filter(0.0);
  out.even = true;
  for (int i = 1; i <= 64; ++i)
  {
    const double x = i / 64.0;
    if (std::abs(filter(x) - filter(-x)) > 1e-14)
    {
      out.even = false;
    }
  }
  out.order_at_zero = vanishing_order([&](double h) { return 1.0 - filter(h); });
  out.order_at_one = vanishing_order([&](double h) { return filter(1.0 - h); });
  const double slack = 0.2;
  out.admissible = out.even && std::abs(out.value_at_zero - 1.0) <= 1e-14 &&
                   out.order_at_zero >= m - slack && out.order_at_one >= m - slack;
  out.detail = "order at 0: " + std::to_string(out.order_at_zero) +
               ", order at 1: " + std::to_string(out.order_at_one);
  return out;
}

SpectralMeasureApprox filtered_density(const MomentSequence &moments, const Filter &filter)
{
  const int N = moments.N;
  std::vector<double> nu(static_cast<std::size_t>(N + 1));
  for (int k = 0; k <= N; ++k)
  {
    nu[static_cast<std::size_t>(k)] = N == 0 ? 1.0 : filter(static_cast<double>(k) / N);
  }
  SpectralMeasureApprox out = weighted_series(moments, std::move(nu), "filtered_fourier");
  out.kernel = to_string(filter.kind);
  return out;
}

double RationalKernel::K(double x) const
{
  Complex acc = 0.0;
  for (std::size_t j = 0; j < poles.size(); ++j)
  {
    acc += residues[j] / (x - poles[j]);
  }
  // (1/2 pi i)(s - conj(s)) = Im(s) / pi.
  return acc.imag() / kPi;
}

double RationalKernel::operator()(double theta) const
{
  double acc = 0.0;
  for (std::size_t j = 0; j < poles.size(); ++j)
  {
    const Complex w = 0.5 * (theta - epsilon * poles[j]);
    acc += (residues[j] * std::cos(w) / std::sin(w)).imag();
  }
  return acc / kTwoPi;
}

RationalKernel rational_kernel_build(int m, double epsilon)
{
  KOOP_REQUIRE(m >= 1, "rational_kernel_build: m must be at least 1");
  KOOP_REQUIRE(epsilon > 0.0 && std::isfinite(epsilon), "rational_kernel_build: epsilon must be positive");
  RationalKernel k;
  k.m = m;
  k.epsilon = epsilon;
  for (int j = 1; j <= m; ++j)
  {
    k.poles.emplace_back(2.0 * j / (m + 1) - 1.0, 1.0);
  }
  std::vector<Complex> rhs(static_cast<std::size_t>(m), 0.0);
  rhs[0] = 1.0;
  const VandermondeResult v = solve_vandermonde(k.poles, rhs);
  k.residues.assign(v.values.data(), v.values.data() + v.values.size());
  k.condition_estimate = v.condition_estimate;
  k.warning = v.warning;
  return k;
}

double poisson_kernel(double r, double theta)
{
  return (1.0 - r * r) / (kTwoPi * (1.0 - 2.0 * r * std::cos(theta) + r * r));
}

ResolventSource resolvent_source(const MpResult &result, const ComplexVector &g)
{
  const auto N = result.unitary_core.rows();
  return {result.unitary_core, DenseMatrix::Identity(N, N), g_coordinates(result, g)};
}

std::vector<double> theta_grid(int n)
{
  KOOP_REQUIRE(n >= 1, "theta_grid: n must be positive");
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
  {
    t[static_cast<std::size_t>(k)] = -kPi + kTwoPi * k / n;
  }
  return t;
}

SpectralMeasureApprox smoothed_density(const AtomicSpectralMeasure &atoms,
                                       const RationalKernel &kernel,
                                       const std::vector<double> &grid)
{
  KOOP_REQUIRE(atoms.theta.size() == atoms.mass.size(), "smoothed_density: malformed atoms");
  SpectralMeasureApprox out;
  out.representation = SpectralMeasureApprox::Representation::density_samples;
  out.method = "rational_kernel_atoms";
  out.epsilon = kernel.epsilon;
  out.kernel = "rational_m" + std::to_string(kernel.m);
  out.theta = grid;
  out.values.assign(grid.size(), 0.0);
  out.failed.assign(grid.size(), false);
  parallel_for(grid.size(),
               [&](std::size_t i)
               {
                 double acc = 0.0;
                 for (std::size_t j = 0; j < atoms.theta.size(); ++j)
                 {
                   acc += kernel(grid[i] - atoms.theta[j]) * atoms.mass[j];
                 }
                 out.values[i] = acc;
               });
  return out;
}

SpectralMeasureApprox smoothed_density(const ResolventSource &source,
                                       const RationalKernel &kernel,
                                       const std::vector<double> &grid)
{
  const Eigen::Index N = source.K.rows();
  KOOP_REQUIRE(N >= 1 && source.K.cols() == N && source.G.rows() == N && source.G.cols() == N &&
                 source.g.size() == N,
               "smoothed_density: dimension mismatch");
  Eigen::ComplexSchur<DenseMatrix> cs(source.K, true);
  if (cs.info() != Eigen::Success)
  {
    throw NumericalFailure("smoothed_density: Schur factorization did not converge");
  }
  const DenseMatrix &U = cs.matrixU();
  const DenseMatrix &T = cs.matrixT();
  const ComplexVector Gg = source.G * source.g;
  const Complex c0 = Gg.dot(source.g);
  const ComplexVector h = U.adjoint() * source.g;
  const ComplexVector q = U.adjoint() * Gg;

  SpectralMeasureApprox out;
  out.representation = SpectralMeasureApprox::Representation::density_samples;
  out.method = "rational_kernel_resolvent";
  out.epsilon = kernel.epsilon;
  out.kernel = "rational_m" + std::to_string(kernel.m);
  out.theta = grid;
  out.values.assign(grid.size(), 0.0);
  out.failed.assign(grid.size(), false);
  parallel_for(grid.size(),
               [&](std::size_t i)
               {
                 double acc = 0.0;
                 for (std::size_t j = 0; j < kernel.poles.size(); ++j)
                 {
                   const Complex z =
                     std::exp(Complex(0.0, 1.0) * (grid[i] - kernel.epsilon * kernel.poles[j]));
                   DenseMatrix S = T;
                   S.diagonal().array() -= z;
                   const RealVector d = S.diagonal().cwiseAbs();
                   const double dmin = d.minCoeff();
                   const double snorm = S.cwiseAbs().colwise().sum().maxCoeff();
                   if (!(dmin > 0.0) || snorm / dmin > 1e14)
                   {
                     out.failed[i] = true;
                     break;
                   }
                   // (K + z)(K - z)^{-1} g = g + 2z (K - z)^{-1} g.
                   const ComplexVector y = S.triangularView<Eigen::Upper>().solve(h);
                   const Complex form = c0 + 2.0 * z * q.dot(y);
                   acc += (kernel.residues[j] * form).real();
                 }
                 out.values[i] =
                   out.failed[i] ? std::numeric_limits<double>::quiet_NaN() : -acc / kTwoPi;
               });
  for (std::size_t i = 0; i < grid.size(); ++i)
  {
    if (out.failed[i])
    {
      out.warnings.push_back("resolvent solve too ill-conditioned at theta = " +
                             std::to_string(grid[i]));
    }
  }
  return out;
}

}  // namespace koop
