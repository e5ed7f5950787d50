// SPDX-License-Identifier: Apache-2.0

#include "koop/resdmd.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "koop/parallel.hpp"

namespace koop
{

double residual(const KoopmanFit &fit, Complex lambda, const ComplexVector &coeffs)
{
  const Eigen::Index N = fit.G.rows();
  KOOP_REQUIRE(coeffs.size() == N, "residual: coefficient length mismatch");
  if (fit.RX.size() > 0)
  {
    // g^*(L - lambda A^* - conj(lambda) A + |lambda|^2 G)g = ||(RY - lambda RX) g||^2.
    const double den = (fit.RX * coeffs).norm();
    if (!(den > 0.0))
    {
      throw DegenerateData("residual: g^* G g is not positive");
    }
    return (fit.RY * coeffs - lambda * (fit.RX * coeffs)).norm() / den;
  }
  const ComplexVector Gg = fit.G * coeffs;
  const double den = coeffs.dot(Gg).real();
  if (!(den > 0.0))
  {
    throw DegenerateData("residual: g^* G g is not positive");
  }
  const ComplexVector Ag = fit.A * coeffs;
  const ComplexVector Ahg = fit.A.adjoint() * coeffs;
  const Complex num = coeffs.dot(fit.L * coeffs) - lambda * coeffs.dot(Ahg) -
                      std::conj(lambda) * coeffs.dot(Ag) + std::norm(lambda) * coeffs.dot(Gg);
  return std::sqrt(std::max(num.real(), 0.0) / den);
}

double residual_from_data(const DataMatrices &data, Complex lambda, const ComplexVector &coeffs)
{
  KOOP_REQUIRE(coeffs.size() == data.cols(), "residual_from_data: coefficient length mismatch");
  const RealVector sw = data.W.cwiseSqrt();
  const ComplexVector x = sw.asDiagonal() * (data.PsiX * coeffs);
  const ComplexVector y = sw.asDiagonal() * (data.PsiY * coeffs);
  const double den = x.norm();
  if (!(den > 0.0))
  {
    throw DegenerateData("residual_from_data: W^{1/2} Psi_X g vanishes");
  }
  return (y - lambda * x).norm() / den;
}

std::vector<ValidatedEigenpair> validate_eigenpairs(const KoopmanFit &fit)
{
  const EigResult e = eig(fit.K);
  std::vector<ValidatedEigenpair> out(static_cast<std::size_t>(e.eigenvalues.size()));
  parallel_for(out.size(),
               [&](std::size_t i)
               {
                 const auto j = static_cast<Eigen::Index>(i);
                 out[i].lambda = e.eigenvalues(j);
                 out[i].coeffs = e.right_vectors.col(j);
                 out[i].res = residual(fit, out[i].lambda, out[i].coeffs);
               });
  std::stable_sort(out.begin(), out.end(),
                   [](const ValidatedEigenpair &a, const ValidatedEigenpair &b)
                   { return a.res < b.res; });
  return out;
}

std::vector<Complex> polar_grid(double r_min, double r_max, int n_r, int n_theta)
{
  KOOP_REQUIRE(n_r >= 1 && n_theta >= 1, "polar_grid: counts must be positive");
  KOOP_REQUIRE(r_min >= 0.0 && r_max >= r_min, "polar_grid: invalid radius range");
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(n_r) * static_cast<std::size_t>(n_theta));
  for (int i = 0; i < n_r; ++i)
  {
    const double r = n_r == 1 ? r_min : r_min + (r_max - r_min) * i / (n_r - 1);
    for (int j = 0; j < n_theta; ++j)
    {
      out.push_back(std::polar(r, 2.0 * std::numbers::pi * j / n_theta));
    }
  }
  return out;
}

PseudospectrumGrid pseudospectrum(const DataMatrices &data, const std::vector<Complex> &grid,
                                  double epsilon, const PseudospectrumOptions &opts)
{
  data.validate();
  KOOP_REQUIRE(!grid.empty(), "pseudospectrum: empty grid");
  KOOP_REQUIRE(epsilon > 0.0, "pseudospectrum: epsilon must be positive");
  const Eigen::Index N = data.cols();
  KOOP_REQUIRE(data.rows() >= N, "pseudospectrum: fewer snapshots than dictionary functions");

  const RealVector sw = data.W.cwiseSqrt();
  const QrResult qr = thin_qr(sw.asDiagonal() * data.PsiX);
  if (qr.rank < N)
  {
    throw DegenerateData("pseudospectrum: W^{1/2} Psi_X has numerical rank " +
                         std::to_string(qr.rank) + " < " + std::to_string(N) +
                         "; re-run with a truncated dictionary");
  }
  const auto Rtri = qr.R.triangularView<Eigen::Upper>();
  // B = W^{1/2} Psi_Y R^{-1}
  DenseMatrix B = sw.asDiagonal() * data.PsiY;
  Rtri.solveInPlace<Eigen::OnTheRight>(B);
  const DenseMatrix C1 = qr.Q.adjoint() * B;

  DenseMatrix C2;
  DenseMatrix R2;
  if (opts.direct)
  {
    // B - zQ = [Q Q2] [C1 - z; R2], with B - Q C1 = Q2 R2 orthogonal to Q.
    DenseMatrix P = B - qr.Q * C1;
    P -= qr.Q * (qr.Q.adjoint() * P);
    Eigen::HouseholderQR<DenseMatrix> q2(P);
    R2 = q2.matrixQR().topRows(std::min(P.rows(), N)).triangularView<Eigen::Upper>();
  }
  else
  {
    C2 = hermitian_part(B.adjoint() * B);
  }

  PseudospectrumGrid out;
  out.points = grid;
  out.epsilon = epsilon;
  out.tau.resize(static_cast<Eigen::Index>(grid.size()));
  out.accepted.assign(grid.size(), false);
  if (opts.vectors)
  {
    out.coeffs.resize(grid.size());
  }
  const DenseMatrix I = DenseMatrix::Identity(N, N);
  parallel_for(grid.size(),
               [&](std::size_t l)
               {
                 const Complex z = grid[l];
                 double t = 0.0;
                 ComplexVector h;
                 if (opts.direct)
                 {
                   DenseMatrix S(N + R2.rows(), N);
                   S << C1 - z * I, R2;
                   Eigen::BDCSVD<DenseMatrix> dec(S, opts.vectors ? Eigen::ComputeThinV : 0);
                   t = dec.singularValues()(N - 1);
                   if (opts.vectors)
                   {
                     h = dec.matrixV().col(N - 1);
                   }
                 }
                 else
                 {
                   const DenseMatrix H = hermitian_part(C2 - z * C1.adjoint() - std::conj(z) * C1 +
                                                        std::norm(z) * I);
                   Eigen::SelfAdjointEigenSolver<DenseMatrix> es(
                     H, opts.vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
                   t = std::sqrt(std::max(es.eigenvalues()(0), 0.0));
                   if (opts.vectors)
                   {
                     h = es.eigenvectors().col(0);
                   }
                 }
                 out.tau(static_cast<Eigen::Index>(l)) = t;
                 out.accepted[l] = t < epsilon;
                 if (opts.vectors)
                 {
                   Rtri.solveInPlace(h);
                   out.coeffs[l] = h;
                 }
               });
  return out;
}

std::vector<double> forecast_bound(const KoopmanFit &fit, const ComplexVector &coeffs,
                                   double proj_error, double opnorm_bound, int steps)
{
  KOOP_REQUIRE(opnorm_bound >= 0.0, "forecast_bound: operator norm bound must be nonnegative");
  KOOP_REQUIRE(proj_error >= 0.0, "forecast_bound: projection error must be nonnegative");
  KOOP_REQUIRE(steps >= 1, "forecast_bound: steps must be at least 1");
  KOOP_REQUIRE(coeffs.size() == fit.K.rows(), "forecast_bound: coefficient length mismatch");
  // g^*(L - K^*GK)g = ||(RY - RX K) g||^2 when the factor is available.
  const bool factored = fit.RX.size() > 0;
  const DenseMatrix D = factored ? DenseMatrix(fit.RY - fit.RX * fit.K)
                                 : hermitian_part(fit.L - fit.K.adjoint() * fit.G * fit.K);
  auto defect = [&](const ComplexVector &v)
  {
    return factored ? (D * v).norm() : std::sqrt(std::max(v.dot(D * v).real(), 0.0));
  };
  std::vector<double> b;
  b.reserve(static_cast<std::size_t>(steps));
  ComplexVector v = coeffs;
  b.push_back(opnorm_bound * proj_error + defect(v));
  for (int j = 1; j < steps; ++j)
  {
    v = fit.K * v;
    b.push_back(opnorm_bound * b.back() + defect(v));
  }
  return b;
}

}  // namespace koop
