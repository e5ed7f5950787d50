// SPDX-License-Identifier: Apache-2.0

#include "koop/hankel.hpp"

#include "koop/parallel.hpp"
#include "koop/resdmd.hpp"

namespace koop
{

void HankelConfig::validate(Eigen::Index length, Eigen::Index observables) const
{
  KOOP_REQUIRE(N >= 1 && M >= 1, "hankel: M and N must be positive");
  KOOP_REQUIRE(observables >= 1, "hankel: at least one observable is required");
  KOOP_REQUIRE(length >= M + N, "hankel: trajectory shorter than M + N");
  KOOP_REQUIRE(eps_tol > 0.0, "hankel: eps_tol must be positive");
}

std::pair<DenseMatrix, DenseMatrix> hankel_matrices(std::span<const Complex> series,
                                                    Eigen::Index M, Eigen::Index N)
{
  KOOP_REQUIRE(M >= 1 && N >= 1, "hankel_matrices: M and N must be positive");
  KOOP_REQUIRE(static_cast<Eigen::Index>(series.size()) >= M + N,
               "hankel_matrices: series shorter than M + N");
  DenseMatrix X(M, N), Y(M, N);
  for (Eigen::Index j = 0; j < N; ++j)
  {
    for (Eigen::Index i = 0; i < M; ++i)
    {
      X(i, j) = series[static_cast<std::size_t>(i + j)];
      Y(i, j) = series[static_cast<std::size_t>(i + j + 1)];
    }
  }
  return {std::move(X), std::move(Y)};
}

DenseMatrix observable_series(const RealMatrix &trajectory, const std::vector<Observable> &obs)
{
  KOOP_REQUIRE(!obs.empty(), "observable_series: no observables");
  DenseMatrix out(trajectory.rows(), static_cast<Eigen::Index>(obs.size()));
  for (std::size_t k = 0; k < obs.size(); ++k)
  {
    KOOP_REQUIRE(obs[k].kind != Observable::Kind::coordinate ||
                   (obs[k].index >= 0 && obs[k].index < trajectory.cols()),
                 "observable_series: coordinate index out of range");
    for (Eigen::Index j = 0; j < trajectory.rows(); ++j)
    {
      out(j, static_cast<Eigen::Index>(k)) = obs[k](trajectory.row(j).transpose());
    }
  }
  return out;
}

DataMatrices hankel_data(const DenseMatrix &series, const HankelConfig &config,
                         RealVector *scalings)
{
  const Eigen::Index p = series.cols();
  config.validate(series.rows(), p);
  require_finite(series, "hankel series");
  const Eigen::Index M = config.M, N = config.N;
  // Norms over x_0..x_{M+N-1}.
  const double n1 = series.col(0).head(M + N).norm();
  if (!(n1 > 0.0))
  {
    throw DegenerateData("hankel: the first observable has zero norm");
  }
  RealVector alpha(p);
  DataMatrices out;
  out.PsiX.resize(M, p * N);
  out.PsiY.resize(M, p * N);
  for (Eigen::Index k = 0; k < p; ++k)
  {
    alpha(k) = series.col(k).head(M + N).norm() / n1;
  }
  parallel_for(static_cast<std::size_t>(p),
               [&](std::size_t kk)
               {
                 const auto k = static_cast<Eigen::Index>(kk);
                 const ComplexVector s = series.col(k).head(M + N);
                 auto [X, Y] = hankel_matrices(std::span<const Complex>(s.data(), s.size()), M, N);
                 out.PsiX.middleCols(k * N, N) = alpha(k) * X;
                 out.PsiY.middleCols(k * N, N) = alpha(k) * Y;
               });
  out.W = RealVector::Constant(M, 1.0 / static_cast<double>(M));
  if (scalings)
  {
    *scalings = alpha;
  }
  return out;
}

HankelResult hankel_dmd(const DenseMatrix &series, const HankelConfig &config)
{
  HankelResult out;
  const DataMatrices data = hankel_data(series, config, &out.scalings);
  const SvdResult s = svd(data.PsiX);
  out.singular_values = s.singular_values;
  const double cut = config.relative_tol
                       ? config.eps_tol * (s.singular_values.size() ? s.singular_values(0) : 0.0)
                       : config.eps_tol;
  Eigen::Index r = 0;
  while (r < s.singular_values.size() && s.singular_values(r) >= cut && s.singular_values(r) > 0.0)
  {
    ++r;
  }
  if (r == 0)
  {
    throw DegenerateData("hankel_dmd: no singular value above eps_tol");
  }
  out.rank = r;
  const DenseMatrix U1 = s.U.leftCols(r);
  const DenseMatrix U2 = s.V.leftCols(r);
  DenseMatrix Khat = U1.adjoint() * data.PsiY * U2;
  for (Eigen::Index i = 0; i < r; ++i)
  {
    Khat.row(i) /= s.singular_values(i);
  }
  const EigResult e = eig(Khat);
  out.eigenvalues = e.eigenvalues;
  out.coeffs = U2 * e.right_vectors;
  return out;
}

RealVector hankel_residuals(const DenseMatrix &series, const HankelConfig &config,
                            const HankelResult &result)
{
  const DataMatrices data = hankel_data(series, config);
  RealVector res(result.rank);
  parallel_for(static_cast<std::size_t>(result.rank),
               [&](std::size_t i)
               {
                 const auto j = static_cast<Eigen::Index>(i);
                 res(j) = residual_from_data(data, result.eigenvalues(j), result.coeffs.col(j));
               });
  return res;
}

}  // namespace koop
