// SPDX-License-Identifier: Apache-2.0

#include "koop/dmd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace koop
{

KoopmanFit edmd_fit(const DataMatrices &data)
{
  data.validate();
  if (data.PsiX.cwiseAbs().maxCoeff() == 0.0)
  {
    throw DegenerateData("edmd_fit: Psi_X is identically zero");
  }
  const RealVector sw = data.W.cwiseSqrt();
  const DenseMatrix BX = sw.asDiagonal() * data.PsiX;
  const DenseMatrix BY = sw.asDiagonal() * data.PsiY;
  KoopmanFit fit;
  fit.G = hermitian_part(BX.adjoint() * BX);
  fit.A = BX.adjoint() * BY;
  fit.L = hermitian_part(BY.adjoint() * BY);
  fit.K = solve_least_squares(BX, BY);
  const Eigen::Index N = data.cols();
  DenseMatrix stacked(BX.rows(), 2 * N);
  stacked << BX, BY;
  Eigen::HouseholderQR<DenseMatrix> qr(stacked);
  const Eigen::Index k = std::min(stacked.rows(), 2 * N);
  const DenseMatrix R = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  fit.RX = R.leftCols(N);
  fit.RY = R.rightCols(N);
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(
    hermitian_part(fit.L - fit.K.adjoint() * fit.G * fit.K), Eigen::EigenvaluesOnly);
  fit.defect_min_eigenvalue = es.eigenvalues()(0);
  return fit;
}

namespace
{

void fix_phase(ComplexVector &v)
{
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const double a = std::abs(v(imax));
  if (a > 0.0)
  {
    v *= std::conj(v(imax)) / a;
    v(imax) = a;
  }
}

}  // namespace

DmdResult dmd(const DenseMatrix &X, const DenseMatrix &Y, const DmdOptions &opts)
{
  KOOP_REQUIRE(X.rows() == Y.rows() && X.cols() == Y.cols(), "dmd: X and Y must have equal shapes");
  KOOP_REQUIRE(X.rows() >= 1 && X.cols() >= 1, "dmd: empty data");
  require_finite(X, "dmd X");
  require_finite(Y, "dmd Y");

  const Eigen::Index n = X.rows(), M = X.cols();
  RealVector dinv(M);
  for (Eigen::Index j = 0; j < M; ++j)
  {
    const double c = X.col(j).norm();
    dinv(j) = c > 0.0 ? 1.0 / c : 0.0;
  }
  const DenseMatrix Xc = X * dinv.asDiagonal();
  const DenseMatrix Yc = Y * dinv.asDiagonal();

  const SvdResult s = svd(Xc);
  const double tau = opts.tol.value_or(static_cast<double>(n) * kMachineEpsilon);
  const Eigen::Index k = numerical_rank(s.singular_values, tau);
  DmdResult out;
  out.rank = k;
  out.singular_values = s.singular_values;
  if (k == 0)
  {
    throw DegenerateData("dmd: X has numerical rank zero");
  }
  const DenseMatrix Uk = s.U.leftCols(k);
  DenseMatrix VkSinv = s.V.leftCols(k);
  for (Eigen::Index i = 0; i < k; ++i)
  {
    VkSinv.col(i) /= s.singular_values(i);
  }
  const DenseMatrix Ck = Yc * VkSinv;
  const DenseMatrix Ak = Uk.adjoint() * Ck;
  EigResult e = eig(Ak);
  for (Eigen::Index i = 0; i < k; ++i)
  {
    ComplexVector b = e.right_vectors.col(i);
    fix_phase(b);
    e.right_vectors.col(i) = b;
  }
  out.eigenvalues = e.eigenvalues;
  out.Z = Uk * e.right_vectors;
  const DenseMatrix CB = Ck * e.right_vectors;
  out.residuals.resize(k);
  for (Eigen::Index i = 0; i < k; ++i)
  {
    out.residuals(i) = (CB.col(i) - out.eigenvalues(i) * out.Z.col(i)).norm();
  }
  if (opts.exact_vectors)
  {
    out.Z_exact = CB;
  }
  if (opts.keep_C)
  {
    out.C = Ck;
  }
  return out;
}

namespace
{

void check_selection(const DmdResult &result, const std::vector<Eigen::Index> &selection)
{
  KOOP_REQUIRE(!selection.empty(), "reconstruct: empty mode selection");
  for (Eigen::Index j : selection)
  {
    KOOP_REQUIRE(j >= 0 && j < result.rank, "reconstruct: mode index out of range");
  }
}

Reconstruction with_errors(const DmdResult &result, const DenseMatrix &X,
                           const std::vector<Eigen::Index> &selection, ComplexVector coeffs)
{
  Reconstruction out;
  out.selection = selection;
  out.coefficients = std::move(coeffs);
  const Eigen::Index M = X.cols();
  out.relative_errors.resize(M);
  ComplexVector pw = out.coefficients;
  for (Eigen::Index m = 0; m < M; ++m)
  {
    ComplexVector xhat = ComplexVector::Zero(X.rows());
    for (std::size_t j = 0; j < selection.size(); ++j)
    {
      xhat += result.Z.col(selection[j]) * pw(static_cast<Eigen::Index>(j));
    }
    const double nx = X.col(m).norm();
    const double err = (X.col(m) - xhat).norm();
    out.relative_errors(m) = nx > 0.0 ? err / nx : err;
    for (std::size_t j = 0; j < selection.size(); ++j)
    {
      pw(static_cast<Eigen::Index>(j)) *= result.eigenvalues(selection[j]);
    }
  }
  return out;
}

}  // namespace

Reconstruction reconstruct(const DmdResult &result, const DenseMatrix &X,
                           const std::vector<Eigen::Index> &selection, const RealVector &weights)
{
  check_selection(result, selection);
  KOOP_REQUIRE(X.rows() == result.Z.rows(), "reconstruct: snapshot dimension mismatch");
  const Eigen::Index n = X.rows(), M = X.cols();
  const auto l = static_cast<Eigen::Index>(selection.size());
  KOOP_REQUIRE(weights.size() == 0 || weights.size() == M, "reconstruct: one weight per snapshot");

  DenseMatrix S(M * n, l);
  ComplexVector rhs(M * n);
  ComplexVector pw = ComplexVector::Ones(l);
  for (Eigen::Index m = 0; m < M; ++m)
  {
    const double w = weights.size() ? weights(m) : 1.0;
    for (Eigen::Index j = 0; j < l; ++j)
    {
      S.block(m * n, j, n, 1) = w * pw(j) * result.Z.col(selection[static_cast<std::size_t>(j)]);
      pw(j) *= result.eigenvalues(selection[static_cast<std::size_t>(j)]);
    }
    rhs.segment(m * n, n) = w * X.col(m);
  }
  const ComplexVector a = solve_least_squares(S, rhs);
  return with_errors(result, X, selection, a);
}

Reconstruction reconstruct_from_first(const DmdResult &result, const DenseMatrix &X,
                                      const std::vector<Eigen::Index> &selection)
{
  check_selection(result, selection);
  KOOP_REQUIRE(X.rows() == result.Z.rows(), "reconstruct: snapshot dimension mismatch");
  DenseMatrix Zs(X.rows(), static_cast<Eigen::Index>(selection.size()));
  for (std::size_t j = 0; j < selection.size(); ++j)
  {
    Zs.col(static_cast<Eigen::Index>(j)) = result.Z.col(selection[j]);
  }
  const ComplexVector a = solve_least_squares(Zs, X.col(0));
  return with_errors(result, X, selection, a);
}

std::vector<Eigen::Index> select_modes_by_residual(const DmdResult &result, double threshold)
{
  KOOP_REQUIRE(threshold > 0.0, "select_modes_by_residual: threshold must be positive");
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < result.residuals.size(); ++i)
  {
    if (result.residuals(i) <= threshold)
    {
      idx.push_back(i);
    }
  }
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Eigen::Index a, Eigen::Index b)
                   {
                     if (result.residuals(a) != result.residuals(b))
                     {
                       return result.residuals(a) < result.residuals(b);
                     }
                     return std::abs(1.0 - std::abs(result.eigenvalues(a))) <
                            std::abs(1.0 - std::abs(result.eigenvalues(b)));
                   });
  return idx;
}

}  // namespace koop
