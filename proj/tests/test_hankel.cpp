// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "koop/errors.hpp"
#include "koop/hankel.hpp"

using namespace koop;

namespace
{

const std::vector<Complex> kLambdas = {Complex(1.0, 0.0), std::polar(1.0, 0.6), std::polar(1.0, -0.6),
                                       std::polar(0.97, 1.9), std::polar(0.97, -1.9)};

DenseMatrix exponential_series(Eigen::Index length, const std::vector<Complex> &amps)
{
  DenseMatrix s = DenseMatrix::Zero(length, 1);
  for (Eigen::Index n = 0; n < length; ++n)
  {
    for (std::size_t j = 0; j < kLambdas.size(); ++j)
    {
      s(n, 0) += amps[j] * std::pow(kLambdas[j], static_cast<double>(n));
    }
  }
  return s;
}

}  // namespace

TEST(HankelMatrices, Layout)
{
  std::vector<Complex> s(10);
  for (int i = 0; i < 10; ++i)
  {
    s[static_cast<std::size_t>(i)] = Complex(i, -i);
  }
  const auto [X, Y] = hankel_matrices(s, 4, 3);
  ASSERT_EQ(X.rows(), 4);
  ASSERT_EQ(X.cols(), 3);
  for (int i = 0; i < 4; ++i)
  {
    for (int j = 0; j < 3; ++j)
    {
      EXPECT_EQ(X(i, j), s[static_cast<std::size_t>(i + j)]);
      EXPECT_EQ(Y(i, j), s[static_cast<std::size_t>(i + j + 1)]);
    }
  }
  // Hankel structure: constant anti-diagonals and Y is X shifted up by one row.
  EXPECT_EQ(X.bottomRows(3), Y.topRows(3));
  EXPECT_THROW(hankel_matrices(std::span<const Complex>(s.data(), 6), 4, 3), ContractViolation);
}

TEST(ObservableSeries, Columns)
{
  RealMatrix traj(3, 2);
  traj << 1, 2, 3, 4, 5, 6;
  const DenseMatrix s = observable_series(traj, {Observable::coordinate(1), Observable::constant()});
  ASSERT_EQ(s.rows(), 3);
  ASSERT_EQ(s.cols(), 2);
  EXPECT_EQ(s(2, 0), Complex(6.0, 0.0));
  EXPECT_EQ(s(1, 1), Complex(1.0, 0.0));
  EXPECT_THROW(observable_series(traj, {Observable::coordinate(2)}), ContractViolation);
}

TEST(HankelData, ScalingsAndWeights)
{
  DenseMatrix s(30, 2);
  s.col(0) = exponential_series(30, {1.0, 0.5, 0.5, 0.2, 0.2});
  s.col(1) = 3.0 * s.col(0);
  HankelConfig cfg;
  cfg.M = 20;
  cfg.N = 5;
  RealVector alpha;
  const DataMatrices d = hankel_data(s, cfg, &alpha);
  ASSERT_EQ(alpha.size(), 2);
  EXPECT_DOUBLE_EQ(alpha(0), 1.0);
  EXPECT_NEAR(alpha(1), 3.0, 1e-14);
  EXPECT_EQ(d.PsiX.cols(), 10);
  EXPECT_NEAR(d.W.sum(), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(d.PsiX(2, 6) - alpha(1) * s(3, 1)), 0.0, 1e-12);
}

TEST(HankelDmd, RecoversExponentials)
{
  const DenseMatrix s = exponential_series(400, {1.0, Complex(0.5, 0.2), Complex(0.5, -0.2), 0.3, 0.3});
  HankelConfig cfg;
  cfg.M = 300;
  cfg.N = 20;
  cfg.eps_tol = 1e-10;
  cfg.relative_tol = true;
  const HankelResult r = hankel_dmd(s, cfg);
  EXPECT_EQ(r.rank, 5);
  for (const Complex &l : kLambdas)
  {
    double best = 1e300;
    for (Eigen::Index i = 0; i < r.rank; ++i)
    {
      best = std::min(best, std::abs(r.eigenvalues(i) - l));
    }
    EXPECT_LE(best, 1e-9);
  }
  const RealVector res = hankel_residuals(s, cfg, r);
  EXPECT_LE(res.maxCoeff(), 1e-8);
}

TEST(HankelDmd, AbsoluteToleranceTruncates)
{
  const DenseMatrix s = exponential_series(200, {1.0, 1e-7, 1e-7, 0.0, 0.0});
  HankelConfig cfg;
  cfg.M = 150;
  cfg.N = 10;
  cfg.eps_tol = 1e-4;
  const HankelResult r = hankel_dmd(s, cfg);
  EXPECT_EQ(r.rank, 1);
  EXPECT_NEAR(std::abs(r.eigenvalues(0) - 1.0), 0.0, 1e-9);
  for (Eigen::Index i = 1; i < r.singular_values.size(); ++i)
  {
    EXPECT_LE(r.singular_values(i), r.singular_values(i - 1));
  }
}

TEST(HankelDmd, Contracts)
{
  HankelConfig cfg;
  cfg.M = 10;
  cfg.N = 5;
  EXPECT_THROW(hankel_dmd(DenseMatrix::Ones(14, 1), cfg), ContractViolation);
  EXPECT_THROW(hankel_dmd(DenseMatrix::Zero(20, 1), cfg), DegenerateData);
  cfg.eps_tol = 0.0;
  EXPECT_THROW(hankel_dmd(DenseMatrix::Ones(20, 1), cfg), ContractViolation);
}
