// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "koop/errors.hpp"
#include "koop/gla.hpp"

using namespace koop;

namespace
{

// Row k holds sum_j z_j^k s_j.
DenseMatrix mode_series(const std::vector<Complex> &z, const std::vector<ComplexVector> &s, Eigen::Index n)
{
  DenseMatrix out = DenseMatrix::Zero(n + 1, s.front().size());
  for (Eigen::Index k = 0; k <= n; ++k)
  {
    for (std::size_t j = 0; j < z.size(); ++j)
    {
      out.row(k) += std::pow(z[j], static_cast<double>(k)) * s[j].transpose();
    }
  }
  return out;
}

}  // namespace

TEST(Gla, SingleModeIsExact)
{
  const Complex z = std::polar(1.0, 0.9);
  ComplexVector s(2);
  s << Complex(1.0, 2.0), -0.5;
  const DenseMatrix series = mode_series({z}, {s}, 1000);
  EXPECT_LE((gla_average(series, z, 1000) - s).norm(), 1e-12);
}

TEST(Gla, ErrorDecaysLikeOneOverN)
{
  const Complex z0 = std::polar(1.0, 0.5), z1 = std::polar(1.0, 2.0);
  ComplexVector s0(1), s1(1);
  s0 << 1.0;
  s1 << 3.0;
  const DenseMatrix series = mode_series({z0, z1}, {s0, s1}, 20000);
  // |(1/n) sum_k (z1/z0)^k| <= 2 / (n |z1/z0 - 1|).
  const double gap = std::abs(z1 / z0 - 1.0);
  for (Eigen::Index n : {10, 100, 1000, 20000})
  {
    const double err = (gla_average(series, z0, n) - s0).norm();
    EXPECT_LE(err, 3.0 * 2.0 / (static_cast<double>(n) * gap) + 1e-13) << "n = " << n;
  }
}

TEST(Gla, IgnoresInitialRow)
{
  const Complex z = std::polar(1.0, 0.3);
  ComplexVector s(1);
  s << 2.0;
  DenseMatrix series = mode_series({z}, {s}, 50);
  const ComplexVector a = gla_average(series, z, 50);
  series(0, 0) = 1e6;
  EXPECT_EQ(gla_average(series, z, 50), a);
}

TEST(Gla, TraceAtPowersOfTwo)
{
  const Complex z = std::polar(1.0, 1.0);
  ComplexVector s(1);
  s << 1.0;
  const DenseMatrix series = mode_series({z, std::polar(1.0, -1.0)}, {s, s}, 100);
  std::vector<TracePoint> trace;
  const ComplexVector final = gla_average(series, z, 100, &trace);
  ASSERT_FALSE(trace.empty());
  std::vector<Eigen::Index> ns;
  for (const auto &t : trace)
  {
    ns.push_back(t.n);
    EXPECT_NEAR(t.change, (t.value - final).norm(), 1e-14);
    EXPECT_LE((t.value - gla_average(series, z, t.n)).norm(), 1e-13);
  }
  EXPECT_EQ(ns, (std::vector<Eigen::Index>{1, 2, 4, 8, 16, 32, 64, 100}));
}

TEST(Gla, ExtractsSeveralModes)
{
  const std::vector<Complex> z = {1.0, std::polar(1.0, 0.7), std::polar(1.0, -0.7), std::polar(1.0, 2.1)};
  std::vector<ComplexVector> s;
  for (int j = 0; j < 4; ++j)
  {
    ComplexVector v(3);
    v << Complex(j + 1.0, 0.0), Complex(0.0, 1.0 - j), Complex(0.5, 0.5 * j);
    s.push_back(v);
  }
  const Eigen::Index n = 4000;
  const ModeExtraction ex = extract_modes(mode_series(z, s, n), z, n);
  ASSERT_EQ(ex.modes.size(), 4u);
  for (std::size_t j = 0; j < 4; ++j)
  {
    EXPECT_EQ(ex.modes[j].z, z[j]);
    EXPECT_LE((ex.modes[j].mode - s[j]).norm(), 50.0 / static_cast<double>(n));
  }
}

TEST(Gla, CesaroCounterexample)
{
  for (Eigen::Index n : {1, 2, 10, 1001})
  {
    EXPECT_NEAR(gla_cesaro_counterexample_check(n), (static_cast<double>(n) + 1.0) / 2.0, 1e-9 * n);
  }
}

TEST(Gla, Contracts)
{
  const DenseMatrix series = DenseMatrix::Ones(10, 1);
  EXPECT_THROW(gla_average(series, 1.0, 10), ContractViolation);
  EXPECT_THROW(gla_average(series, 1.0, 0), ContractViolation);
}
