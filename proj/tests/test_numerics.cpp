// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <numbers>

#include "koop/errors.hpp"
#include "koop/numerics.hpp"
#include "test_util.hpp"

using namespace koop;

namespace
{

double min_distance(const ComplexVector &v, Complex z)
{
  return (v.array() - z).abs().minCoeff();
}

}  // namespace

TEST(Svd, IdentityHasUnitSingularValues)
{
  const SvdResult s = svd(DenseMatrix::Identity(3, 3));
  EXPECT_NEAR((s.singular_values - RealVector::Ones(3)).norm(), 0.0, 1e-14);
  EXPECT_NEAR((s.U * s.V.adjoint() - DenseMatrix::Identity(3, 3)).norm(), 0.0, 1e-14);
}

TEST(Svd, DiagonalOrdering)
{
  DenseMatrix A = DenseMatrix::Zero(3, 3);
  A(0, 0) = 1.0;
  A(1, 1) = 3.0;
  A(2, 2) = 2.0;
  const SvdResult s = svd(A);
  EXPECT_NEAR(s.singular_values(0), 3.0, 1e-14);
  EXPECT_NEAR(s.singular_values(1), 2.0, 1e-14);
  EXPECT_NEAR(s.singular_values(2), 1.0, 1e-14);
}

TEST(Svd, RankTwoFromOuterProducts)
{
  const DenseMatrix u = testutil::random_complex(5, 2, 1);
  const DenseMatrix v = testutil::random_complex(3, 2, 2);
  const DenseMatrix A = u.col(0) * v.col(0).adjoint() + u.col(1) * v.col(1).adjoint();
  const SvdResult s = svd(A);
  EXPECT_LE(s.singular_values(2), 1e-12 * s.singular_values(0));
  EXPECT_GT(s.singular_values(1), 1e-3 * s.singular_values(0));
}

TEST(Svd, ReconstructionAndOrthonormality)
{
  for (unsigned seed : {3u, 4u, 5u})
  {
    for (auto [r, c] : {std::pair<int, int>{7, 4}, {4, 7}, {5, 5}})
    {
      const DenseMatrix A = testutil::random_complex(r, c, seed);
      const SvdResult s = svd(A);
      const Eigen::Index p = std::min(r, c);
      ASSERT_EQ(s.U.cols(), p);
      ASSERT_EQ(s.V.cols(), p);
      EXPECT_LE((s.U * s.singular_values.cast<Complex>().asDiagonal() * s.V.adjoint() - A).norm(),
                1e-12 * A.norm());
      EXPECT_LE((s.U.adjoint() * s.U - DenseMatrix::Identity(p, p)).norm(), 1e-12);
      EXPECT_LE((s.V.adjoint() * s.V - DenseMatrix::Identity(p, p)).norm(), 1e-12);
      for (Eigen::Index i = 1; i < p; ++i)
      {
        EXPECT_GE(s.singular_values(i - 1), s.singular_values(i));
      }
    }
  }
}

TEST(PivotedQr, Identity)
{
  const QrResult q = pivoted_qr(DenseMatrix::Identity(3, 3));
  EXPECT_NEAR((q.Q * q.R - DenseMatrix::Identity(3, 3)).norm(), 0.0, 1e-14);
  EXPECT_EQ(q.rank, 3);
  for (Eigen::Index j = 0; j < 3; ++j)
  {
    EXPECT_EQ(q.perm[static_cast<std::size_t>(j)], j);
  }
}

TEST(PivotedQr, LargestColumnFirst)
{
  DenseMatrix A = DenseMatrix::Zero(2, 2);
  A(0, 0) = 1.0;
  A(1, 1) = 10.0;
  const QrResult q = pivoted_qr(A);
  EXPECT_EQ(q.perm[0], 1);
}

TEST(PivotedQr, ResidualOnRandomMatrix)
{
  const DenseMatrix A = testutil::random_complex(6, 4, 7);
  const QrResult q = pivoted_qr(A);
  DenseMatrix AP(6, 4);
  for (Eigen::Index j = 0; j < 4; ++j)
  {
    AP.col(j) = A.col(q.perm[static_cast<std::size_t>(j)]);
  }
  EXPECT_LE((AP - q.Q * q.R).norm(), 1e-12 * A.norm());
  EXPECT_LE((q.Q.adjoint() * q.Q - DenseMatrix::Identity(q.Q.cols(), q.Q.cols())).norm(), 1e-12);
}

TEST(ThinQr, PositiveDiagonalAndRank)
{
  DenseMatrix A = testutil::random_complex(8, 3, 9);
  const QrResult q = thin_qr(A);
  EXPECT_LE((A - q.Q * q.R).norm(), 1e-12 * A.norm());
  for (Eigen::Index i = 0; i < 3; ++i)
  {
    EXPECT_GE(q.R(i, i).real(), 0.0);
    EXPECT_NEAR(q.R(i, i).imag(), 0.0, 1e-14);
  }
  EXPECT_EQ(q.rank, 3);
  A.col(2) = A.col(0) + 2.0 * A.col(1);
  EXPECT_EQ(thin_qr(A).rank, 2);
}

TEST(Eig, DiagonalAndRotation)
{
  DenseMatrix D = DenseMatrix::Zero(2, 2);
  D(0, 0) = 2.0;
  D(1, 1) = -1.0;
  const EigResult e = eig(D);
  EXPECT_LE(min_distance(e.eigenvalues, 2.0), 1e-14);
  EXPECT_LE(min_distance(e.eigenvalues, -1.0), 1e-14);

  const double a = 0.4;
  DenseMatrix R(2, 2);
  R << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  const EigResult r = eig(R);
  EXPECT_LE(min_distance(r.eigenvalues, std::polar(1.0, a)), 1e-14);
  EXPECT_LE(min_distance(r.eigenvalues, std::polar(1.0, -a)), 1e-14);
}

TEST(Eig, CompanionOfCubeRootsOfUnity)
{
  DenseMatrix C = DenseMatrix::Zero(3, 3);
  C(1, 0) = 1.0;
  C(2, 1) = 1.0;
  C(0, 2) = 1.0;
  const EigResult e = eig(C);
  for (int k = 0; k < 3; ++k)
  {
    EXPECT_LE(min_distance(e.eigenvalues, std::polar(1.0, 2.0 * std::numbers::pi * k / 3.0)), 1e-12);
  }
}

TEST(Eig, EigenpairResidualAndUnitColumns)
{
  const DenseMatrix A = testutil::random_complex(6, 6, 11);
  const EigResult e = eig(A);
  EXPECT_LE((A * e.right_vectors - e.right_vectors * e.eigenvalues.asDiagonal()).norm(), 1e-11 * A.norm());
  for (Eigen::Index j = 0; j < 6; ++j)
  {
    EXPECT_NEAR(e.right_vectors.col(j).norm(), 1.0, 1e-12);
  }
}

TEST(SchurUnitary, KnownSpectra)
{
  const EigResult id = schur_unitary_eig(DenseMatrix::Identity(4, 4));
  EXPECT_LE((id.eigenvalues.array() - 1.0).abs().maxCoeff(), 1e-14);

  ComplexVector d(3);
  d << std::polar(1.0, 0.3), std::polar(1.0, -2.0), std::polar(1.0, 1.1);
  const EigResult e = schur_unitary_eig(DenseMatrix(d.asDiagonal()));
  for (Eigen::Index i = 0; i < 3; ++i)
  {
    EXPECT_LE(min_distance(e.eigenvalues, d(i)), 1e-14);
  }
}

TEST(SchurUnitary, RandomUnitaryOnCircleWithUnitaryVectors)
{
  for (unsigned seed : {1u, 2u, 3u})
  {
    const DenseMatrix U = testutil::random_unitary(12, seed);
    const EigResult e = schur_unitary_eig(U);
    EXPECT_LE((e.eigenvalues.array().abs() - 1.0).abs().maxCoeff(), 1e-12);
    EXPECT_LE((e.right_vectors.adjoint() * e.right_vectors - DenseMatrix::Identity(12, 12)).norm(), 1e-12);
    EXPECT_LE((U * e.right_vectors - e.right_vectors * e.eigenvalues.asDiagonal()).norm(), 1e-12);
  }
}

TEST(SchurUnitary, RejectsNonUnitary)
{
  EXPECT_ANY_THROW(schur_unitary_eig(2.0 * DenseMatrix::Identity(2, 2)));
}

TEST(LeastSquares, TrivialCases)
{
  const DenseMatrix B = testutil::random_complex(3, 2, 5);
  EXPECT_LE((solve_least_squares(DenseMatrix::Identity(3, 3), B) - B).norm(), 1e-14);

  DenseMatrix A(2, 1), b(2, 1);
  A << 1.0, 1.0;
  b << 0.0, 2.0;
  EXPECT_NEAR(std::abs(solve_least_squares(A, b)(0, 0) - 1.0), 0.0, 1e-14);
}

TEST(LeastSquares, RankDeficientMatchesPseudoinverse)
{
  DenseMatrix A = testutil::random_complex(3, 2, 13);
  A.col(1) = 2.0 * A.col(0);
  const DenseMatrix B = testutil::random_complex(3, 2, 14);
  const DenseMatrix X = solve_least_squares(A, B);
  // Oracle: complete orthogonal decomposition pseudoinverse.
  Eigen::CompleteOrthogonalDecomposition<DenseMatrix> cod(A);
  const DenseMatrix Xref = cod.pseudoInverse() * B;
  EXPECT_LE((X - Xref).norm(), 1e-12 * Xref.norm());
}

TEST(LeastSquares, NormalEquationsHoldOnFullRank)
{
  const DenseMatrix A = testutil::random_complex(20, 5, 15);
  const DenseMatrix B = testutil::random_complex(20, 3, 16);
  const DenseMatrix X = solve_least_squares(A, B);
  EXPECT_LE((A.adjoint() * (A * X - B)).norm(), 1e-11 * A.norm() * B.norm());
}

TEST(Vandermonde, UniformMeasureOnRootsOfUnity)
{
  const int N = 6, n = 2 * N + 1;
  std::vector<Complex> nodes, rhs(n, 0.0);
  for (int j = 0; j < n; ++j)
  {
    nodes.push_back(std::polar(1.0, 2.0 * std::numbers::pi * j / n));
  }
  rhs[0] = 1.0;
  const VandermondeResult v = solve_vandermonde(nodes, rhs);
  for (int j = 0; j < n; ++j)
  {
    EXPECT_NEAR(std::abs(v.values(j) - 1.0 / n), 0.0, 1e-14);
  }
}

TEST(Vandermonde, TwoPointSymmetry)
{
  const std::vector<Complex> nodes = {1.0, -1.0}, rhs = {1.0, 0.0};
  const VandermondeResult v = solve_vandermonde(nodes, rhs);
  EXPECT_NEAR(std::abs(v.values(0) - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(v.values(1) - 0.5), 0.0, 1e-15);
}

TEST(Vandermonde, ResidualOnScatteredNodes)
{
  std::vector<Complex> nodes = {Complex(-0.5, 1.0), Complex(0.0, 1.0), Complex(0.5, 1.0), Complex(0.2, 2.0)};
  std::vector<Complex> rhs = {1.0, Complex(0.3, -0.1), 0.0, 2.0};
  const VandermondeResult v = solve_vandermonde(nodes, rhs);
  for (std::size_t k = 0; k < rhs.size(); ++k)
  {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j)
    {
      acc += v.values(static_cast<Eigen::Index>(j)) * std::pow(nodes[j], static_cast<double>(k));
    }
    EXPECT_LE(std::abs(acc - rhs[k]), 1e-12);
  }
  EXPECT_GE(v.condition_estimate, 1.0);
}

TEST(Rank, ThresholdAndHermitianHelpers)
{
  RealVector s(4);
  s << 10.0, 1.0, 1e-9, 1e-15;
  EXPECT_EQ(numerical_rank(s, 1e-12), 3);
  EXPECT_EQ(numerical_rank(s, 1e-5), 2);

  const DenseMatrix B = testutil::random_complex(4, 4, 17);
  const DenseMatrix H = hermitian_part(B);
  EXPECT_LE((H - H.adjoint()).norm(), 1e-15);
  EXPECT_LE((H - 0.5 * (B + B.adjoint())).norm(), 1e-15);

  DenseMatrix P = B * B.adjoint();
  const double expected = Eigen::SelfAdjointEigenSolver<DenseMatrix>(P).eigenvalues().minCoeff();
  EXPECT_NEAR(smallest_eigenvalue_hermitian(P), expected, 1e-12 * P.norm());
}

TEST(Finite, RejectsNaN)
{
  DenseMatrix A = DenseMatrix::Zero(2, 2);
  EXPECT_NO_THROW(require_finite(A, "A"));
  A(1, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(require_finite(A, "A"), ContractViolation);
}
