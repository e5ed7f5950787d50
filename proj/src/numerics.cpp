// SPDX-License-Identifier: Apache-2.0

#include "koop/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace koop
{

void require_finite(const DenseMatrix &A, const char *what)
{
  if (!A.allFinite())
  {
    throw ContractViolation(std::string(what) + ": matrix has non-finite entries");
  }
}

namespace
{

SvdResult svd_square_or_wide(const DenseMatrix &A)
{
  Eigen::BDCSVD<DenseMatrix> dec(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (dec.info() != Eigen::Success)
  {
    throw NumericalFailure("svd: factorization did not converge");
  }
  return {dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

}  // namespace

SvdResult svd(const DenseMatrix &A)
{
  require_finite(A, "svd");
  const auto m = A.rows(), n = A.cols();
  if (m == 0 || n == 0)
  {
    return {DenseMatrix(m, 0), RealVector(0), DenseMatrix(n, 0)};
  }
  // Tall inputs are first compressed with a Householder QR so the bidiagonal
  // reduction runs on an n x n triangle.
  if (m > 2 * n)
  {
    Eigen::HouseholderQR<DenseMatrix> qr(A);
    DenseMatrix R = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    SvdResult small = svd_square_or_wide(R);
    DenseMatrix Q = qr.householderQ() * DenseMatrix::Identity(m, n);
    return {Q * small.U, small.singular_values, small.V};
  }
  if (n > 2 * m)
  {
    SvdResult t = svd(A.adjoint());
    return {t.V, t.singular_values, t.U};
  }
  return svd_square_or_wide(A);
}

QrResult pivoted_qr(const DenseMatrix &A)
{
  require_finite(A, "pivoted_qr");
  const auto m = A.rows(), n = A.cols(), p = std::min(m, n);
  Eigen::ColPivHouseholderQR<DenseMatrix> qr(A);
  QrResult out;
  out.Q = qr.householderQ() * DenseMatrix::Identity(m, p);
  out.R = qr.matrixR().topRows(p).triangularView<Eigen::Upper>();
  const auto &indices = qr.colsPermutation().indices();
  out.perm.assign(indices.data(), indices.data() + indices.size());
  // Fix the phases so that diag(R) is real and nonnegative.
  for (Eigen::Index i = 0; i < p; ++i)
  {
    const Complex d = out.R(i, i);
    const double a = std::abs(d);
    if (a > 0.0)
    {
      const Complex ph = d / a;
      out.R.row(i) *= std::conj(ph);
      out.Q.col(i) *= ph;
    }
  }
  out.rank = qr.rank();
  return out;
}

QrResult thin_qr(const DenseMatrix &A)
{
  require_finite(A, "thin_qr");
  const auto m = A.rows(), n = A.cols(), p = std::min(m, n);
  Eigen::HouseholderQR<DenseMatrix> qr(A);
  QrResult out;
  out.Q = qr.householderQ() * DenseMatrix::Identity(m, p);
  out.R = qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
  out.perm.resize(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j)
  {
    out.perm[static_cast<std::size_t>(j)] = j;
  }
  double rmax = 0.0;
  for (Eigen::Index i = 0; i < p; ++i)
  {
    const Complex d = out.R(i, i);
    const double a = std::abs(d);
    rmax = std::max(rmax, a);
    if (a > 0.0)
    {
      const Complex ph = d / a;
      out.R.row(i) *= std::conj(ph);
      out.Q.col(i) *= ph;
    }
  }
  out.rank = 0;
  const double thresh = rmax * static_cast<double>(std::max(m, n)) * kMachineEpsilon;
  for (Eigen::Index i = 0; i < p; ++i)
  {
    if (std::abs(out.R(i, i)) > thresh)
    {
      ++out.rank;
    }
  }
  return out;
}

EigResult eig(const DenseMatrix &A)
{
  KOOP_REQUIRE(A.rows() == A.cols(), "eig: matrix must be square");
  require_finite(A, "eig");
  Eigen::ComplexEigenSolver<DenseMatrix> es(A, true);
  if (es.info() != Eigen::Success)
  {
    throw NumericalFailure("eig: QR iteration did not converge");
  }
  EigResult out{es.eigenvalues(), es.eigenvectors()};
  for (Eigen::Index j = 0; j < out.right_vectors.cols(); ++j)
  {
    const double nrm = out.right_vectors.col(j).norm();
    if (nrm > 0.0)
    {
      out.right_vectors.col(j) /= nrm;
    }
  }
  return out;
}

EigResult schur_unitary_eig(const DenseMatrix &U, double unitarity_tol)
{
  KOOP_REQUIRE(U.rows() == U.cols(), "schur_unitary_eig: matrix must be square");
  require_finite(U, "schur_unitary_eig");
  const auto n = U.rows();
  const double defect = (U.adjoint() * U - DenseMatrix::Identity(n, n)).norm();
  if (defect > unitarity_tol)
  {
    std::ostringstream os;
    os << "schur_unitary_eig: input is not unitary (||U*U - I||_F = " << defect << ")";
    throw ContractViolation(os.str());
  }
  Eigen::ComplexSchur<DenseMatrix> cs(U, true);
  if (cs.info() != Eigen::Success)
  {
    throw NumericalFailure("schur_unitary_eig: Schur iteration did not converge");
  }
  // A normal upper-triangular matrix is diagonal, so the Schur vectors are
  // eigenvectors.
  EigResult out;
  out.eigenvalues = cs.matrixT().diagonal();
  out.right_vectors = cs.matrixU();
  return out;
}

Eigen::Index numerical_rank(const RealVector &singular_values, double tau)
{
  if (singular_values.size() == 0 || singular_values(0) <= 0.0)
  {
    return 0;
  }
  const double cut = singular_values(0) * tau;
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < singular_values.size(); ++i)
  {
    if (singular_values(i) > cut)
    {
      k = i + 1;
    }
  }
  return k;
}

DenseMatrix solve_least_squares(const DenseMatrix &A, const DenseMatrix &B,
                                std::optional<double> rel_tol)
{
  KOOP_REQUIRE(A.rows() == B.rows(), "solve_least_squares: A and B must have equal row counts");
  require_finite(B, "solve_least_squares");
  const SvdResult s = svd(A);
  const double tol =
    rel_tol.value_or(static_cast<double>(std::max(A.rows(), A.cols())) * kMachineEpsilon);
  const Eigen::Index k = numerical_rank(s.singular_values, tol);
  if (k == 0)
  {
    return DenseMatrix::Zero(A.cols(), B.cols());
  }
  DenseMatrix UtB = s.U.leftCols(k).adjoint() * B;
  for (Eigen::Index i = 0; i < k; ++i)
  {
    UtB.row(i) /= s.singular_values(i);
  }
  return s.V.leftCols(k) * UtB;
}

namespace
{

bool are_roots_of_unity(std::span<const Complex> nodes)
{
  const auto n = nodes.size();
  const double tol = 1e-12 * static_cast<double>(std::max<std::size_t>(n, 1));
  for (const Complex &z : nodes)
  {
    if (std::abs(std::abs(z) - 1.0) > 1e-13)
    {
      return false;
    }
    // z^n = 1 exactly when n*arg(z) is a multiple of 2*pi.
    const double t = std::arg(z) * static_cast<double>(n) / (2.0 * std::numbers::pi);
    if (std::abs(t - std::round(t)) > tol)
    {
      return false;
    }
  }
  return true;
}

}  // namespace

VandermondeResult solve_vandermonde(std::span<const Complex> nodes, std::span<const Complex> rhs)
{
  const auto n = nodes.size();
  KOOP_REQUIRE(n > 0, "solve_vandermonde: no nodes");
  KOOP_REQUIRE(rhs.size() == n, "solve_vandermonde: rhs length must equal node count");
  for (std::size_t i = 0; i < n; ++i)
  {
    KOOP_REQUIRE(std::isfinite(nodes[i].real()) && std::isfinite(nodes[i].imag()),
                 "solve_vandermonde: non-finite node");
    for (std::size_t j = i + 1; j < n; ++j)
    {
      const double scale = std::max({1.0, std::abs(nodes[i]), std::abs(nodes[j])});
      if (std::abs(nodes[i] - nodes[j]) <= 1e-14 * scale)
      {
        throw ContractViolation("solve_vandermonde: nodes must be pairwise distinct");
      }
    }
  }

  VandermondeResult out;
  out.values.resize(static_cast<Eigen::Index>(n));
  if (are_roots_of_unity(nodes))
  {
    // Inverse DFT: the Vandermonde matrix is sqrt(n) times a unitary matrix.
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j)
    {
      const double t = std::arg(nodes[j]);
      Complex acc = 0.0;
      for (std::size_t k = 0; k < n; ++k)
      {
        acc += rhs[k] * std::polar(1.0, -t * static_cast<double>(k));
      }
      out.values(static_cast<Eigen::Index>(j)) = acc * inv_n;
    }
    out.used_dft = true;
    out.condition_estimate = 1.0;
    return out;
  }

  const auto N = static_cast<Eigen::Index>(n);
  DenseMatrix V(N, N);
  for (Eigen::Index j = 0; j < N; ++j)
  {
    Complex p = 1.0;
    for (Eigen::Index k = 0; k < N; ++k)
    {
      V(k, j) = p;
      p *= nodes[static_cast<std::size_t>(j)];
    }
  }
  ComplexVector b(N);
  for (Eigen::Index k = 0; k < N; ++k)
  {
    b(k) = rhs[static_cast<std::size_t>(k)];
  }
  Eigen::PartialPivLU<DenseMatrix> lu(V);
  out.values = lu.solve(b);
  const double rc = lu.rcond();
  out.condition_estimate = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
  if (!out.values.allFinite())
  {
    throw NumericalFailure("solve_vandermonde: LU solve produced non-finite values");
  }
  const double res = (V * out.values - b).norm();
  if (out.condition_estimate > 1e12 || res > 1e-8 * std::max(b.norm(), 1e-300))
  {
    std::ostringstream os;
    os << "ill-conditioned Vandermonde system (cond ~ " << out.condition_estimate
       << ", residual " << res << ")";
    out.warning = os.str();
  }
  return out;
}

double smallest_eigenvalue_hermitian(const DenseMatrix &H)
{
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(H, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
  {
    throw NumericalFailure("hermitian eigensolver did not converge");
  }
  return std::max(es.eigenvalues()(0), 0.0);
}

DenseMatrix hermitian_part(const DenseMatrix &A)
{
  return 0.5 * (A + A.adjoint());
}

}  // namespace koop
