// SPDX-License-Identifier: Apache-2.0

#include "koop/mpedmd.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace koop
{

namespace
{

DenseMatrix perm_matrix(const std::vector<Eigen::Index> &perm)
{
  const auto n = static_cast<Eigen::Index>(perm.size());
  DenseMatrix P = DenseMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
  {
    P(perm[static_cast<std::size_t>(j)], j) = 1.0;
  }
  return P;
}

}  // namespace

MpResult mpedmd_fit(const DataMatrices &data)
{
  data.validate();
  const Eigen::Index N = data.cols();
  KOOP_REQUIRE(data.rows() >= N, "mpedmd_fit: fewer snapshots than dictionary functions");
  const RealVector sw = data.W.cwiseSqrt();
  const DenseMatrix BX = sw.asDiagonal() * data.PsiX;
  const DenseMatrix BY = sw.asDiagonal() * data.PsiY;

  // W^{1/2} Psi_X P = Q R.
  const QrResult qr = pivoted_qr(BX);
  const double r11 = std::abs(qr.R(0, 0));
  const double rnn = std::abs(qr.R(N - 1, N - 1));
  if (!(rnn > r11 * static_cast<double>(data.rows()) * kMachineEpsilon))
  {
    throw DegenerateData("mpedmd_fit: W^{1/2} Psi_X is rank deficient (pivoted QR rank " +
                         std::to_string(qr.rank) + " of " + std::to_string(N) +
                         "); reduce the dictionary");
  }
  const auto Rtri = qr.R.triangularView<Eigen::Upper>();
  const DenseMatrix P = perm_matrix(qr.perm);

  // (P R^{-1})^* Psi_Y^* W^{1/2} Q = R^{-*} (W^{1/2} Psi_Y P)^* Q.
  DenseMatrix S = (BY * P).adjoint() * qr.Q;
  Rtri.adjoint().solveInPlace(S);
  const SvdResult s = svd(S);
  const DenseMatrix core = s.V * s.U.adjoint();

  const EigResult e = schur_unitary_eig(core);

  MpResult out;
  out.G = hermitian_part(BX.adjoint() * BX);
  out.R = qr.R;
  out.perm = qr.perm;
  out.unitary_core = core;
  out.Vhat = e.right_vectors;
  // Project the computed eigenvalues onto the circle; they are unit modulus
  // up to rounding.
  out.eigenvalues = e.eigenvalues;
  for (Eigen::Index j = 0; j < N; ++j)
  {
    const double a = std::abs(out.eigenvalues(j));
    if (a > 0.0)
    {
      out.eigenvalues(j) /= a;
    }
  }
  // K_mp = P R^{-1} core R P^T and V = P R^{-1} Vhat.
  DenseMatrix T = core * qr.R;
  Rtri.solveInPlace(T);
  out.K_mp = P * T * P.transpose();
  DenseMatrix Vt = e.right_vectors;
  Rtri.solveInPlace(Vt);
  out.V = P * Vt;
  return out;
}

double AtomicSpectralMeasure::total() const
{
  return std::accumulate(mass.begin(), mass.end(), 0.0);
}

void AtomicSpectralMeasure::sort_by_angle()
{
  std::vector<std::size_t> idx(theta.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return theta[a] < theta[b]; });
  AtomicSpectralMeasure s;
  for (auto i : idx)
  {
    s.theta.push_back(theta[i]);
    s.mass.push_back(mass[i]);
  }
  *this = std::move(s);
}

double wrap_to_pi(double theta)
{
  const double two_pi = 2.0 * std::numbers::pi;
  double t = std::fmod(theta + std::numbers::pi, two_pi);
  if (t < 0.0)
  {
    t += two_pi;
  }
  t -= std::numbers::pi;
  return t >= std::numbers::pi ? -std::numbers::pi : t;
}

ComplexVector g_coordinates(const MpResult &result, const ComplexVector &g)
{
  KOOP_REQUIRE(g.size() == result.R.cols(), "g_coordinates: coefficient length mismatch");
  ComplexVector gp(g.size());
  for (std::size_t j = 0; j < result.perm.size(); ++j)
  {
    gp(static_cast<Eigen::Index>(j)) = g(result.perm[j]);
  }
  return result.R.triangularView<Eigen::Upper>() * gp;
}

AtomicSpectralMeasure scalar_measure(const MpResult &result, const ComplexVector &g,
                                     bool normalize)
{
  const ComplexVector h = g_coordinates(result, g);
  const double gg = h.squaredNorm();
  if (!(gg > 0.0))
  {
    throw DegenerateData("scalar_measure: g^* G g is not positive");
  }
  // v_j^* G g = vhat_j^* R P^T g.
  const ComplexVector proj = result.Vhat.adjoint() * h;
  const Eigen::Index N = proj.size();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(N));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b)
                   { return std::arg(result.eigenvalues(a)) < std::arg(result.eigenvalues(b)); });
  AtomicSpectralMeasure out;
  Complex last = 0.0;
  for (Eigen::Index j : order)
  {
    const Complex lam = result.eigenvalues(j);
    const double p = std::norm(proj(j));
    if (!out.theta.empty() && std::abs(lam - last) <= 1e-10)
    {
      out.mass.back() += p;
      continue;
    }
    out.theta.push_back(wrap_to_pi(std::arg(lam)));
    out.mass.push_back(p);
    last = lam;
  }
  // Angles near -pi and +pi denote the same point.
  if (out.theta.size() > 1 &&
      std::abs(std::polar(1.0, out.theta.front()) - std::polar(1.0, out.theta.back())) <= 1e-10)
  {
    out.mass.front() += out.mass.back();
    out.theta.pop_back();
    out.mass.pop_back();
  }
  if (normalize)
  {
    const double tot = out.total();
    for (double &p : out.mass)
    {
      p /= tot;
    }
  }
  out.sort_by_angle();
  return out;
}

double circular_w1(const CircleMeasure &mu, const CircleMeasure &nu)
{
  const double pi = std::numbers::pi, two_pi = 2.0 * pi;
  const double tm = mu.total(), tn = nu.total();
  KOOP_REQUIRE(tm > 0.0 && tn > 0.0, "circular_w1: measures must have positive mass");
  KOOP_REQUIRE(std::abs(tm - tn) <= 1e-10 * std::max(tm, tn),
               "circular_w1: measures must have equal total mass");

  // D(theta) = F_mu(theta) - F_nu(theta) on [-pi, pi) is linear between the
  // atom locations with slope (u_mu - u_nu) / (2 pi).
  struct Jump
  {
    double theta;
    double dm;
  };
  std::vector<Jump> jumps;
  for (std::size_t i = 0; i < mu.atoms.theta.size(); ++i)
  {
    jumps.push_back({wrap_to_pi(mu.atoms.theta[i]), mu.atoms.mass[i]});
  }
  for (std::size_t i = 0; i < nu.atoms.theta.size(); ++i)
  {
    jumps.push_back({wrap_to_pi(nu.atoms.theta[i]), -nu.atoms.mass[i]});
  }
  std::sort(jumps.begin(), jumps.end(), [](const Jump &a, const Jump &b) { return a.theta < b.theta; });
  const double slope = (mu.uniform_mass - nu.uniform_mass) / two_pi;

  struct Piece
  {
    double len;
    double d0;  // value at the left end
  };
  std::vector<Piece> pieces;
  double x = -pi, d = 0.0;
  for (const Jump &j : jumps)
  {
    if (j.theta > x)
    {
      pieces.push_back({j.theta - x, d});
      d += slope * (j.theta - x);
      x = j.theta;
    }
    d += j.dm;
  }
  if (pi > x)
  {
    pieces.push_back({pi - x, d});
  }

  // Integral of |d0 + slope*s - t| over s in [0, len].
  auto piece_cost = [&](const Piece &p, double t)
  {
    const double a = p.d0 - t, b = p.d0 + slope * p.len - t;
    if (a * b >= 0.0)
    {
      return 0.5 * p.len * std::abs(a + b);
    }
    const double s0 = p.len * a / (a - b);
    return 0.5 * (s0 * std::abs(a) + (p.len - s0) * std::abs(b));
  };
  auto cost = [&](double t)
  {
    double c = 0.0;
    for (const Piece &p : pieces)
    {
      c += piece_cost(p, t);
    }
    return c;
  };
  // The objective is convex in t; its minimizer is a median of D. Search the
  // bracket spanned by the values of D.
  double lo = std::numeric_limits<double>::max(), hi = -lo;
  for (const Piece &p : pieces)
  {
    lo = std::min({lo, p.d0, p.d0 + slope * p.len});
    hi = std::max({hi, p.d0, p.d0 + slope * p.len});
  }
  if (slope == 0.0)
  {
    // Piecewise constant: the minimum is attained at one of the values.
    double best = std::numeric_limits<double>::max();
    for (const Piece &p : pieces)
    {
      best = std::min(best, cost(p.d0));
    }
    return best;
  }
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
  double f1 = cost(c1), f2 = cost(c2);
  for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it)
  {
    if (f1 <= f2)
    {
      b = c2;
      c2 = c1;
      f2 = f1;
      c1 = b - gr * (b - a);
      f1 = cost(c1);
    }
    else
    {
      a = c1;
      c1 = c2;
      f1 = f2;
      c2 = a + gr * (b - a);
      f2 = cost(c2);
    }
  }
  return std::min({f1, f2, cost(lo), cost(hi)});
}

double delay_measure_bound_check(const MpResult &result, const ComplexVector &g,
                                 const CircleMeasure &reference)
{
  CircleMeasure mu;
  mu.atoms = scalar_measure(result, g, true);
  CircleMeasure ref = reference;
  const double t = ref.total();
  KOOP_REQUIRE(t > 0.0, "delay_measure_bound_check: reference measure is empty");
  for (double &p : ref.atoms.mass)
  {
    p /= t;
  }
  ref.uniform_mass /= t;
  return circular_w1(mu, ref);
}

}  // namespace koop
