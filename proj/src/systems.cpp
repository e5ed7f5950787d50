// SPDX-License-Identifier: Apache-2.0

#include "koop/systems.hpp"

#include <cmath>
#include <numbers>

namespace koop
{

void SnapshotSet::validate() const
{
  KOOP_REQUIRE(X.rows() >= 1, "SnapshotSet: at least one snapshot pair is required");
  KOOP_REQUIRE(X.rows() == Y.rows() && X.cols() == Y.cols(),
               "SnapshotSet: X and Y must have the same shape");
  KOOP_REQUIRE(weights.size() == X.rows(), "SnapshotSet: one weight per snapshot pair");
  KOOP_REQUIRE(X.allFinite() && Y.allFinite(), "SnapshotSet: non-finite state data");
  for (Eigen::Index m = 0; m < weights.size(); ++m)
  {
    KOOP_REQUIRE(std::isfinite(weights(m)) && weights(m) >= 0.0,
                 "SnapshotSet: weights must be finite and nonnegative");
  }
}

std::string to_string(SystemKind kind)
{
  switch (kind)
  {
    case SystemKind::duffing:
      return "duffing";
    case SystemKind::lorenz:
      return "lorenz";
    case SystemKind::rossler:
      return "rossler";
    case SystemKind::rotation:
      return "rotation";
    case SystemKind::linear_map:
      return "linear_map";
    case SystemKind::custom_map:
      return "custom_map";
  }
  return "unknown";
}

SystemKind system_kind_from_string(const std::string &name)
{
  for (SystemKind k : {SystemKind::duffing, SystemKind::lorenz, SystemKind::rossler,
                       SystemKind::rotation, SystemKind::linear_map, SystemKind::custom_map})
  {
    if (to_string(k) == name)
    {
      return k;
    }
  }
  throw ContractViolation("unknown system name: " + name);
}

SystemSpec SystemSpec::duffing(double dt)
{
  SystemSpec s;
  s.kind = SystemKind::duffing;
  s.sample_time = dt;
  return s;
}

SystemSpec SystemSpec::lorenz(double dt)
{
  SystemSpec s;
  s.kind = SystemKind::lorenz;
  s.sample_time = dt;
  s.parameters = {{"sigma", 10.0}, {"rho", 28.0}, {"beta", 8.0 / 3.0}};
  return s;
}

SystemSpec SystemSpec::rossler(double a, double b, double c, double dt)
{
  SystemSpec s;
  s.kind = SystemKind::rossler;
  s.sample_time = dt;
  s.parameters = {{"a", a}, {"b", b}, {"c", c}};
  return s;
}

SystemSpec SystemSpec::rotation(double alpha)
{
  SystemSpec s;
  s.kind = SystemKind::rotation;
  s.parameters = {{"alpha", alpha}};
  return s;
}

SystemSpec SystemSpec::linear(RealMatrix A)
{
  SystemSpec s;
  s.kind = SystemKind::linear_map;
  s.matrix = std::move(A);
  return s;
}

SystemSpec SystemSpec::custom(StateMap f, Eigen::Index dim)
{
  SystemSpec s;
  s.kind = SystemKind::custom_map;
  s.map = std::move(f);
  s.custom_dim = dim;
  return s;
}

bool SystemSpec::is_ode() const
{
  return kind == SystemKind::duffing || kind == SystemKind::lorenz || kind == SystemKind::rossler;
}

Eigen::Index SystemSpec::dim() const
{
  switch (kind)
  {
    case SystemKind::duffing:
      return 2;
    case SystemKind::lorenz:
    case SystemKind::rossler:
      return 3;
    case SystemKind::rotation:
      return 1;
    case SystemKind::linear_map:
      return matrix.rows();
    case SystemKind::custom_map:
      return custom_dim;
  }
  return 0;
}

double SystemSpec::max_substep() const
{
  if (auto it = parameters.find("h_max"); it != parameters.end())
  {
    return it->second;
  }
  return kind == SystemKind::duffing ? 5e-3 : 1e-3;
}

double SystemSpec::param(const std::string &key) const
{
  auto it = parameters.find(key);
  if (it == parameters.end())
  {
    throw ContractViolation(to_string(kind) + ": missing parameter '" + key + "'");
  }
  return it->second;
}

void SystemSpec::validate() const
{
  switch (kind)
  {
    case SystemKind::duffing:
      break;
    case SystemKind::lorenz:
      param("sigma");
      param("rho");
      param("beta");
      break;
    case SystemKind::rossler:
      param("a");
      param("b");
      param("c");
      break;
    case SystemKind::rotation:
      param("alpha");
      break;
    case SystemKind::linear_map:
      KOOP_REQUIRE(matrix.rows() >= 1 && matrix.rows() == matrix.cols(),
                   "linear_map: matrix must be square and nonempty");
      KOOP_REQUIRE(matrix.allFinite(), "linear_map: matrix has non-finite entries");
      break;
    case SystemKind::custom_map:
      KOOP_REQUIRE(static_cast<bool>(map) && custom_dim >= 1,
                   "custom_map: a map and a positive dimension are required");
      break;
  }
  if (is_ode())
  {
    KOOP_REQUIRE(sample_time > 0.0, to_string(kind) + ": sample_time must be positive");
    KOOP_REQUIRE(max_substep() > 0.0, to_string(kind) + ": h_max must be positive");
  }
}

namespace
{

RealVector vector_field(const SystemSpec &spec, const RealVector &s)
{
  RealVector ds(s.size());
  switch (spec.kind)
  {
    case SystemKind::duffing:
      ds(0) = s(1);
      ds(1) = s(0) - s(0) * s(0) * s(0);
      break;
    case SystemKind::lorenz:
    {
      const double sigma = spec.param("sigma"), rho = spec.param("rho"),
                   beta = spec.param("beta");
      ds(0) = sigma * (s(1) - s(0));
      ds(1) = s(0) * (rho - s(2)) - s(1);
      ds(2) = s(0) * s(1) - beta * s(2);
      break;
    }
    case SystemKind::rossler:
    {
      const double a = spec.param("a"), b = spec.param("b"), c = spec.param("c");
      ds(0) = -(s(1) + s(2));
      ds(1) = s(0) + a * s(1);
      ds(2) = b + s(0) * s(2) - c * s(2);
      break;
    }
    default:
      throw ContractViolation("vector_field: not a continuous-time system");
  }
  return ds;
}

RealVector rk4_flow(const SystemSpec &spec, RealVector x)
{
  const double dt = spec.sample_time;
  const auto substeps =
    static_cast<long>(std::max(1.0, std::ceil(dt / spec.max_substep() - 1e-9)));
  const double h = dt / static_cast<double>(substeps);
  for (long i = 0; i < substeps; ++i)
  {
    const RealVector k1 = vector_field(spec, x);
    const RealVector k2 = vector_field(spec, x + 0.5 * h * k1);
    const RealVector k3 = vector_field(spec, x + 0.5 * h * k2);
    const RealVector k4 = vector_field(spec, x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

double wrap_angle(double t)
{
  const double two_pi = 2.0 * std::numbers::pi;
  t = std::fmod(t, two_pi);
  if (t < 0.0)
  {
    t += two_pi;
  }
  return t >= two_pi ? 0.0 : t;
}

}  // namespace

RealVector flow_step(const SystemSpec &spec, const RealVector &state)
{
  spec.validate();
  KOOP_REQUIRE(state.size() == spec.dim(), "flow_step: state dimension mismatch");
  KOOP_REQUIRE(state.allFinite(), "flow_step: non-finite state");
  RealVector out;
  switch (spec.kind)
  {
    case SystemKind::duffing:
    case SystemKind::lorenz:
    case SystemKind::rossler:
      out = rk4_flow(spec, state);
      break;
    case SystemKind::rotation:
      out = RealVector::Constant(1, wrap_angle(state(0) + spec.param("alpha")));
      break;
    case SystemKind::linear_map:
      out = spec.matrix * state;
      break;
    case SystemKind::custom_map:
      out = spec.map(state);
      KOOP_REQUIRE(out.size() == spec.dim(), "custom_map: image has the wrong dimension");
      break;
  }
  if (!out.allFinite())
  {
    throw DivergenceError("flow_step: state became non-finite", 1);
  }
  return out;
}

SnapshotSet sample_random(const SystemSpec &spec, Eigen::Index M, const Box &box, int steps,
                          std::uint64_t seed)
{
  spec.validate();
  KOOP_REQUIRE(M >= 1, "sample_random: M must be at least 1");
  KOOP_REQUIRE(steps >= 1, "sample_random: steps must be at least 1");
  const Eigen::Index d = spec.dim();
  KOOP_REQUIRE(static_cast<Eigen::Index>(box.size()) == d,
               "sample_random: box must have one interval per state dimension");
  for (const auto &[lo, hi] : box)
  {
    KOOP_REQUIRE(std::isfinite(lo) && std::isfinite(hi) && hi > lo,
                 "sample_random: empty or invalid box interval");
  }

  Rng rng(seed);
  const Eigen::Index total = M * steps;
  SnapshotSet out;
  out.X.resize(total, d);
  out.Y.resize(total, d);
  out.weights = RealVector::Constant(total, 1.0 / static_cast<double>(total));
  Eigen::Index row = 0;
  for (Eigen::Index m = 0; m < M; ++m)
  {
    RealVector x(d);
    for (Eigen::Index i = 0; i < d; ++i)
    {
      x(i) = rng.uniform(box[static_cast<std::size_t>(i)].first,
                         box[static_cast<std::size_t>(i)].second);
    }
    for (int s = 0; s < steps; ++s)
    {
      RealVector y = flow_step(spec, x);
      out.X.row(row) = x.transpose();
      out.Y.row(row) = y.transpose();
      ++row;
      x = std::move(y);
    }
  }
  return out;
}

RealMatrix sample_trajectory(const SystemSpec &spec, const RealVector &x0, Eigen::Index length,
                             Eigen::Index burn_in)
{
  spec.validate();
  KOOP_REQUIRE(length >= 2, "sample_trajectory: length must be at least 2");
  KOOP_REQUIRE(burn_in >= 0, "sample_trajectory: burn_in must be nonnegative");
  KOOP_REQUIRE(x0.size() == spec.dim(), "sample_trajectory: initial state dimension mismatch");
  RealVector x = x0;
  auto advance = [&](Eigen::Index step)
  {
    try
    {
      x = flow_step(spec, x);
    }
    catch (const DivergenceError &)
    {
      throw DivergenceError("sample_trajectory: trajectory diverged",
                            static_cast<std::size_t>(step));
    }
  };
  for (Eigen::Index k = 0; k < burn_in; ++k)
  {
    advance(k + 1);
  }
  RealMatrix out(length, spec.dim());
  out.row(0) = x.transpose();
  for (Eigen::Index k = 1; k < length; ++k)
  {
    advance(burn_in + k);
    out.row(k) = x.transpose();
  }
  return out;
}

Eigen::Index default_burn_in(const SystemSpec &spec)
{
  return (spec.kind == SystemKind::lorenz || spec.kind == SystemKind::rossler) ? 10000 : 0;
}

SnapshotSet trajectory_pairs(const RealMatrix &trajectory)
{
  KOOP_REQUIRE(trajectory.rows() >= 2, "trajectory_pairs: at least two states are required");
  const Eigen::Index M = trajectory.rows() - 1;
  SnapshotSet out;
  out.X = trajectory.topRows(M);
  out.Y = trajectory.bottomRows(M);
  out.weights = RealVector::Constant(M, 1.0 / static_cast<double>(M));
  return out;
}

double duffing_energy(const RealVector &s)
{
  const double x = s(0), y = s(1);
  return 0.5 * y * y - 0.5 * x * x + 0.25 * x * x * x * x;
}

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

std::uint64_t Rng::next()
{
  return engine_();
}

double Rng::uniform(double a, double b)
{
  const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
  return a + (b - a) * u;
}

std::uint64_t Rng::below(std::uint64_t n)
{
  KOOP_REQUIRE(n > 0, "Rng::below: empty range");
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t r = next();
  while (r >= limit)
  {
    r = next();
  }
  return r % n;
}

}  // namespace koop
