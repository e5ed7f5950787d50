// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "koop/numerics.hpp"

namespace koop
{

/// Paired snapshot data: row m of Y is F applied to row m of X.
struct SnapshotSet
{
  RealMatrix X;       // M x d
  RealMatrix Y;       // M x d
  RealVector weights; // M quadrature weights

  Eigen::Index size() const { return X.rows(); }
  Eigen::Index dim() const { return X.cols(); }
  void validate() const;
};

enum class SystemKind
{
  duffing,
  lorenz,
  rossler,
  rotation,
  linear_map,
  custom_map
};

std::string to_string(SystemKind kind);
SystemKind system_kind_from_string(const std::string &name);

using StateMap = std::function<RealVector(const RealVector &)>;

struct SystemSpec
{
  SystemKind kind = SystemKind::rotation;
  std::map<std::string, double> parameters;
  double sample_time = 0.0;  // continuous-time systems only
  RealMatrix matrix;         // linear_map
  StateMap map;              // custom_map
  Eigen::Index custom_dim = 0;

  static SystemSpec duffing(double dt = 0.3);
  static SystemSpec lorenz(double dt = 0.01);
  static SystemSpec rossler(double a = 0.15, double b = 0.4, double c = 8.5, double dt = 0.25);
  static SystemSpec rotation(double alpha);
  static SystemSpec linear(RealMatrix A);
  static SystemSpec custom(StateMap f, Eigen::Index dim);

  bool is_ode() const;
  Eigen::Index dim() const;
  /// Largest RK4 substep; overridable through parameters["h_max"].
  double max_substep() const;
  double param(const std::string &key) const;
  void validate() const;
};

/// Per-dimension closed-open sampling intervals.
using Box = std::vector<std::pair<double, double>>;

/// The discrete-time map F. ODE systems integrate the sample_time flow with
/// fixed-step classical RK4.
RealVector flow_step(const SystemSpec &spec, const RealVector &state);

/// M initial points drawn uniformly from the box; every consecutive pair
/// along `steps` iterations is recorded, giving M*steps pairs with equal
/// weights.
SnapshotSet sample_random(const SystemSpec &spec, Eigen::Index M, const Box &box, int steps,
                          std::uint64_t seed);

/// Consecutive states x_{burn_in}, ..., x_{burn_in+length-1} as rows.
RealMatrix sample_trajectory(const SystemSpec &spec, const RealVector &x0, Eigen::Index length,
                             Eigen::Index burn_in);

/// Default burn-in (10^4 steps) for the chaotic systems, 0 otherwise.
Eigen::Index default_burn_in(const SystemSpec &spec);

/// Pairs (x_k, x_{k+1}) of a trajectory with ergodic weights 1/M.
SnapshotSet trajectory_pairs(const RealMatrix &trajectory);

/// First integral y^2/2 - x^2/2 + x^4/4 of x' = y, y' = x - x^3.
double duffing_energy(const RealVector &state);

/// Seeded 64-bit Mersenne twister shared by all samplers. The real and
/// integer conversions are done here so streams match across standard
/// libraries.
class Rng
{
public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  /// Uniform on [a, b) from the top 53 bits.
  double uniform(double a = 0.0, double b = 1.0);
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

private:
  std::mt19937_64 engine_;
};

}  // namespace koop
