// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "koop/systems.hpp"

namespace koop
{

enum class DictionaryKind
{
  rbf_kmeans,
  delay,
  fourier,
  monomial,
  linear_state,
  custom
};

std::string to_string(DictionaryKind kind);
DictionaryKind dictionary_kind_from_string(const std::string &name);

using ScalarFunction = std::function<Complex(const RealVector &)>;

/// A scalar observable of the state: a coordinate, the constant 1, or an
/// arbitrary function (the latter is not serializable).
struct Observable
{
  enum class Kind
  {
    coordinate,
    constant,
    function
  };
  Kind kind = Kind::constant;
  Eigen::Index index = 0;
  ScalarFunction fn;
  std::string label;

  static Observable coordinate(Eigen::Index i);
  static Observable constant();
  static Observable function(ScalarFunction f, std::string label = "custom");

  Complex operator()(const RealVector &x) const;
};

/// A finite observable basis psi_1..psi_N on R^d.
///
/// rbf_kmeans: psi_j(s) = exp(-gamma * |s - c_j|). The norm is not squared.
/// delay:      psi_{p*depth + j} = g_p(x_j) on delay states (x_0, .., x_{depth-1})
///             stored as one row of length d*depth.
/// fourier:    e^{i k s_0}, k = -K..K, on a scalar angle.
/// monomial:   s^alpha for |alpha| <= degree, graded by total degree.
/// linear_state: the coordinates s_0..s_{d-1}.
struct Dictionary
{
  DictionaryKind kind = DictionaryKind::linear_state;
  Eigen::Index state_dim = 0;  // length of an input row

  RealMatrix centers;  // rbf: N x d
  double gamma = 0.0;  // rbf
  int max_frequency = 0;  // fourier
  int degree = 0;  // monomial
  std::vector<std::vector<int>> exponents;  // monomial
  Eigen::Index depth = 0;  // delay
  std::vector<Observable> observables;  // delay
  std::vector<ScalarFunction> functions;  // custom

  Eigen::Index size() const;
  void validate() const;
};

struct DataMatrices
{
  DenseMatrix PsiX;  // M x N
  DenseMatrix PsiY;  // M x N
  RealVector W;      // M

  Eigen::Index rows() const { return PsiX.rows(); }
  Eigen::Index cols() const { return PsiX.cols(); }
  void validate() const;
};

Dictionary fourier_dictionary(int max_frequency);
Dictionary monomial_dictionary(Eigen::Index dim, int degree);
Dictionary linear_state_dictionary(Eigen::Index dim);
/// Delay dictionary over states of dimension `dim`; inputs are delay states.
Dictionary delay_dictionary(Eigen::Index dim, Eigen::Index depth,
                            std::vector<Observable> observables);
Dictionary custom_dictionary(Eigen::Index dim, std::vector<ScalarFunction> functions);

struct KMeansResult
{
  RealMatrix centers;  // k x d
  std::vector<Eigen::Index> labels;
  int iterations = 0;
  bool converged = false;
};

/// Seeded k-means with k-means++ initialization and at most max_iter Lloyd
/// steps. Stops when the largest center shift is below rel_tol times the data
/// scale. An empty cluster is re-seeded at the point farthest from its center.
KMeansResult kmeans(const RealMatrix &points, Eigen::Index k, std::uint64_t seed,
                    int max_iter = 100, double rel_tol = 1e-8);

/// Average Euclidean norm of the rows after subtracting their mean.
double mean_centered_radius(const RealMatrix &points);

/// RBF dictionary from k-means on the pooled X and Y states, with
/// gamma = 1/rbar^2 for the pooled mean-centered radius rbar.
Dictionary build_rbf_dictionary(const SnapshotSet &snapshots, Eigen::Index N, std::uint64_t seed);

/// Row m holds psi_1..psi_N at states.row(m).
DenseMatrix evaluate(const Dictionary &dict, const RealMatrix &states);

DataMatrices assemble(const Dictionary &dict, const SnapshotSet &snapshots);

/// Delay states from a trajectory (rows are consecutive states). Row k of X is
/// (x_k, .., x_{k+depth-1}) and row k of Y is its shift by one; the pair count
/// is length - depth and the weights are uniform.
SnapshotSet delay_embed(const RealMatrix &trajectory, Eigen::Index depth);

/// Numerical rank of W^{1/2} Psi_X at relative tolerance tau.
Eigen::Index dictionary_rank(const DataMatrices &data, double tau);

/// JSON document {kind, N, parameters}. Custom dictionaries and function
/// observables cannot be serialized.
std::string dictionary_to_json(const Dictionary &dict);
Dictionary dictionary_from_json(const std::string &text);

}  // namespace koop
