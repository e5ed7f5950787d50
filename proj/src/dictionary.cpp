// SPDX-License-Identifier: Apache-2.0

#include "koop/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

namespace koop
{

std::string to_string(DictionaryKind kind)
{
  switch (kind)
  {
    case DictionaryKind::rbf_kmeans:
      return "rbf_kmeans";
    case DictionaryKind::delay:
      return "delay";
    case DictionaryKind::fourier:
      return "fourier";
    case DictionaryKind::monomial:
      return "monomial";
    case DictionaryKind::linear_state:
      return "linear_state";
    case DictionaryKind::custom:
      return "custom";
  }
  return "unknown";
}

DictionaryKind dictionary_kind_from_string(const std::string &name)
{
  for (DictionaryKind k : {DictionaryKind::rbf_kmeans, DictionaryKind::delay,
                           DictionaryKind::fourier, DictionaryKind::monomial,
                           DictionaryKind::linear_state, DictionaryKind::custom})
  {
    if (to_string(k) == name)
    {
      return k;
    }
  }
  throw ContractViolation("unknown dictionary kind: " + name);
}

Observable Observable::coordinate(Eigen::Index i)
{
  Observable o;
  o.kind = Kind::coordinate;
  o.index = i;
  o.label = "x" + std::to_string(i);
  return o;
}

Observable Observable::constant()
{
  Observable o;
  o.kind = Kind::constant;
  o.label = "const";
  return o;
}

Observable Observable::function(ScalarFunction f, std::string label)
{
  Observable o;
  o.kind = Kind::function;
  o.fn = std::move(f);
  o.label = std::move(label);
  return o;
}

Complex Observable::operator()(const RealVector &x) const
{
  switch (kind)
  {
    case Kind::coordinate:
      return x(index);
    case Kind::constant:
      return 1.0;
    case Kind::function:
      return fn(x);
  }
  return 0.0;
}

Eigen::Index Dictionary::size() const
{
  switch (kind)
  {
    case DictionaryKind::rbf_kmeans:
      return centers.rows();
    case DictionaryKind::delay:
      return depth * static_cast<Eigen::Index>(observables.size());
    case DictionaryKind::fourier:
      return 2 * max_frequency + 1;
    case DictionaryKind::monomial:
      return static_cast<Eigen::Index>(exponents.size());
    case DictionaryKind::linear_state:
      return state_dim;
    case DictionaryKind::custom:
      return static_cast<Eigen::Index>(functions.size());
  }
  return 0;
}

void Dictionary::validate() const
{
  KOOP_REQUIRE(state_dim >= 1, "dictionary: state dimension must be positive");
  KOOP_REQUIRE(size() >= 1, "dictionary: at least one function is required");
  switch (kind)
  {
    case DictionaryKind::rbf_kmeans:
      KOOP_REQUIRE(centers.cols() == state_dim, "rbf dictionary: center dimension mismatch");
      KOOP_REQUIRE(std::isfinite(gamma) && gamma > 0.0, "rbf dictionary: gamma must be positive");
      break;
    case DictionaryKind::delay:
    {
      KOOP_REQUIRE(depth >= 1 && state_dim % depth == 0,
                   "delay dictionary: input width must be a multiple of the depth");
      const Eigen::Index d = state_dim / depth;
      for (const auto &o : observables)
      {
        KOOP_REQUIRE(o.kind != Observable::Kind::coordinate || (o.index >= 0 && o.index < d),
                     "delay dictionary: observable coordinate out of range");
        KOOP_REQUIRE(o.kind != Observable::Kind::function || static_cast<bool>(o.fn),
                     "delay dictionary: empty observable function");
      }
      break;
    }
    case DictionaryKind::fourier:
      KOOP_REQUIRE(state_dim == 1, "fourier dictionary: state must be a scalar angle");
      break;
    case DictionaryKind::monomial:
      for (const auto &e : exponents)
      {
        KOOP_REQUIRE(static_cast<Eigen::Index>(e.size()) == state_dim,
                     "monomial dictionary: exponent length mismatch");
      }
      break;
    case DictionaryKind::linear_state:
      break;
    case DictionaryKind::custom:
      for (const auto &f : functions)
      {
        KOOP_REQUIRE(static_cast<bool>(f), "custom dictionary: empty function");
      }
      break;
  }
}

void DataMatrices::validate() const
{
  KOOP_REQUIRE(PsiX.rows() >= 1 && PsiX.cols() >= 1, "data matrices: empty");
  KOOP_REQUIRE(PsiX.rows() == PsiY.rows() && PsiX.cols() == PsiY.cols(),
               "data matrices: Psi_X and Psi_Y shapes differ");
  KOOP_REQUIRE(W.size() == PsiX.rows(), "data matrices: one weight per row");
  require_finite(PsiX, "Psi_X");
  require_finite(PsiY, "Psi_Y");
  for (Eigen::Index m = 0; m < W.size(); ++m)
  {
    KOOP_REQUIRE(std::isfinite(W(m)) && W(m) >= 0.0, "data matrices: invalid weight");
  }
}

Dictionary fourier_dictionary(int max_frequency)
{
  KOOP_REQUIRE(max_frequency >= 0, "fourier dictionary: max frequency must be nonnegative");
  Dictionary d;
  d.kind = DictionaryKind::fourier;
  d.state_dim = 1;
  d.max_frequency = max_frequency;
  return d;
}

namespace
{

void exponents_of_degree(Eigen::Index dim, int total, std::vector<int> &cur, std::size_t pos,
                         std::vector<std::vector<int>> &out)
{
  if (pos + 1 == static_cast<std::size_t>(dim))
  {
    cur[pos] = total;
    out.push_back(cur);
    return;
  }
  for (int e = total; e >= 0; --e)
  {
    cur[pos] = e;
    exponents_of_degree(dim, total - e, cur, pos + 1, out);
  }
}

}  // namespace

Dictionary monomial_dictionary(Eigen::Index dim, int degree)
{
  KOOP_REQUIRE(dim >= 1 && degree >= 0, "monomial dictionary: invalid dimension or degree");
  Dictionary d;
  d.kind = DictionaryKind::monomial;
  d.state_dim = dim;
  d.degree = degree;
  std::vector<int> cur(static_cast<std::size_t>(dim), 0);
  for (int t = 0; t <= degree; ++t)
  {
    exponents_of_degree(dim, t, cur, 0, d.exponents);
  }
  return d;
}

Dictionary linear_state_dictionary(Eigen::Index dim)
{
  KOOP_REQUIRE(dim >= 1, "linear_state dictionary: dimension must be positive");
  Dictionary d;
  d.kind = DictionaryKind::linear_state;
  d.state_dim = dim;
  return d;
}

Dictionary delay_dictionary(Eigen::Index dim, Eigen::Index depth,
                            std::vector<Observable> observables)
{
  KOOP_REQUIRE(dim >= 1 && depth >= 1, "delay dictionary: invalid dimension or depth");
  KOOP_REQUIRE(!observables.empty(), "delay dictionary: at least one observable is required");
  Dictionary d;
  d.kind = DictionaryKind::delay;
  d.state_dim = dim * depth;
  d.depth = depth;
  d.observables = std::move(observables);
  d.validate();
  return d;
}

Dictionary custom_dictionary(Eigen::Index dim, std::vector<ScalarFunction> functions)
{
  Dictionary d;
  d.kind = DictionaryKind::custom;
  d.state_dim = dim;
  d.functions = std::move(functions);
  d.validate();
  return d;
}

double mean_centered_radius(const RealMatrix &points)
{
  KOOP_REQUIRE(points.rows() >= 1, "mean_centered_radius: no points");
  const RealVector mean = points.colwise().mean().transpose();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i)
  {
    acc += (points.row(i).transpose() - mean).norm();
  }
  return acc / static_cast<double>(points.rows());
}

KMeansResult kmeans(const RealMatrix &points, Eigen::Index k, std::uint64_t seed, int max_iter,
                    double rel_tol)
{
  const Eigen::Index n = points.rows(), d = points.cols();
  KOOP_REQUIRE(k >= 1, "kmeans: k must be positive");
  KOOP_REQUIRE(n >= k, "kmeans: fewer points than clusters");
  KOOP_REQUIRE(points.allFinite(), "kmeans: non-finite points");

  Rng rng(seed);
  KMeansResult out;
  out.centers.resize(k, d);
  out.labels.assign(static_cast<std::size_t>(n), 0);

  // k-means++ seeding.
  std::vector<double> dist2(static_cast<std::size_t>(n), std::numeric_limits<double>::max());
  out.centers.row(0) = points.row(static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n))));
  for (Eigen::Index c = 1; c < k; ++c)
  {
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
    {
      auto &di = dist2[static_cast<std::size_t>(i)];
      di = std::min(di, (points.row(i) - out.centers.row(c - 1)).squaredNorm());
      total += di;
    }
    Eigen::Index pick = n - 1;
    if (total > 0.0)
    {
      const double target = rng.uniform(0.0, total);
      double run = 0.0;
      for (Eigen::Index i = 0; i < n; ++i)
      {
        run += dist2[static_cast<std::size_t>(i)];
        if (run > target)
        {
          pick = i;
          break;
        }
      }
    }
    else
    {
      pick = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
    }
    out.centers.row(c) = points.row(pick);
  }

  const double scale = std::max(points.cwiseAbs().maxCoeff(), 1e-300);
  std::vector<double> assigned_dist(static_cast<std::size_t>(n), 0.0);
  for (int it = 0; it < max_iter; ++it)
  {
    for (Eigen::Index i = 0; i < n; ++i)
    {
      double best = std::numeric_limits<double>::max();
      Eigen::Index lab = 0;
      for (Eigen::Index c = 0; c < k; ++c)
      {
        const double dd = (points.row(i) - out.centers.row(c)).squaredNorm();
        if (dd < best)
        {
          best = dd;
          lab = c;
        }
      }
      out.labels[static_cast<std::size_t>(i)] = lab;
      assigned_dist[static_cast<std::size_t>(i)] = best;
    }
    RealMatrix sums = RealMatrix::Zero(k, d);
    std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i)
    {
      const Eigen::Index lab = out.labels[static_cast<std::size_t>(i)];
      sums.row(lab) += points.row(i);
      ++counts[static_cast<std::size_t>(lab)];
    }
    RealMatrix next(k, d);
    for (Eigen::Index c = 0; c < k; ++c)
    {
      const auto cnt = counts[static_cast<std::size_t>(c)];
      if (cnt > 0)
      {
        next.row(c) = sums.row(c) / static_cast<double>(cnt);
        continue;
      }
      auto far = std::max_element(assigned_dist.begin(), assigned_dist.end());
      const auto idx = static_cast<Eigen::Index>(far - assigned_dist.begin());
      next.row(c) = points.row(idx);
      *far = 0.0;
    }
    const double shift = (next - out.centers).rowwise().norm().maxCoeff();
    out.centers = next;
    out.iterations = it + 1;
    if (shift <= rel_tol * scale)
    {
      out.converged = true;
      break;
    }
  }
  return out;
}

Dictionary build_rbf_dictionary(const SnapshotSet &snapshots, Eigen::Index N, std::uint64_t seed)
{
  snapshots.validate();
  KOOP_REQUIRE(N >= 1, "build_rbf_dictionary: N must be positive");
  KOOP_REQUIRE(snapshots.size() >= N, "build_rbf_dictionary: fewer snapshots than centers");
  RealMatrix pooled(2 * snapshots.size(), snapshots.dim());
  pooled << snapshots.X, snapshots.Y;
  const double rbar = mean_centered_radius(pooled);
  if (!(rbar > 0.0))
  {
    throw DegenerateData("build_rbf_dictionary: snapshot states have zero spread");
  }
  Dictionary d;
  d.kind = DictionaryKind::rbf_kmeans;
  d.state_dim = snapshots.dim();
  d.centers = kmeans(pooled, N, seed).centers;
  d.gamma = 1.0 / (rbar * rbar);
  return d;
}

DenseMatrix evaluate(const Dictionary &dict, const RealMatrix &states)
{
  dict.validate();
  KOOP_REQUIRE(states.cols() == dict.state_dim, "evaluate: state dimension mismatch");
  const Eigen::Index M = states.rows(), N = dict.size();
  DenseMatrix out(M, N);
  switch (dict.kind)
  {
    case DictionaryKind::rbf_kmeans:
      for (Eigen::Index j = 0; j < N; ++j)
      {
        for (Eigen::Index m = 0; m < M; ++m)
        {
          out(m, j) = std::exp(-dict.gamma * (states.row(m) - dict.centers.row(j)).norm());
        }
      }
      break;
    case DictionaryKind::delay:
    {
      const Eigen::Index d = dict.state_dim / dict.depth;
      for (std::size_t p = 0; p < dict.observables.size(); ++p)
      {
        const auto &obs = dict.observables[p];
        for (Eigen::Index j = 0; j < dict.depth; ++j)
        {
          const Eigen::Index col = static_cast<Eigen::Index>(p) * dict.depth + j;
          for (Eigen::Index m = 0; m < M; ++m)
          {
            out(m, col) = obs(states.row(m).segment(j * d, d).transpose());
          }
        }
      }
      break;
    }
    case DictionaryKind::fourier:
      for (Eigen::Index m = 0; m < M; ++m)
      {
        for (int k = -dict.max_frequency; k <= dict.max_frequency; ++k)
        {
          out(m, k + dict.max_frequency) = std::polar(1.0, k * states(m, 0));
        }
      }
      break;
    case DictionaryKind::monomial:
      for (Eigen::Index j = 0; j < N; ++j)
      {
        const auto &e = dict.exponents[static_cast<std::size_t>(j)];
        for (Eigen::Index m = 0; m < M; ++m)
        {
          double v = 1.0;
          for (Eigen::Index i = 0; i < dict.state_dim; ++i)
          {
            const int p = e[static_cast<std::size_t>(i)];
            for (int q = 0; q < p; ++q)
            {
              v *= states(m, i);
            }
          }
          out(m, j) = v;
        }
      }
      break;
    case DictionaryKind::linear_state:
      out = states.cast<Complex>();
      break;
    case DictionaryKind::custom:
      for (Eigen::Index m = 0; m < M; ++m)
      {
        const RealVector s = states.row(m).transpose();
        for (Eigen::Index j = 0; j < N; ++j)
        {
          out(m, j) = dict.functions[static_cast<std::size_t>(j)](s);
        }
      }
      break;
  }
  return out;
}

DataMatrices assemble(const Dictionary &dict, const SnapshotSet &snapshots)
{
  snapshots.validate();
  DataMatrices out{evaluate(dict, snapshots.X), evaluate(dict, snapshots.Y), snapshots.weights};
  out.validate();
  return out;
}

SnapshotSet delay_embed(const RealMatrix &trajectory, Eigen::Index depth)
{
  KOOP_REQUIRE(depth >= 1, "delay_embed: depth must be positive");
  KOOP_REQUIRE(trajectory.rows() >= depth + 1, "delay_embed: trajectory shorter than depth + 1");
  const Eigen::Index d = trajectory.cols();
  const Eigen::Index M = trajectory.rows() - depth;
  SnapshotSet out;
  out.X.resize(M, d * depth);
  out.Y.resize(M, d * depth);
  for (Eigen::Index k = 0; k < M; ++k)
  {
    for (Eigen::Index j = 0; j < depth; ++j)
    {
      out.X.block(k, j * d, 1, d) = trajectory.row(k + j);
      out.Y.block(k, j * d, 1, d) = trajectory.row(k + j + 1);
    }
  }
  out.weights = RealVector::Constant(M, 1.0 / static_cast<double>(M));
  return out;
}

Eigen::Index dictionary_rank(const DataMatrices &data, double tau)
{
  const DenseMatrix B = data.W.cwiseSqrt().asDiagonal() * data.PsiX;
  return numerical_rank(svd(B).singular_values, tau);
}

std::string dictionary_to_json(const Dictionary &dict)
{
  dict.validate();
  using nlohmann::json;
  json params = json::object();
  params["dim"] = dict.state_dim;
  switch (dict.kind)
  {
    case DictionaryKind::rbf_kmeans:
    {
      json centers = json::array();
      for (Eigen::Index j = 0; j < dict.centers.rows(); ++j)
      {
        json row = json::array();
        for (Eigen::Index i = 0; i < dict.centers.cols(); ++i)
        {
          row.push_back(dict.centers(j, i));
        }
        centers.push_back(row);
      }
      params["centers"] = centers;
      params["gamma"] = dict.gamma;
      break;
    }
    case DictionaryKind::delay:
    {
      params["depth"] = dict.depth;
      json obs = json::array();
      for (const auto &o : dict.observables)
      {
        if (o.kind == Observable::Kind::function)
        {
          throw ContractViolation("dictionary_to_json: function observables are not serializable");
        }
        obs.push_back(o.kind == Observable::Kind::constant ? json("const") : json(o.index));
      }
      params["observables"] = obs;
      break;
    }
    case DictionaryKind::fourier:
      params["max_frequency"] = dict.max_frequency;
      break;
    case DictionaryKind::monomial:
      params["degree"] = dict.degree;
      break;
    case DictionaryKind::linear_state:
      break;
    case DictionaryKind::custom:
      throw ContractViolation("dictionary_to_json: custom dictionaries are not serializable");
  }
  json doc = {{"kind", to_string(dict.kind)}, {"N", dict.size()}, {"parameters", params}};
  return doc.dump(2);
}

Dictionary dictionary_from_json(const std::string &text)
{
  using nlohmann::json;
  json doc;
  try
  {
    doc = json::parse(text);
  }
  catch (const json::exception &e)
  {
    throw ContractViolation(std::string("dictionary JSON: ") + e.what());
  }
  try
  {
    const DictionaryKind kind = dictionary_kind_from_string(doc.at("kind").get<std::string>());
    const json &p = doc.at("parameters");
    const auto dim = p.at("dim").get<Eigen::Index>();
    Dictionary d;
    switch (kind)
    {
      case DictionaryKind::rbf_kmeans:
      {
        const json &c = p.at("centers");
        d.kind = kind;
        d.state_dim = dim;
        d.centers.resize(static_cast<Eigen::Index>(c.size()), dim);
        for (std::size_t j = 0; j < c.size(); ++j)
        {
          KOOP_REQUIRE(static_cast<Eigen::Index>(c[j].size()) == dim,
                       "dictionary JSON: center has the wrong dimension");
          for (Eigen::Index i = 0; i < dim; ++i)
          {
            d.centers(static_cast<Eigen::Index>(j), i) =
              c[j][static_cast<std::size_t>(i)].get<double>();
          }
        }
        d.gamma = p.at("gamma").get<double>();
        break;
      }
      case DictionaryKind::delay:
      {
        const auto depth = p.at("depth").get<Eigen::Index>();
        KOOP_REQUIRE(depth >= 1 && dim % depth == 0, "dictionary JSON: invalid delay depth");
        std::vector<Observable> obs;
        for (const auto &o : p.at("observables"))
        {
          obs.push_back(o.is_string() ? Observable::constant()
                                      : Observable::coordinate(o.get<Eigen::Index>()));
        }
        d = delay_dictionary(dim / depth, depth, std::move(obs));
        break;
      }
      case DictionaryKind::fourier:
        d = fourier_dictionary(p.at("max_frequency").get<int>());
        break;
      case DictionaryKind::monomial:
        d = monomial_dictionary(dim, p.at("degree").get<int>());
        break;
      case DictionaryKind::linear_state:
        d = linear_state_dictionary(dim);
        break;
      case DictionaryKind::custom:
        throw ContractViolation("dictionary JSON: custom dictionaries cannot be loaded");
    }
    d.validate();
    if (doc.contains("N"))
    {
      KOOP_REQUIRE(doc.at("N").get<Eigen::Index>() == d.size(),
                   "dictionary JSON: N does not match the parameters");
    }
    return d;
  }
  catch (const json::exception &e)
  {
    throw ContractViolation(std::string("dictionary JSON: ") + e.what());
  }
}

}  // namespace koop
