// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <set>

#include "koop/cli.hpp"
#include "koop/dictionary.hpp"
#include "koop/systems.hpp"

namespace koop::cli
{

namespace
{

const json kNull = json();
const json kEmpty = json::object();

[[noreturn]] void fail(const std::string &where, const std::string &what)
{
  throw ConfigError("config: " + where + ": " + what);
}

void require_object(const json &j, const std::string &where)
{
  if (!j.is_object())
  {
    fail(where, "expected an object");
  }
}

void allow_keys(const json &j, const std::string &where, const std::set<std::string> &keys)
{
  for (auto it = j.begin(); it != j.end(); ++it)
  {
    if (!keys.count(it.key()))
    {
      fail(where, "unknown key '" + it.key() + "'");
    }
  }
}

double number(const json &j, const std::string &where)
{
  if (!j.is_number() || !std::isfinite(j.get<double>()))
  {
    fail(where, "expected a finite number");
  }
  return j.get<double>();
}

long long integer(const json &j, const std::string &where, long long min)
{
  if (!j.is_number_integer())
  {
    fail(where, "expected an integer");
  }
  const auto v = j.get<long long>();
  if (v < min)
  {
    fail(where, "must be at least " + std::to_string(min));
  }
  return v;
}

void check_observables(const json &list, const std::string &where)
{
  if (!list.is_array() || list.empty())
  {
    fail(where, "expected a nonempty array");
  }
  for (const auto &item : list)
  {
    if (item.is_string())
    {
      if (item != "const")
      {
        fail(where, "string observables must be \"const\"");
      }
    }
    else if (item.is_number_integer())
    {
      integer(item, where, 0);
    }
    else if (item.is_object())
    {
      allow_keys(item, where, {"coordinate", "center"});
      integer(item.value("coordinate", json()), where + ".coordinate", 0);
      if (item.contains("center") && !item["center"].is_boolean())
      {
        fail(where + ".center", "expected a boolean");
      }
    }
    else
    {
      fail(where, "observable must be an index, \"const\" or {coordinate, center}");
    }
  }
}

void check_system(const json &sys)
{
  require_object(sys, "data.system");
  allow_keys(sys, "data.system", {"name", "parameters", "sample_time", "matrix"});
  if (!sys.contains("name") || !sys["name"].is_string())
  {
    fail("data.system.name", "required string");
  }
  SystemKind kind;
  try
  {
    kind = system_kind_from_string(sys["name"].get<std::string>());
  }
  catch (const std::exception &e)
  {
    fail("data.system.name", e.what());
  }
  if (kind == SystemKind::custom_map)
  {
    fail("data.system.name", "custom_map is only available through the library");
  }
  if (sys.contains("parameters"))
  {
    require_object(sys["parameters"], "data.system.parameters");
    for (auto it = sys["parameters"].begin(); it != sys["parameters"].end(); ++it)
    {
      number(it.value(), "data.system.parameters." + it.key());
    }
  }
  if (sys.contains("sample_time") && number(sys["sample_time"], "data.system.sample_time") <= 0.0)
  {
    fail("data.system.sample_time", "must be positive");
  }
  if (kind == SystemKind::linear_map)
  {
    if (!sys.contains("matrix") || !sys["matrix"].is_array() || sys["matrix"].empty())
    {
      fail("data.system.matrix", "linear_map needs a square matrix");
    }
    const std::size_t n = sys["matrix"].size();
    for (const auto &row : sys["matrix"])
    {
      if (!row.is_array() || row.size() != n)
      {
        fail("data.system.matrix", "linear_map needs a square matrix");
      }
      for (const auto &v : row)
      {
        number(v, "data.system.matrix");
      }
    }
  }
}

void check_sampling(const json &s)
{
  require_object(s, "data.sampling");
  const std::string mode = s.value("mode", "");
  if (mode == "random")
  {
    allow_keys(s, "data.sampling", {"mode", "count", "steps", "box"});
    integer(s.value("count", json()), "data.sampling.count", 1);
    if (s.contains("steps"))
    {
      integer(s["steps"], "data.sampling.steps", 1);
    }
    if (!s.contains("box") || !s["box"].is_array() || s["box"].empty())
    {
      fail("data.sampling.box", "required list of [low, high] pairs");
    }
    for (const auto &iv : s["box"])
    {
      if (!iv.is_array() || iv.size() != 2)
      {
        fail("data.sampling.box", "each entry must be [low, high]");
      }
      if (!(number(iv[0], "data.sampling.box") < number(iv[1], "data.sampling.box")))
      {
        fail("data.sampling.box", "low must be below high");
      }
    }
  }
  else if (mode == "trajectory")
  {
    allow_keys(s, "data.sampling", {"mode", "length", "burn_in", "x0"});
    integer(s.value("length", json()), "data.sampling.length", 2);
    if (s.contains("burn_in"))
    {
      integer(s["burn_in"], "data.sampling.burn_in", 0);
    }
    if (!s.contains("x0") || !s["x0"].is_array() || s["x0"].empty())
    {
      fail("data.sampling.x0", "required initial state");
    }
    for (const auto &v : s["x0"])
    {
      number(v, "data.sampling.x0");
    }
  }
  else
  {
    fail("data.sampling.mode", "must be \"random\" or \"trajectory\"");
  }
}

void check_dictionary(const json &d)
{
  require_object(d, "dictionary");
  if (!d.contains("kind") || !d["kind"].is_string())
  {
    fail("dictionary.kind", "required string");
  }
  const std::string kind = d["kind"];
  if (kind == "rbf")
  {
    allow_keys(d, "dictionary", {"kind", "N"});
    integer(d.value("N", json()), "dictionary.N", 1);
  }
  else if (kind == "fourier")
  {
    allow_keys(d, "dictionary", {"kind", "max_frequency"});
    integer(d.value("max_frequency", json()), "dictionary.max_frequency", 0);
  }
  else if (kind == "monomial")
  {
    allow_keys(d, "dictionary", {"kind", "degree"});
    integer(d.value("degree", json()), "dictionary.degree", 0);
  }
  else if (kind == "linear_state")
  {
    allow_keys(d, "dictionary", {"kind"});
  }
  else if (kind == "delay")
  {
    allow_keys(d, "dictionary", {"kind", "depth", "observables"});
    integer(d.value("depth", json()), "dictionary.depth", 1);
    check_observables(d.value("observables", json()), "dictionary.observables");
  }
  else
  {
    fail("dictionary.kind", "unknown kind '" + kind + "'");
  }
}

void check_grid(const json &g)
{
  require_object(g, "parameters.grid");
  allow_keys(g, "parameters.grid", {"r_min", "r_max", "n_r", "n_theta"});
  const double rmin = number(g.value("r_min", json(0.05)), "parameters.grid.r_min");
  const double rmax = number(g.value("r_max", json(1.5)), "parameters.grid.r_max");
  if (!(rmin >= 0.0 && rmin <= rmax))
  {
    fail("parameters.grid", "need 0 <= r_min <= r_max");
  }
  integer(g.value("n_r", json(30)), "parameters.grid.n_r", 1);
  integer(g.value("n_theta", json(60)), "parameters.grid.n_theta", 1);
}

void check_parameters(Algorithm a, const json &p, bool has_dictionary, bool trajectory)
{
  require_object(p, "parameters");
  auto need_dictionary = [&]
  {
    if (!has_dictionary)
    {
      fail("dictionary", "required for " + to_string(a));
    }
  };
  auto need_trajectory = [&]
  {
    if (!trajectory)
    {
      fail("data", to_string(a) + " needs a single trajectory (sampling.mode = trajectory or trajectory_csv)");
    }
  };
  auto positive = [&](const char *key)
  {
    if (p.contains(key) && !(number(p[key], std::string("parameters.") + key) > 0.0))
    {
      fail(std::string("parameters.") + key, "must be positive");
    }
  };
  auto kernel = [&]
  {
    if (p.contains("kernel"))
    {
      const json &k = p["kernel"];
      require_object(k, "parameters.kernel");
      allow_keys(k, "parameters.kernel", {"m", "epsilon"});
      integer(k.value("m", json(6)), "parameters.kernel.m", 1);
      if (!(number(k.value("epsilon", json(0.05)), "parameters.kernel.epsilon") > 0.0))
      {
        fail("parameters.kernel.epsilon", "must be positive");
      }
    }
    if (p.contains("grid_points"))
    {
      integer(p["grid_points"], "parameters.grid_points", 8);
    }
  };

  switch (a)
  {
    case Algorithm::dmd:
      allow_keys(p, "parameters", {"tol", "threshold"});
      positive("tol");
      positive("threshold");
      break;
    case Algorithm::resdmd:
    case Algorithm::pseudospec:
      need_dictionary();
      allow_keys(p, "parameters", {"pseudospectrum", "epsilon", "grid", "direct"});
      positive("epsilon");
      if (p.contains("grid"))
      {
        check_grid(p["grid"]);
      }
      for (const char *key : {"pseudospectrum", "direct"})
      {
        if (p.contains(key) && !p[key].is_boolean())
        {
          fail(std::string("parameters.") + key, "expected a boolean");
        }
      }
      break;
    case Algorithm::hankel:
      need_trajectory();
      allow_keys(p, "parameters", {"N", "M", "eps_tol", "relative_tol", "observables"});
      integer(p.value("N", json()), "parameters.N", 1);
      integer(p.value("M", json()), "parameters.M", 1);
      positive("eps_tol");
      if (p.contains("observables"))
      {
        check_observables(p["observables"], "parameters.observables");
      }
      if (p.contains("relative_tol") && !p["relative_tol"].is_boolean())
      {
        fail("parameters.relative_tol", "expected a boolean");
      }
      break;
    case Algorithm::mpedmd:
      need_dictionary();
      allow_keys(p, "parameters", {"g", "kernel", "grid_points"});
      if (p.contains("g"))
      {
        integer(p["g"], "parameters.g", 0);
      }
      kernel();
      break;
    case Algorithm::gla:
      need_trajectory();
      allow_keys(p, "parameters", {"frequencies", "n", "observables"});
      if (!p.contains("frequencies") || !p["frequencies"].is_array() || p["frequencies"].empty())
      {
        fail("parameters.frequencies", "required nonempty list of angles");
      }
      for (const auto &f : p["frequencies"])
      {
        number(f, "parameters.frequencies");
      }
      integer(p.value("n", json()), "parameters.n", 1);
      if (p.contains("observables"))
      {
        check_observables(p["observables"], "parameters.observables");
      }
      break;
    case Algorithm::specmeasure:
    {
      allow_keys(p, "parameters", {"method", "N", "observable", "filter", "kernel", "grid_points", "g"});
      const std::string method = p.value("method", "");
      if (method != "quadrature" && method != "fourier" && method != "filtered" && method != "kernel")
      {
        fail("parameters.method", "must be quadrature, fourier, filtered or kernel");
      }
      if (method == "kernel")
      {
        need_dictionary();
        if (p.contains("g"))
        {
          integer(p["g"], "parameters.g", 0);
        }
        kernel();
      }
      else
      {
        need_trajectory();
        integer(p.value("N", json()), "parameters.N", 1);
        check_observables(json::array({p.value("observable", json(0))}), "parameters.observable");
        if (method == "filtered")
        {
          if (!p.contains("filter") || !p["filter"].is_string())
          {
            fail("parameters.filter", "required filter name");
          }
        }
        if (p.contains("grid_points"))
        {
          integer(p["grid_points"], "parameters.grid_points", 8);
        }
      }
      break;
    }
  }
}

}  // namespace

std::string to_string(Algorithm a)
{
  switch (a)
  {
    case Algorithm::dmd: return "dmd";
    case Algorithm::resdmd: return "resdmd";
    case Algorithm::pseudospec: return "pseudospec";
    case Algorithm::hankel: return "hankel";
    case Algorithm::mpedmd: return "mpedmd";
    case Algorithm::gla: return "gla";
    case Algorithm::specmeasure: return "specmeasure";
  }
  return "unknown";
}

Algorithm algorithm_from_string(const std::string &name)
{
  for (Algorithm a : {Algorithm::dmd, Algorithm::resdmd, Algorithm::pseudospec, Algorithm::hankel,
                      Algorithm::mpedmd, Algorithm::gla, Algorithm::specmeasure})
  {
    if (to_string(a) == name)
    {
      return a;
    }
  }
  throw ConfigError("config: algorithm: unknown algorithm '" + name + "'");
}

const json &RunConfig::dictionary() const
{
  return raw.contains("dictionary") ? raw["dictionary"] : kNull;
}

const json &RunConfig::parameters() const
{
  return raw.contains("parameters") ? raw["parameters"] : kEmpty;
}

RunConfig parse_config(const json &doc, const std::filesystem::path &base_dir)
{
  require_object(doc, "document");
  allow_keys(doc, "document", {"algorithm", "seed", "output_dir", "data", "dictionary", "parameters"});

  RunConfig cfg;
  cfg.raw = doc;
  if (!doc.contains("algorithm") || !doc["algorithm"].is_string())
  {
    fail("algorithm", "required string");
  }
  cfg.algorithm = algorithm_from_string(doc["algorithm"]);
  if (doc.contains("seed"))
  {
    cfg.seed = static_cast<std::uint64_t>(integer(doc["seed"], "seed", 0));
  }
  if (!doc.contains("output_dir") || !doc["output_dir"].is_string() ||
      doc["output_dir"].get<std::string>().empty())
  {
    fail("output_dir", "required nonempty string");
  }
  cfg.output_dir = doc["output_dir"].get<std::string>();

  if (!doc.contains("data"))
  {
    fail("data", "missing data source");
  }
  const json &data = doc["data"];
  require_object(data, "data");
  allow_keys(data, "data", {"system", "sampling", "input_dir", "trajectory_csv"});
  const int sources = static_cast<int>(data.contains("system")) +
                      static_cast<int>(data.contains("input_dir")) +
                      static_cast<int>(data.contains("trajectory_csv"));
  if (sources != 1)
  {
    fail("data", "exactly one of system, input_dir, trajectory_csv is required");
  }
  bool trajectory = false;
  auto resolve = [&](const char *key)
  {
    if (!data[key].is_string())
    {
      fail(std::string("data.") + key, "expected a path");
    }
    std::filesystem::path p = data[key].get<std::string>();
    if (p.is_relative() && !base_dir.empty())
    {
      p = base_dir / p;
    }
    if (!std::filesystem::exists(p))
    {
      throw IoError(std::string("data.") + key + ": '" + p.string() + "' does not exist");
    }
    cfg.raw["data"][key] = p.string();
  };
  if (data.contains("system"))
  {
    check_system(data["system"]);
    if (!data.contains("sampling"))
    {
      fail("data.sampling", "required with a system");
    }
    check_sampling(data["sampling"]);
    trajectory = data["sampling"]["mode"] == "trajectory";
  }
  else
  {
    if (data.contains("sampling"))
    {
      fail("data.sampling", "only valid with a system");
    }
    if (data.contains("input_dir"))
    {
      resolve("input_dir");
    }
    else
    {
      resolve("trajectory_csv");
      trajectory = true;
    }
  }

  const bool has_dictionary = doc.contains("dictionary");
  if (has_dictionary)
  {
    check_dictionary(doc["dictionary"]);
    if (doc["dictionary"]["kind"] == "delay" && !trajectory)
    {
      fail("dictionary", "a delay dictionary needs a trajectory data source");
    }
  }
  check_parameters(cfg.algorithm, cfg.parameters(), has_dictionary, trajectory);
  return cfg;
}

void apply_override(json &doc, const std::string &assignment)
{
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
  {
    throw ConfigError("override '" + assignment + "': expected key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded())
  {
    value = text;
  }
  json *node = &doc;
  std::size_t start = 0;
  while (true)
  {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty())
    {
      throw ConfigError("override '" + assignment + "': empty key component");
    }
    if (!node->is_object())
    {
      *node = json::object();
    }
    node = &(*node)[part];
    if (dot == std::string::npos)
    {
      break;
    }
    start = dot + 1;
  }
  *node = value;
}

json demo_config(const std::string &name)
{
  if (name == "duffing")
  {
    return {{"algorithm", "resdmd"},
            {"seed", 1},
            {"output_dir", "duffing_out"},
            {"data",
             {{"system", {{"name", "duffing"}, {"sample_time", 0.3}}},
              {"sampling", {{"mode", "random"}, {"count", 10000}, {"steps", 2},
                            {"box", {{-2.0, 2.0}, {-2.0, 2.0}}}}}}},
            {"dictionary", {{"kind", "rbf"}, {"N", 50}}},
            {"parameters", {{"pseudospectrum", true}, {"epsilon", 0.1}}}};
  }
  if (name == "lorenz")
  {
    return {{"algorithm", "hankel"},
            {"seed", 1},
            {"output_dir", "lorenz_out"},
            {"data",
             {{"system", {{"name", "lorenz"}, {"sample_time", 0.01}}},
              {"sampling", {{"mode", "trajectory"}, {"length", 20101}, {"burn_in", 10000},
                            {"x0", {1.0, 1.0, 1.0}}}}}},
            {"parameters", {{"N", 100}, {"M", 20000}, {"observables", {0, 1, 2, "const"}}}}};
  }
  if (name == "rossler")
  {
    return {{"algorithm", "mpedmd"},
            {"seed", 1},
            {"output_dir", "rossler_out"},
            {"data",
             {{"system",
               {{"name", "rossler"}, {"sample_time", 0.25},
                {"parameters", {{"a", 0.15}, {"b", 0.4}, {"c", 8.5}}}}},
              {"sampling", {{"mode", "trajectory"}, {"length", 50100}, {"burn_in", 10000},
                            {"x0", {1.0, 1.0, 1.0}}}}}},
            {"dictionary",
             {{"kind", "delay"}, {"depth", 100},
              {"observables", json::array({{{"coordinate", 2}, {"center", true}}})}}},
            {"parameters", {{"g", 0}, {"kernel", {{"m", 6}, {"epsilon", 0.05}}}}}};
  }
  if (name == "rotation")
  {
    return {{"algorithm", "resdmd"},
            {"seed", 1},
            {"output_dir", "rotation_out"},
            {"data",
             {{"system", {{"name", "rotation"}, {"parameters", {{"alpha", 0.7}}}}},
              {"sampling", {{"mode", "random"}, {"count", 512}, {"steps", 1},
                            {"box", {{0.0, 6.283185307179586}}}}}}},
            {"dictionary", {{"kind", "fourier"}, {"max_frequency", 10}}},
            {"parameters", {{"pseudospectrum", true}, {"epsilon", 0.05}}}};
  }
  throw ConfigError("demo: unknown demo '" + name + "' (duffing, lorenz, rossler, rotation)");
}

}  // namespace koop::cli
