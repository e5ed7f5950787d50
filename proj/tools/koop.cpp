// SPDX-License-Identifier: Apache-2.0
//
// koop: command-line front end. Every command reads a JSON run configuration
// (or a built-in demo), applies flag overrides and runs one pipeline.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "koop/cli.hpp"

namespace kc = koop::cli;

namespace
{

struct Options
{
  std::string config_path;
  std::string output;
  long long seed = -1;
  std::vector<std::string> overrides;
  bool print_config = false;
};

void add_common(CLI::App *cmd, Options &opt, bool config_required)
{
  auto *c = cmd->add_option("-c,--config", opt.config_path, "JSON run configuration");
  if (config_required)
  {
    c->required();
  }
  cmd->add_option("-o,--output", opt.output, "output directory (overrides output_dir)");
  cmd->add_option("--seed", opt.seed, "random seed (overrides seed)");
  cmd->add_option("--set", opt.overrides, "override a config key, e.g. parameters.epsilon=0.05");
  cmd->add_flag("--print-config", opt.print_config, "print the effective configuration and exit");
}

int execute(kc::json doc, const std::string &algorithm, const std::filesystem::path &base_dir,
            const Options &opt)
{
  if (!algorithm.empty())
  {
    doc["algorithm"] = algorithm;
  }
  if (!opt.output.empty())
  {
    doc["output_dir"] = opt.output;
  }
  if (opt.seed >= 0)
  {
    doc["seed"] = opt.seed;
  }
  for (const auto &o : opt.overrides)
  {
    kc::apply_override(doc, o);
  }
  if (opt.print_config)
  {
    std::cout << doc.dump(2) << '\n';
    return 0;
  }
  const kc::RunConfig cfg = kc::parse_config(doc, base_dir);
  const kc::RunReport report = kc::run(cfg);
  std::cout << "wrote " << report.doc["files"].size() << " files to " << cfg.output_dir.string() << '\n';
  for (const auto &w : report.doc["warnings"])
  {
    std::cout << "warning: " << w.get<std::string>() << '\n';
  }
  if (!report.doc["summary"].empty())
  {
    std::cout << report.doc["summary"].dump() << '\n';
  }
  return 0;
}

kc::json load(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw kc::ConfigError("cannot read config file " + path);
  }
  return kc::json::parse(in);
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Koopman spectral analysis from snapshot data"};
  app.require_subcommand(1);

  Options opt;
  std::string demo_name;
  std::string measure_method;

  auto *demo = app.add_subcommand("demo", "run a built-in example (duffing, lorenz, rossler, rotation)");
  demo->add_option("name", demo_name, "demo name")->required();
  add_common(demo, opt, false);

  std::vector<std::pair<CLI::App *, std::string>> algos;
  for (const char *name : {"dmd", "resdmd", "pseudospec", "hankel", "mpedmd", "gla"})
  {
    auto *cmd = app.add_subcommand(name, std::string("run the ") + name + " pipeline");
    add_common(cmd, opt, true);
    algos.emplace_back(cmd, name);
  }
  auto *sm = app.add_subcommand("specmeasure", "spectral measure estimation");
  sm->add_option("method", measure_method, "quadrature | fourier | filtered | kernel")->required();
  add_common(sm, opt, true);

  CLI11_PARSE(app, argc, argv);

  try
  {
    if (demo->parsed())
    {
      return execute(kc::demo_config(demo_name), "", {}, opt);
    }
    kc::json doc = load(opt.config_path);
    const std::filesystem::path base = std::filesystem::path(opt.config_path).parent_path();
    if (sm->parsed())
    {
      if (doc.is_object())
      {
        doc["parameters"]["method"] = measure_method;
      }
      return execute(doc, "specmeasure", base, opt);
    }
    for (const auto &[cmd, name] : algos)
    {
      if (cmd->parsed())
      {
        return execute(doc, name, base, opt);
      }
    }
  }
  catch (const std::exception &e)
  {
    std::cerr << "koop: " << e.what() << '\n';
    return kc::exit_code_for(e);
  }
  return 1;
}
