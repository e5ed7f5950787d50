// SPDX-License-Identifier: Apache-2.0

#include <Eigen/Core>
#include <chrono>
#include <fstream>
#include <numbers>
#include <optional>

#include "koop/cli.hpp"
#include "koop/csv.hpp"
#include "koop/dictionary.hpp"
#include "koop/dmd.hpp"
#include "koop/gla.hpp"
#include "koop/hankel.hpp"
#include "koop/mpedmd.hpp"
#include "koop/resdmd.hpp"
#include "koop/specmeasure.hpp"
#include "koop/systems.hpp"

namespace koop::cli
{

namespace
{

constexpr const char *kVersion = "0.1.0";

template <typename F>
auto stage(RunReport &report, const std::string &name, F &&fn)
{
  const auto start = std::chrono::steady_clock::now();
  auto finish = [&]
  {
    report.stage_time(name, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  };
  try
  {
    if constexpr (std::is_void_v<decltype(fn())>)
    {
      fn();
      finish();
    }
    else
    {
      auto out = fn();
      finish();
      return out;
    }
  }
  catch (const ConfigError &)
  {
    throw;
  }
  catch (const IoError &)
  {
    throw;
  }
  catch (const ContractViolation &e)
  {
    // Library preconditions that the schema cannot see (N > M, short series).
    throw ConfigError(name + ": " + e.what());
  }
  catch (const StageFailure &)
  {
    throw;
  }
  catch (const std::exception &e)
  {
    throw StageFailure(name, e.what());
  }
}

SystemSpec make_system(const json &sys)
{
  const SystemKind kind = system_kind_from_string(sys.at("name"));
  SystemSpec spec;
  switch (kind)
  {
    case SystemKind::duffing: spec = SystemSpec::duffing(); break;
    case SystemKind::lorenz: spec = SystemSpec::lorenz(); break;
    case SystemKind::rossler: spec = SystemSpec::rossler(); break;
    case SystemKind::rotation: spec = SystemSpec::rotation(0.0); break;
    case SystemKind::linear_map:
    {
      const auto &rows = sys.at("matrix");
      const auto n = static_cast<Eigen::Index>(rows.size());
      RealMatrix A(n, n);
      for (Eigen::Index i = 0; i < n; ++i)
      {
        for (Eigen::Index j = 0; j < n; ++j)
        {
          A(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].get<double>();
        }
      }
      spec = SystemSpec::linear(A);
      break;
    }
    case SystemKind::custom_map:
      throw ConfigError("config: data.system.name: custom_map is only available through the library");
  }
  if (sys.contains("parameters"))
  {
    for (auto it = sys["parameters"].begin(); it != sys["parameters"].end(); ++it)
    {
      spec.parameters[it.key()] = it.value().get<double>();
    }
  }
  if (sys.contains("sample_time"))
  {
    spec.sample_time = sys["sample_time"].get<double>();
  }
  spec.validate();
  return spec;
}

struct Loaded
{
  std::optional<SnapshotSet> pairs;
  std::optional<RealMatrix> trajectory;

  SnapshotSet as_pairs() const { return pairs ? *pairs : trajectory_pairs(*trajectory); }
};

Loaded load_data(const RunConfig &cfg)
{
  const json &data = cfg.data();
  Loaded out;
  if (data.contains("input_dir"))
  {
    out.pairs = load_snapshot_dir(data["input_dir"].get<std::string>());
    return out;
  }
  if (data.contains("trajectory_csv"))
  {
    out.trajectory = read_csv_matrix(data["trajectory_csv"].get<std::string>());
    return out;
  }
  const SystemSpec spec = make_system(data["system"]);
  const json &s = data["sampling"];
  if (s["mode"] == "random")
  {
    Box box;
    for (const auto &iv : s["box"])
    {
      box.emplace_back(iv[0].get<double>(), iv[1].get<double>());
    }
    out.pairs = sample_random(spec, s["count"].get<Eigen::Index>(), box, s.value("steps", 1), cfg.seed);
  }
  else
  {
    RealVector x0(static_cast<Eigen::Index>(s["x0"].size()));
    for (Eigen::Index i = 0; i < x0.size(); ++i)
    {
      x0(i) = s["x0"][static_cast<std::size_t>(i)].get<double>();
    }
    const Eigen::Index burn = s.contains("burn_in") ? s["burn_in"].get<Eigen::Index>() : default_burn_in(spec);
    out.trajectory = sample_trajectory(spec, x0, s["length"].get<Eigen::Index>(), burn);
  }
  return out;
}

std::vector<Observable> make_observables(const json &list, const RealMatrix *trajectory)
{
  std::vector<Observable> obs;
  for (const auto &item : list)
  {
    if (item.is_string())
    {
      obs.push_back(Observable::constant());
    }
    else if (item.is_number_integer())
    {
      obs.push_back(Observable::coordinate(item.get<Eigen::Index>()));
    }
    else
    {
      const auto i = item.at("coordinate").get<Eigen::Index>();
      if (!item.value("center", false))
      {
        obs.push_back(Observable::coordinate(i));
        continue;
      }
      KOOP_REQUIRE(trajectory != nullptr, "centered observables need trajectory data");
      KOOP_REQUIRE(i < trajectory->cols(), "observable coordinate out of range");
      const double mean = trajectory->col(i).mean();
      obs.push_back(Observable::function([i, mean](const RealVector &x) { return Complex(x(i) - mean, 0.0); },
                                         "x" + std::to_string(i) + "-mean"));
    }
  }
  return obs;
}

json default_coordinates(Eigen::Index dim, bool with_constant)
{
  json list = json::array();
  for (Eigen::Index i = 0; i < dim; ++i)
  {
    list.push_back(i);
  }
  if (with_constant)
  {
    list.push_back("const");
  }
  return list;
}

struct Fitted
{
  Dictionary dict;
  DataMatrices data;
};

Fitted build_dictionary(const RunConfig &cfg, const Loaded &loaded, RunReport &report)
{
  const json &d = cfg.dictionary();
  const std::string kind = d["kind"];
  Fitted f;
  if (kind == "delay")
  {
    const RealMatrix &traj = *loaded.trajectory;
    const auto depth = d["depth"].get<Eigen::Index>();
    f.dict = delay_dictionary(traj.cols(), depth, make_observables(d["observables"], &traj));
    f.data = assemble(f.dict, delay_embed(traj, depth));
    return f;
  }
  const SnapshotSet pairs = loaded.as_pairs();
  if (kind == "rbf")
  {
    f.dict = build_rbf_dictionary(pairs, d["N"].get<Eigen::Index>(), cfg.seed);
  }
  else if (kind == "fourier")
  {
    f.dict = fourier_dictionary(d["max_frequency"].get<int>());
  }
  else if (kind == "monomial")
  {
    f.dict = monomial_dictionary(pairs.dim(), d["degree"].get<int>());
  }
  else
  {
    f.dict = linear_state_dictionary(pairs.dim());
  }
  f.data = assemble(f.dict, pairs);
  (void)report;
  return f;
}

class Emitter
{
public:
  Emitter(const std::filesystem::path &dir, RunReport &report) : dir_(dir), report_(report) {}

  void csv(const std::string &name, const RealMatrix &M, const std::vector<std::string> &header)
  {
    write_csv_matrix(dir_ / name, M, header);
    report_.add_file(name);
  }

  std::filesystem::path path(const std::string &name)
  {
    report_.add_file(name);
    return dir_ / name;
  }

  void text(const std::string &name, const std::string &content)
  {
    std::ofstream out(dir_ / name);
    out << content;
    if (!out)
    {
      throw IoError("cannot write " + (dir_ / name).string());
    }
    report_.add_file(name);
  }

private:
  std::filesystem::path dir_;
  RunReport &report_;
};

void emit_eigenvalues(Emitter &emit, const ComplexVector &lambda, const RealVector *residuals,
                      const std::string &title)
{
  const Eigen::Index n = lambda.size();
  RealMatrix table(n, residuals ? 4 : 3);
  std::vector<ScatterPoint> pts;
  for (Eigen::Index i = 0; i < n; ++i)
  {
    table(i, 0) = lambda(i).real();
    table(i, 1) = lambda(i).imag();
    table(i, 2) = std::abs(lambda(i));
    if (residuals)
    {
      table(i, 3) = (*residuals)(i);
    }
    pts.push_back({lambda(i).real(), lambda(i).imag(), residuals ? (*residuals)(i) : 0.0});
  }
  std::vector<std::string> header = {"re", "im", "abs"};
  if (residuals)
  {
    header.push_back("residual");
  }
  emit.csv("eigenvalues.csv", table, header);
  write_scatter_svg(emit.path("eigenvalues.svg"), title, pts, true);
}

void emit_density(Emitter &emit, const std::vector<double> &theta, const std::vector<double> &values,
                  const std::string &title, RunReport &report, bool log_y)
{
  RealMatrix table(static_cast<Eigen::Index>(theta.size()), 2);
  LineSeries s{"density", theta, values};
  std::size_t nonpositive = 0;
  for (std::size_t i = 0; i < theta.size(); ++i)
  {
    table(static_cast<Eigen::Index>(i), 0) = theta[i];
    table(static_cast<Eigen::Index>(i), 1) = values[i];
    nonpositive += values[i] <= 0.0 ? 1 : 0;
  }
  emit.csv("density.csv", table, {"theta", "density"});
  if (log_y && nonpositive > 0)
  {
    report.warn(std::to_string(nonpositive) + " density samples are not positive; omitted from the log plot");
  }
  write_line_svg(emit.path("density.svg"), title, {s}, log_y);
}

void run_pseudospec(const RunConfig &cfg, const DataMatrices &data, RunReport &report, Emitter &emit)
{
  const json &p = cfg.parameters();
  const json grid = p.value("grid", json::object());
  const double rmin = grid.value("r_min", 0.05), rmax = grid.value("r_max", 1.5);
  const int nr = grid.value("n_r", 30), nt = grid.value("n_theta", 60);
  const double eps = p.value("epsilon", 0.1);
  PseudospectrumOptions opts;
  opts.direct = p.value("direct", false);
  const auto points = polar_grid(rmin, rmax, nr, nt);
  const PseudospectrumGrid ps =
    stage(report, "pseudospectrum", [&] { return pseudospectrum(data, points, eps, opts); });

  stage(report, "emit",
        [&]
        {
          RealMatrix table(static_cast<Eigen::Index>(points.size()), 4);
          RealMatrix X(nr, nt), Y(nr, nt), T(nr, nt);
          std::size_t accepted = 0;
          for (std::size_t l = 0; l < points.size(); ++l)
          {
            const auto i = static_cast<Eigen::Index>(l);
            table(i, 0) = points[l].real();
            table(i, 1) = points[l].imag();
            table(i, 2) = ps.tau(i);
            table(i, 3) = ps.accepted[l] ? 1.0 : 0.0;
            accepted += ps.accepted[l] ? 1 : 0;
            X(i / nt, i % nt) = points[l].real();
            Y(i / nt, i % nt) = points[l].imag();
            T(i / nt, i % nt) = ps.tau(i);
          }
          emit.csv("pseudospectrum.csv", table, {"re", "im", "tau", "accepted"});
          std::vector<double> levels;
          for (int k = 4; k >= 0; --k)
          {
            levels.push_back(eps * std::pow(10.0, -0.5 * k));
          }
          write_contour_svg(emit.path("pseudospectrum.svg"), "pseudospectrum levels", X, Y, T, levels,
                            true, true);
          report.doc["summary"]["pseudospectrum"] = {{"epsilon", eps},
                                                     {"grid_points", points.size()},
                                                     {"accepted", accepted},
                                                     {"min_tau", ps.tau.minCoeff()}};
        });
}

void run_dmd(const RunConfig &cfg, const Loaded &loaded, RunReport &report, Emitter &emit)
{
  const json &p = cfg.parameters();
  const SnapshotSet pairs = loaded.as_pairs();
  DmdOptions opts;
  if (p.contains("tol"))
  {
    opts.tol = p["tol"].get<double>();
  }
  const DmdResult r = stage(report, "fit",
                            [&]
                            {
                              return dmd(pairs.X.transpose().cast<Complex>(),
                                         pairs.Y.transpose().cast<Complex>(), opts);
                            });
  const double threshold = p.value("threshold", 1e-6);
  const auto selected = select_modes_by_residual(r, threshold);
  stage(report, "emit",
        [&]
        {
          emit_eigenvalues(emit, r.eigenvalues, &r.residuals, "DMD eigenvalues");
          emit.csv("singular_values.csv", r.singular_values, {"sigma"});
          report.doc["summary"] = {{"rank", r.rank},
                                   {"threshold", threshold},
                                   {"selected_modes", selected.size()}};
        });
}

void run_resdmd(const RunConfig &cfg, const Loaded &loaded, RunReport &report, Emitter &emit)
{
  const Fitted f = stage(report, "dictionary", [&] { return build_dictionary(cfg, loaded, report); });
  if (f.dict.kind != DictionaryKind::delay)
  {
    emit.text("dictionary.json", dictionary_to_json(f.dict));
  }
  if (cfg.algorithm == Algorithm::resdmd)
  {
    const KoopmanFit fit = stage(report, "fit", [&] { return edmd_fit(f.data); });
    // Rounding-level negatives are expected; report only material ones.
    if (fit.defect_min_eigenvalue < -1e-10 * std::max(1.0, fit.L.norm()))
    {
      report.warn("L - K*GK has a negative eigenvalue (" + format_number(fit.defect_min_eigenvalue) +
                  "); quadratic forms are clipped at 0");
    }
    const auto pairs = stage(report, "residuals", [&] { return validate_eigenpairs(fit); });
    stage(report, "emit",
          [&]
          {
            ComplexVector lam(static_cast<Eigen::Index>(pairs.size()));
            RealVector res(lam.size());
            std::size_t below = 0;
            for (std::size_t i = 0; i < pairs.size(); ++i)
            {
              lam(static_cast<Eigen::Index>(i)) = pairs[i].lambda;
              res(static_cast<Eigen::Index>(i)) = pairs[i].res;
              below += pairs[i].res < 0.05 ? 1 : 0;
            }
            emit_eigenvalues(emit, lam, &res, "EDMD eigenvalues coloured by residual");
            report.doc["summary"]["eigenpairs"] = pairs.size();
            report.doc["summary"]["residual_below_0.05"] = below;
          });
    if (!cfg.parameters().value("pseudospectrum", false))
    {
      return;
    }
  }
  run_pseudospec(cfg, f.data, report, emit);
}

void run_hankel(const RunConfig &cfg, const Loaded &loaded, RunReport &report, Emitter &emit)
{
  const json &p = cfg.parameters();
  const RealMatrix &traj = *loaded.trajectory;
  HankelConfig hc;
  hc.N = p["N"].get<Eigen::Index>();
  hc.M = p["M"].get<Eigen::Index>();
  hc.eps_tol = p.value("eps_tol", 1e-10);
  hc.relative_tol = p.value("relative_tol", false);
  const json obs = p.value("observables", default_coordinates(traj.cols(), true));
  const DenseMatrix series =
    stage(report, "observables", [&] { return observable_series(traj, make_observables(obs, &traj)); });
  const HankelResult r = stage(report, "fit", [&] { return hankel_dmd(series, hc); });
  const RealVector res = stage(report, "residuals", [&] { return hankel_residuals(series, hc, r); });
  stage(report, "emit",
        [&]
        {
          emit_eigenvalues(emit, r.eigenvalues, &res, "Hankel-DMD eigenvalues coloured by residual");
          emit.csv("singular_values.csv", r.singular_values, {"sigma"});
          emit.csv("scalings.csv", r.scalings, {"alpha"});
          json summary = {{"rank", r.rank}};
          if (res.size() > 0)
          {
            Eigen::Index best = 0;
            res.minCoeff(&best);
            summary["smallest_residual"] = {{"re", r.eigenvalues(best).real()},
                                            {"im", r.eigenvalues(best).imag()},
                                            {"residual", res(best)}};
          }
          report.doc["summary"] = summary;
        });
}

void run_kernel_density(const RunConfig &cfg, const Fitted &f, RunReport &report, Emitter &emit,
                        bool write_eigenvalues)
{
  const json &p = cfg.parameters();
  const MpResult mp = stage(report, "fit", [&] { return mpedmd_fit(f.data); });
  const auto gi = p.value("g", Eigen::Index{0});
  if (gi >= f.data.cols())
  {
    throw ConfigError("config: parameters.g: index " + std::to_string(gi) + " exceeds dictionary size " +
                      std::to_string(f.data.cols()));
  }
  ComplexVector g = ComplexVector::Zero(f.data.cols());
  g(gi) = 1.0;
  const AtomicSpectralMeasure mu = stage(report, "measure", [&] { return scalar_measure(mp, g, true); });
  const json kernel = p.value("kernel", json::object());
  const RationalKernel k = stage(report, "kernel",
                                 [&] { return rational_kernel_build(kernel.value("m", 6), kernel.value("epsilon", 0.05)); });
  if (k.warning)
  {
    report.warn(*k.warning);
  }
  const auto grid = theta_grid(p.value("grid_points", 2048));
  const SpectralMeasureApprox dens = stage(report, "smoothing", [&] { return smoothed_density(mu, k, grid); });
  for (const auto &w : dens.warnings)
  {
    report.warn(w);
  }
  stage(report, "emit",
        [&]
        {
          if (write_eigenvalues)
          {
            RealMatrix table(mp.eigenvalues.size(), 3);
            for (Eigen::Index i = 0; i < mp.eigenvalues.size(); ++i)
            {
              table(i, 0) = mp.eigenvalues(i).real();
              table(i, 1) = mp.eigenvalues(i).imag();
              table(i, 2) = std::arg(mp.eigenvalues(i));
            }
            emit.csv("eigenvalues.csv", table, {"re", "im", "angle"});
            std::vector<ScatterPoint> pts;
            for (Eigen::Index i = 0; i < mp.eigenvalues.size(); ++i)
            {
              pts.push_back({mp.eigenvalues(i).real(), mp.eigenvalues(i).imag(), 0.0});
            }
            write_scatter_svg(emit.path("eigenvalues.svg"), "mpEDMD eigenvalues", pts, true);
          }
          RealMatrix atoms(static_cast<Eigen::Index>(mu.theta.size()), 2);
          for (std::size_t i = 0; i < mu.theta.size(); ++i)
          {
            atoms(static_cast<Eigen::Index>(i), 0) = mu.theta[i];
            atoms(static_cast<Eigen::Index>(i), 1) = mu.mass[i];
          }
          emit.csv("measure.csv", atoms, {"theta", "mass"});
          emit_density(emit, grid, dens.values, "smoothed spectral density", report, true);
          report.doc["summary"] = {{"dictionary_size", f.data.cols()},
                                   {"atoms", mu.theta.size()},
                                   {"kernel_order", k.m},
                                   {"epsilon", k.epsilon}};
        });
}

void run_mpedmd(const RunConfig &cfg, const Loaded &loaded, RunReport &report, Emitter &emit, bool eigenvalues)
{
  const Fitted f = stage(report, "dictionary", [&] { return build_dictionary(cfg, loaded, report); });
  run_kernel_density(cfg, f, report, emit, eigenvalues);
}

void run_gla(const RunConfig &cfg, const Loaded &loaded, RunReport &report, Emitter &emit)
{
  const json &p = cfg.parameters();
  const RealMatrix &traj = *loaded.trajectory;
  const json obs = p.value("observables", default_coordinates(traj.cols(), false));
  const DenseMatrix series =
    stage(report, "observables", [&] { return observable_series(traj, make_observables(obs, &traj)); });
  std::vector<Complex> zs;
  for (const auto &f : p["frequencies"])
  {
    zs.push_back(std::polar(1.0, f.get<double>()));
  }
  const ModeExtraction ex =
    stage(report, "fit", [&] { return extract_modes(series, zs, p["n"].get<Eigen::Index>()); });
  for (const auto &w : ex.warnings)
  {
    report.warn(w);
  }
  stage(report, "emit",
        [&]
        {
          const Eigen::Index nobs = series.cols();
          RealMatrix table(static_cast<Eigen::Index>(ex.modes.size()) * nobs, 4);
          for (std::size_t k = 0; k < ex.modes.size(); ++k)
          {
            for (Eigen::Index j = 0; j < nobs; ++j)
            {
              const Eigen::Index row = static_cast<Eigen::Index>(k) * nobs + j;
              table(row, 0) = std::arg(ex.modes[k].z);
              table(row, 1) = static_cast<double>(j);
              table(row, 2) = ex.modes[k].mode(j).real();
              table(row, 3) = ex.modes[k].mode(j).imag();
            }
          }
          emit.csv("modes.csv", table, {"frequency", "observable", "re", "im"});
          report.doc["summary"] = {{"modes", ex.modes.size()}, {"n", p["n"]}};
        });
}

void run_specmeasure(const RunConfig &cfg, const Loaded &loaded, RunReport &report, Emitter &emit)
{
  const json &p = cfg.parameters();
  const std::string method = p["method"];
  if (method == "kernel")
  {
    run_mpedmd(cfg, loaded, report, emit, false);
    return;
  }
  const RealMatrix &traj = *loaded.trajectory;
  const int N = p["N"].get<int>();
  const DenseMatrix series = stage(report, "observables",
                                   [&]
                                   {
                                     return observable_series(
                                       traj, make_observables(json::array({p.value("observable", json(0))}), &traj));
                                   });
  const MomentSequence moments = stage(report, "moments",
                                       [&]
                                       {
                                         const ComplexVector col = series.col(0);
                                         return moments_from_trajectory(
                                           std::span<const Complex>(col.data(), static_cast<std::size_t>(col.size())), N);
                                       });
  const auto grid = theta_grid(p.value("grid_points", 2048));
  const SpectralMeasureApprox approx = stage(report, "measure",
                                             [&]
                                             {
                                               if (method == "quadrature")
                                               {
                                                 return interpolatory_quadrature(moments);
                                               }
                                               if (method == "fourier")
                                               {
                                                 return fourier_density(moments);
                                               }
                                               return filtered_density(moments, Filter::from_name(p["filter"]));
                                             });
  for (const auto &w : approx.warnings)
  {
    report.warn(w);
  }
  stage(report, "emit",
        [&]
        {
          RealMatrix mom(2 * N + 1, 3);
          for (int n = -N; n <= N; ++n)
          {
            mom(n + N, 0) = n;
            mom(n + N, 1) = moments.at(n).real();
            mom(n + N, 2) = moments.at(n).imag();
          }
          emit.csv("moments.csv", mom, {"n", "re", "im"});
          if (method == "quadrature")
          {
            RealMatrix atoms(static_cast<Eigen::Index>(approx.theta.size()), 3);
            LineSeries s{"weights", approx.theta, {}};
            for (std::size_t i = 0; i < approx.theta.size(); ++i)
            {
              atoms(static_cast<Eigen::Index>(i), 0) = approx.theta[i];
              atoms(static_cast<Eigen::Index>(i), 1) = approx.weights[i].real();
              atoms(static_cast<Eigen::Index>(i), 2) = approx.weights[i].imag();
              s.y.push_back(approx.weights[i].real());
            }
            emit.csv("atoms.csv", atoms, {"theta", "weight_re", "weight_im"});
            write_line_svg(emit.path("atoms.svg"), "quadrature weights", {s}, false);
            report.doc["summary"] = {{"N", N},
                                     {"weight_l1", approx.weight_l1},
                                     {"condition_estimate", approx.condition_estimate}};
          }
          else
          {
            std::vector<double> values;
            for (double t : grid)
            {
              values.push_back(approx.density(t));
            }
            emit_density(emit, grid, values, method + " density", report, false);
            report.doc["summary"] = {{"N", N}, {"method", approx.method}};
          }
        });
}

}  // namespace

void RunReport::warn(const std::string &msg)
{
  doc["warnings"].push_back(msg);
}

void RunReport::add_file(const std::filesystem::path &p)
{
  doc["files"].push_back(p.generic_string());
}

void RunReport::stage_time(const std::string &stage, double seconds)
{
  doc["stages"].push_back({{"stage", stage}, {"seconds", seconds}});
}

RunReport run(const RunConfig &cfg)
{
  RunReport report;
  report.doc = {{"config", cfg.raw},
                {"version",
                 {{"koop", kVersion},
                  {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                              "." + std::to_string(EIGEN_MINOR_VERSION)}}},
                {"stages", json::array()},
                {"warnings", json::array()},
                {"files", json::array()},
                {"summary", json::object()}};

  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec)
  {
    throw IoError("cannot create output directory " + cfg.output_dir.string() + ": " + ec.message());
  }
  Emitter emit(cfg.output_dir, report);

  const Loaded loaded = stage(report, "generate", [&] { return load_data(cfg); });
  switch (cfg.algorithm)
  {
    case Algorithm::dmd: run_dmd(cfg, loaded, report, emit); break;
    case Algorithm::resdmd:
    case Algorithm::pseudospec: run_resdmd(cfg, loaded, report, emit); break;
    case Algorithm::hankel: run_hankel(cfg, loaded, report, emit); break;
    case Algorithm::mpedmd: run_mpedmd(cfg, loaded, report, emit, true); break;
    case Algorithm::gla: run_gla(cfg, loaded, report, emit); break;
    case Algorithm::specmeasure: run_specmeasure(cfg, loaded, report, emit); break;
  }

  report.add_file("report.json");
  std::ofstream out(cfg.output_dir / "report.json");
  out << report.doc.dump(2) << '\n';
  if (!out)
  {
    throw IoError("cannot write report.json");
  }
  return report;
}

int exit_code_for(const std::exception &e)
{
  if (dynamic_cast<const IoError *>(&e))
  {
    return 4;
  }
  if (dynamic_cast<const ContractViolation *>(&e) || dynamic_cast<const json::exception *>(&e))
  {
    return 2;
  }
  if (dynamic_cast<const NumericalFailure *>(&e))
  {
    return 3;
  }
  return 1;
}

}  // namespace koop::cli
