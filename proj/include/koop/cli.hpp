// SPDX-License-Identifier: Apache-2.0
//
// Configuration-driven pipelines behind the `koop` command.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "koop/errors.hpp"
#include "koop/numerics.hpp"

namespace koop::cli
{

using nlohmann::json;

enum class Algorithm
{
  dmd,
  resdmd,
  pseudospec,
  hankel,
  mpedmd,
  gla,
  specmeasure
};

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string &name);

/// Raised for anything the schema or the cross-field checks reject (exit 2).
class ConfigError : public ContractViolation
{
public:
  using ContractViolation::ContractViolation;
};

/// A failure inside a named pipeline stage (exit 3).
class StageFailure : public NumericalFailure
{
public:
  StageFailure(const std::string &stage, const std::string &what)
    : NumericalFailure(stage + ": " + what), stage_(stage)
  {
  }
  const std::string &stage() const { return stage_; }

private:
  std::string stage_;
};

/// Validated configuration. The raw document is kept for echoing and for the
/// algorithm parameters, which are read with defaults by each pipeline.
struct RunConfig
{
  json raw;
  Algorithm algorithm = Algorithm::resdmd;
  std::filesystem::path output_dir;
  std::uint64_t seed = 0;

  const json &data() const { return raw.at("data"); }
  const json &dictionary() const;  // null json if absent
  const json &parameters() const;  // {} if absent
};

/// Checks structure, types and ranges; throws ConfigError.
RunConfig parse_config(const json &doc, const std::filesystem::path &base_dir = {});

/// Applies "a.b.c=value" overrides. Values parse as JSON when possible and as
/// strings otherwise.
void apply_override(json &doc, const std::string &assignment);

/// Built-in configurations for `koop demo <name>`.
json demo_config(const std::string &name);

struct RunReport
{
  json doc;

  void warn(const std::string &msg);
  void add_file(const std::filesystem::path &p);
  void stage_time(const std::string &stage, double seconds);
};

/// Runs the pipeline and writes outputs plus report.json. Throws StageFailure
/// or IoError; config problems are expected to be caught by parse_config.
RunReport run(const RunConfig &config);

/// Maps an exception from parse/run to the documented exit code.
int exit_code_for(const std::exception &e);

// Plot emitters. Each writes a standalone SVG file.

struct ScatterPoint
{
  double x = 0.0;
  double y = 0.0;
  double value = 0.0;  // coloured on a log10 scale when positive
};

void write_scatter_svg(const std::filesystem::path &path, const std::string &title,
                       const std::vector<ScatterPoint> &points, bool unit_circle);

struct LineSeries
{
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

void write_line_svg(const std::filesystem::path &path, const std::string &title,
                    const std::vector<LineSeries> &series, bool log_y = false);

/// Level-set polylines of a field sampled on a structured n1 x n2 grid whose
/// node (i, j) sits at (x(i, j), y(i, j)). `wrap` joins the last column to the
/// first (polar grids).
void write_contour_svg(const std::filesystem::path &path, const std::string &title,
                       const RealMatrix &x, const RealMatrix &y, const RealMatrix &field,
                       const std::vector<double> &levels, bool wrap, bool unit_circle);

}  // namespace koop::cli
