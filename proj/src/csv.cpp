// SPDX-License-Identifier: Apache-2.0

#include "koop/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace koop
{

namespace
{

std::string trim(const std::string &s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
  {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string &tok, const std::filesystem::path &path, std::size_t line)
{
  const std::string t = trim(tok);
  // strtod accepts "nan"/"inf" spellings; those are rejected below.
  char *end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v))
  {
    throw ContractViolation(path.string() + ":" + std::to_string(line) +
                            ": not a finite number: '" + t + "'");
  }
  return v;
}

}  // namespace

RealMatrix read_csv_matrix(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw IoError("cannot open " + path.string());
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line))
  {
    ++lineno;
    if (trim(line).empty())
    {
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ','))
    {
      row.push_back(parse_number(tok, path, lineno));
    }
    if (!rows.empty() && row.size() != rows.front().size())
    {
      throw ContractViolation(path.string() + ":" + std::to_string(lineno) +
                              ": inconsistent column count");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty())
  {
    throw ContractViolation(path.string() + ": no data rows");
  }
  RealMatrix M(static_cast<Eigen::Index>(rows.size()),
               static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
  {
    for (std::size_t j = 0; j < rows[i].size(); ++j)
    {
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return M;
}

std::string format_number(double v)
{
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  (void)ec;
  return std::string(buf, ptr);
}

void write_csv_matrix(const std::filesystem::path &path, const RealMatrix &M,
                      const std::vector<std::string> &header)
{
  std::ofstream out(path);
  if (!out)
  {
    throw IoError("cannot write " + path.string());
  }
  if (!header.empty())
  {
    for (std::size_t j = 0; j < header.size(); ++j)
    {
      out << (j ? "," : "") << header[j];
    }
    out << '\n';
  }
  for (Eigen::Index i = 0; i < M.rows(); ++i)
  {
    for (Eigen::Index j = 0; j < M.cols(); ++j)
    {
      out << (j ? "," : "") << format_number(M(i, j));
    }
    out << '\n';
  }
  if (!out)
  {
    throw IoError("write failed: " + path.string());
  }
}

SnapshotSet load_snapshot_dir(const std::filesystem::path &dir)
{
  SnapshotSet s;
  s.X = read_csv_matrix(dir / "X.csv");
  s.Y = read_csv_matrix(dir / "Y.csv");
  if (std::filesystem::exists(dir / "weights.csv"))
  {
    const RealMatrix w = read_csv_matrix(dir / "weights.csv");
    KOOP_REQUIRE(w.cols() == 1, "weights.csv must have a single column");
    s.weights = w.col(0);
  }
  else
  {
    s.weights = RealVector::Constant(s.X.rows(), 1.0 / static_cast<double>(s.X.rows()));
  }
  s.validate();
  return s;
}

void save_snapshot_dir(const std::filesystem::path &dir, const SnapshotSet &data)
{
  std::filesystem::create_directories(dir);
  write_csv_matrix(dir / "X.csv", data.X);
  write_csv_matrix(dir / "Y.csv", data.Y);
  write_csv_matrix(dir / "weights.csv", data.weights);
}

}  // namespace koop
