// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "koop/cli.hpp"

namespace koop::cli
{

namespace
{

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 60.0;

std::string f3(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string g4(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::string escape(const std::string &s)
{
  std::string out;
  for (char c : s)
  {
    switch (c)
    {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame
{
  double x0, x1, y0, y1;
  bool equal_aspect = false;

  double px(double x) const { return kMargin + (x - x0) / (x1 - x0) * (kWidth - 2 * kMargin); }
  double py(double y) const { return kHeight - kMargin - (y - y0) / (y1 - y0) * (kHeight - 2 * kMargin); }
};

Frame make_frame(double x0, double x1, double y0, double y1, bool equal_aspect)
{
  if (!(x1 > x0))
  {
    x0 -= 0.5;
    x1 += 0.5;
  }
  if (!(y1 > y0))
  {
    y0 -= 0.5;
    y1 += 0.5;
  }
  const double padx = 0.05 * (x1 - x0), pady = 0.05 * (y1 - y0);
  Frame f{x0 - padx, x1 + padx, y0 - pady, y1 + pady, equal_aspect};
  if (equal_aspect)
  {
    // Same data units per pixel on both axes so circles stay circular.
    const double sx = (f.x1 - f.x0) / (kWidth - 2 * kMargin);
    const double sy = (f.y1 - f.y0) / (kHeight - 2 * kMargin);
    const double s = std::max(sx, sy);
    const double cx = 0.5 * (f.x0 + f.x1), cy = 0.5 * (f.y0 + f.y1);
    f.x0 = cx - 0.5 * s * (kWidth - 2 * kMargin);
    f.x1 = cx + 0.5 * s * (kWidth - 2 * kMargin);
    f.y0 = cy - 0.5 * s * (kHeight - 2 * kMargin);
    f.y1 = cy + 0.5 * s * (kHeight - 2 * kMargin);
  }
  return f;
}

void header(std::ostream &out, const std::string &title)
{
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"16\">" << escape(title) << "</text>\n";
}

void axes(std::ostream &out, const Frame &f, bool log_y = false)
{
  out << "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n"
      << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kWidth - 2 * kMargin
      << "\" height=\"" << kHeight - 2 * kMargin << "\"/>\n</g>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int k = 0; k <= 4; ++k)
  {
    const double x = f.x0 + (f.x1 - f.x0) * k / 4.0;
    const double y = f.y0 + (f.y1 - f.y0) * k / 4.0;
    out << "<text x=\"" << f3(f.px(x)) << "\" y=\"" << kHeight - kMargin + 16
        << "\" text-anchor=\"middle\">" << g4(x) << "</text>\n";
    out << "<text x=\"" << kMargin - 6 << "\" y=\"" << f3(f.py(y) + 4)
        << "\" text-anchor=\"end\">" << (log_y ? "1e" + g4(y) : g4(y)) << "</text>\n";
  }
  out << "</g>\n";
}

void no_data(std::ostream &out)
{
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"18\" fill=\"gray\">no data</text>\n";
}

// Blue (low) to red (high).
std::string colour(double t)
{
  t = std::clamp(t, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(255 * t));
  const int b = static_cast<int>(std::lround(255 * (1 - t)));
  const int g = static_cast<int>(std::lround(80 * (1 - std::abs(2 * t - 1))));
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

void finish(std::ostringstream &out, const std::filesystem::path &path)
{
  out << "</svg>\n";
  std::ofstream file(path);
  file << out.str();
  if (!file)
  {
    throw IoError("cannot write " + path.string());
  }
}

}  // namespace

void write_scatter_svg(const std::filesystem::path &path, const std::string &title,
                       const std::vector<ScatterPoint> &points, bool unit_circle)
{
  std::ostringstream out;
  header(out, title);
  double x0 = unit_circle ? -1.0 : std::numeric_limits<double>::infinity();
  double x1 = unit_circle ? 1.0 : -std::numeric_limits<double>::infinity();
  double y0 = x0, y1 = x1;
  double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
  for (const auto &p : points)
  {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
    if (p.value > 0.0)
    {
      vmin = std::min(vmin, std::log10(p.value));
      vmax = std::max(vmax, std::log10(p.value));
    }
  }
  if (points.empty() && !unit_circle)
  {
    x0 = y0 = -1.0;
    x1 = y1 = 1.0;
  }
  const Frame f = make_frame(x0, x1, y0, y1, unit_circle);
  axes(out, f);
  if (unit_circle)
  {
    out << "<circle cx=\"" << f3(f.px(0)) << "\" cy=\"" << f3(f.py(0)) << "\" r=\""
        << f3(f.px(1) - f.px(0)) << "\" fill=\"none\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  }
  if (points.empty())
  {
    no_data(out);
  }
  for (const auto &p : points)
  {
    std::string fill = "black";
    if (p.value > 0.0 && vmax > vmin)
    {
      fill = colour((std::log10(p.value) - vmin) / (vmax - vmin));
    }
    else if (p.value > 0.0)
    {
      fill = colour(0.0);
    }
    out << "<circle cx=\"" << f3(f.px(p.x)) << "\" cy=\"" << f3(f.py(p.y)) << "\" r=\"3\" fill=\"" << fill
        << "\"/>\n";
  }
  if (vmax >= vmin)
  {
    out << "<text x=\"" << kWidth - kMargin << "\" y=\"" << kMargin - 8
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">log10 value: " << g4(vmin)
        << " (blue) to " << g4(vmax) << " (red)</text>\n";
  }
  finish(out, path);
}

void write_line_svg(const std::filesystem::path &path, const std::string &title,
                    const std::vector<LineSeries> &series, bool log_y)
{
  std::ostringstream out;
  header(out, title);
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  auto yval = [&](double y) { return log_y ? std::log10(y) : y; };
  std::size_t count = 0;
  for (const auto &s : series)
  {
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
    {
      if ((log_y && !(s.y[i] > 0.0)) || !std::isfinite(s.y[i]))
      {
        continue;
      }
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, yval(s.y[i]));
      y1 = std::max(y1, yval(s.y[i]));
      ++count;
    }
  }
  if (count == 0)
  {
    const Frame f = make_frame(0.0, 1.0, 0.0, 1.0, false);
    axes(out, f);
    no_data(out);
    finish(out, path);
    return;
  }
  const Frame f = make_frame(x0, x1, y0, y1, false);
  axes(out, f, log_y);
  const char *palette[] = {"#1f4e9c", "#c0392b", "#2e8b57", "#8e44ad"};
  for (std::size_t k = 0; k < series.size(); ++k)
  {
    const auto &s = series[k];
    out << "<path fill=\"none\" stroke=\"" << palette[k % 4] << "\" stroke-width=\"1.5\" d=\"";
    bool pen = false;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
    {
      if ((log_y && !(s.y[i] > 0.0)) || !std::isfinite(s.y[i]))
      {
        pen = false;
        continue;
      }
      out << (pen ? " L" : " M") << f3(f.px(s.x[i])) << ' ' << f3(f.py(yval(s.y[i])));
      pen = true;
    }
    out << "\"/>\n";
    out << "<text x=\"" << kWidth - kMargin - 4 << "\" y=\"" << kMargin + 14 + 14 * k
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << palette[k % 4]
        << "\">" << escape(s.label) << "</text>\n";
  }
  finish(out, path);
}

void write_contour_svg(const std::filesystem::path &path, const std::string &title, const RealMatrix &x,
                       const RealMatrix &y, const RealMatrix &field, const std::vector<double> &levels,
                       bool wrap, bool unit_circle)
{
  std::ostringstream out;
  header(out, title);
  if (field.size() == 0)
  {
    axes(out, make_frame(-1.0, 1.0, -1.0, 1.0, true));
    no_data(out);
    finish(out, path);
    return;
  }
  const Frame f = make_frame(std::min(x.minCoeff(), unit_circle ? -1.0 : x.minCoeff()),
                             std::max(x.maxCoeff(), unit_circle ? 1.0 : x.maxCoeff()),
                             std::min(y.minCoeff(), unit_circle ? -1.0 : y.minCoeff()),
                             std::max(y.maxCoeff(), unit_circle ? 1.0 : y.maxCoeff()), true);
  axes(out, f);
  if (unit_circle)
  {
    out << "<circle cx=\"" << f3(f.px(0)) << "\" cy=\"" << f3(f.py(0)) << "\" r=\""
        << f3(f.px(1) - f.px(0)) << "\" fill=\"none\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  }
  const Eigen::Index n1 = field.rows(), n2 = field.cols();
  const Eigen::Index cells2 = wrap ? n2 : n2 - 1;
  for (std::size_t li = 0; li < levels.size(); ++li)
  {
    const double level = levels[li];
    const double t = levels.size() > 1 ? static_cast<double>(li) / static_cast<double>(levels.size() - 1) : 0.0;
    out << "<path fill=\"none\" stroke=\"" << colour(t) << "\" stroke-width=\"1\" d=\"";
    // Marching squares: each cell contributes segments between edge crossings.
    for (Eigen::Index i = 0; i + 1 < n1; ++i)
    {
      for (Eigen::Index j = 0; j < cells2; ++j)
      {
        const Eigen::Index jn = (j + 1) % n2;
        const Eigen::Index ci[4] = {i, i, i + 1, i + 1};
        const Eigen::Index cj[4] = {j, jn, jn, j};
        std::vector<std::pair<double, double>> hits;
        for (int e = 0; e < 4; ++e)
        {
          const int a = e, b = (e + 1) % 4;
          const double va = field(ci[a], cj[a]) - level, vb = field(ci[b], cj[b]) - level;
          if ((va < 0.0) != (vb < 0.0))
          {
            const double s = va / (va - vb);
            hits.emplace_back(x(ci[a], cj[a]) + s * (x(ci[b], cj[b]) - x(ci[a], cj[a])),
                              y(ci[a], cj[a]) + s * (y(ci[b], cj[b]) - y(ci[a], cj[a])));
          }
        }
        for (std::size_t h = 0; h + 1 < hits.size(); h += 2)
        {
          out << " M" << f3(f.px(hits[h].first)) << ' ' << f3(f.py(hits[h].second)) << " L"
              << f3(f.px(hits[h + 1].first)) << ' ' << f3(f.py(hits[h + 1].second));
        }
      }
    }
    out << "\"/>\n";
    out << "<text x=\"" << kWidth - kMargin - 4 << "\" y=\"" << kMargin + 14 + 14 * li
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << colour(t)
        << "\">level " << g4(level) << "</text>\n";
  }
  finish(out, path);
}

}  // namespace koop::cli
