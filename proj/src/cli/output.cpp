#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "fermibag/errors.hpp"

namespace fermibag::cli {

std::string format_double(double value) {
  if (value == 0.0) value = 0.0;  // no "-0"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", value);
  return buf;
}

namespace detail {

std::string render_csv(const CsvTable& table) {
  std::string out = "# " + table.metadata + "\n";
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    out += (i ? "," : "") + table.header[i];
  }
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      if (const auto* n = std::get_if<long>(&row[i])) out += std::to_string(*n);
      if (const auto* x = std::get_if<double>(&row[i])) out += format_double(*x);
    }
    out += "\n";
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::string render_svg(const std::string& title, const std::string& x_label,
                       const std::vector<PlotSeries>& series) {
  constexpr double width = 640.0, height = 420.0;
  constexpr double left = 60.0, right = 140.0, top = 40.0, bottom = 50.0;
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = 0.0, y_hi = 0.0;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      x_lo = std::min(x_lo, s.x[i]);
      x_hi = std::max(x_hi, s.x[i]);
      y_lo = std::min(y_lo, s.y[i]);
      y_hi = std::max(y_hi, s.y[i]);
    }
  }
  if (!(x_hi > x_lo)) x_hi = x_lo + 1.0;
  if (!(y_hi > y_lo)) y_hi = y_lo + 1.0;
  auto px = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * (width - left - right); };
  auto py = [&](double y) {
    return height - bottom - (y - y_lo) / (y_hi - y_lo) * (height - top - bottom);
  };

  std::ostringstream svg;
  svg.precision(6);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << left << "\" y=\"24\" font-size=\"14\">" << title << "</text>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << py(y_lo) << "\" x2=\"" << width - right
      << "\" y2=\"" << py(y_lo) << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << py(y_lo) << "\" x2=\"" << left << "\" y2=\""
      << py(y_hi) << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x_lo + (x_hi - x_lo) * i / 4.0;
    const double yv = y_lo + (y_hi - y_lo) * i / 4.0;
    svg << "<text x=\"" << px(xv) << "\" y=\"" << height - bottom + 16
        << "\" text-anchor=\"middle\">" << xv << "</text>\n";
    svg << "<text x=\"" << left - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << yv
        << "</text>\n";
  }
  svg << "<text x=\"" << (left + width - right) / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\">" << x_label << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = colors[k % std::size(colors)];
    std::ostringstream points;
    points.precision(6);
    std::size_t count = 0;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      points << (count++ ? " " : "") << px(s.x[i]) << "," << py(s.y[i]);
    }
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\""
        << points.str() << "\"/>\n";
    svg << "<text x=\"" << width - right + 10 << "\" y=\"" << top + 18 * (k + 1) << "\" fill=\""
        << color << "\">" << s.label << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace detail
}  // namespace fermibag::cli
