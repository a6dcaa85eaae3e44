#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fermibag/cli.hpp"

namespace fermibag::cli::detail {

/// One CSV cell: empty, an integer label or a floating-point value.
using Cell = std::variant<std::monostate, long, double>;

inline Cell cell(const std::optional<double>& v) { return v ? Cell(*v) : Cell(); }

/// CSV table with a `#` metadata line, a header and numeric rows.
struct CsvTable {
  std::string metadata;
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

std::string render_csv(const CsvTable& table);
void write_text(const std::filesystem::path& path, const std::string& text);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal line plot; points with non-finite y are skipped.
std::string render_svg(const std::string& title, const std::string& x_label,
                       const std::vector<PlotSeries>& series);

}  // namespace fermibag::cli::detail
