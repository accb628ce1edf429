#include "ipds/svg.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ipds/errors.hpp"
#include "ipds/metrics.hpp"

namespace ipds {

namespace {

double column_value(const RunRow& r, const std::string& col) {
  if (col == "f_gap") return r.f_gap;
  if (col == "consensus_gap") return r.consensus_gap;
  if (col == "samples") return static_cast<double>(r.samples);
  if (col == "lo_calls") return static_cast<double>(r.lo_calls);
  if (col == "comm_rounds") return static_cast<double>(r.comm_rounds);
  if (col == "wall_ms") return r.wall_ms;
  throw InputError("emit_svg_plot: unknown column '" + col + "'");
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

double svg_map_x(double x, double x_min, double x_max, double px_lo, double px_hi) {
  if (x_max <= x_min) return 0.5 * (px_lo + px_hi);
  return px_lo + (x - x_min) / (x_max - x_min) * (px_hi - px_lo);
}

double svg_map_y_log(double y, double log_min, double log_max, double px_top, double px_bottom) {
  double ly = std::log10(y);
  if (log_max <= log_min) return 0.5 * (px_top + px_bottom);
  return px_bottom - (ly - log_min) / (log_max - log_min) * (px_bottom - px_top);
}

void emit_svg_plot(const std::vector<std::string>& csv_paths, const std::string& y_column,
                   const std::string& out_path) {
  if (csv_paths.empty()) throw InputError("emit_svg_plot: no CSV inputs");

  struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;  // (k, y), y > 0 only
  };
  std::vector<Series> series;
  double x_min = HUGE_VAL, x_max = -HUGE_VAL, y_min = HUGE_VAL, y_max = -HUGE_VAL;
  for (const auto& path : csv_paths) {
    RunRecord rec = read_csv(path);
    Series s;
    s.name = std::filesystem::path(path).stem().string();
    for (const auto& row : rec.rows) {
      double y = column_value(row, y_column);
      if (!(y > 0.0)) continue;  // log scale drops non-positive values
      s.points.emplace_back(static_cast<double>(row.k), y);
      x_min = std::min(x_min, static_cast<double>(row.k));
      x_max = std::max(x_max, static_cast<double>(row.k));
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
    series.push_back(std::move(s));
  }
  if (!(y_min <= y_max)) throw DataError("emit_svg_plot: no positive values to plot");

  const double W = 880, H = 560, L = 70, Rm = 170, T = 30, B = 50;
  const double log_min = std::floor(std::log10(y_min));
  const double log_max = std::ceil(std::log10(y_max) + (y_min == y_max ? 1.0 : 0.0));

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
      << " " << H << "\">\n";
  out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  out << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << (W - L - Rm) << "\" height=\"" << (H - T - B)
      << "\" fill=\"none\" stroke=\"#333\"/>\n";

  // decade gridlines + labels
  for (int e = static_cast<int>(log_min); e <= static_cast<int>(log_max); ++e) {
    double py = svg_map_y_log(std::pow(10.0, e), log_min, log_max, T, H - B);
    out << "<line x1=\"" << L << "\" y1=\"" << py << "\" x2=\"" << (W - Rm) << "\" y2=\"" << py
        << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << (L - 8) << "\" y=\"" << (py + 4) << "\" text-anchor=\"end\" font-size=\"12\">1e" << e
        << "</text>\n";
  }
  // x ticks
  for (int i = 0; i <= 5; ++i) {
    double xv = x_min + (x_max - x_min) * i / 5.0;
    double px = svg_map_x(xv, x_min, x_max, L, W - Rm);
    out << "<line x1=\"" << px << "\" y1=\"" << (H - B) << "\" x2=\"" << px << "\" y2=\"" << (H - B + 5)
        << "\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << px << "\" y=\"" << (H - B + 20) << "\" text-anchor=\"middle\" font-size=\"12\">"
        << static_cast<long>(std::lround(xv)) << "</text>\n";
  }
  out << "<text x=\"" << (L + (W - L - Rm) / 2) << "\" y=\"" << (H - 12)
      << "\" text-anchor=\"middle\" font-size=\"13\">k</text>\n";
  out << "<text x=\"18\" y=\"" << (T + (H - T - B) / 2) << "\" font-size=\"13\" transform=\"rotate(-90 18 "
      << (T + (H - T - B) / 2) << ")\" text-anchor=\"middle\">" << y_column << "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" points=\"";
    for (auto [x, y] : series[si].points)
      out << svg_map_x(x, x_min, x_max, L, W - Rm) << "," << svg_map_y_log(y, log_min, log_max, T, H - B) << " ";
    out << "\"/>\n";
    double ly = T + 16 + 18.0 * si;
    out << "<line x1=\"" << (W - Rm + 10) << "\" y1=\"" << ly << "\" x2=\"" << (W - Rm + 34) << "\" y2=\"" << ly
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << (W - Rm + 40) << "\" y=\"" << (ly + 4) << "\" font-size=\"12\">" << series[si].name
        << "</text>\n";
  }
  out << "</svg>\n";

  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw DataError("emit_svg_plot: cannot open " + out_path);
  file << out.str();
  if (!file) throw DataError("emit_svg_plot: write failed for " + out_path);
}

}  // namespace ipds
