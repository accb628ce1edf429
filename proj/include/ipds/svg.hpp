#pragma once

#include <string>
#include <vector>

namespace ipds {

// Log-scale-y line chart over the shared run-record CSV schema: one polyline
// per input file, legend from the file stems, self-contained SVG output.
void emit_svg_plot(const std::vector<std::string>& csv_paths, const std::string& y_column, const std::string& out_path);

// Pixel mapping helpers, exposed for tests.
double svg_map_x(double x, double x_min, double x_max, double px_lo, double px_hi);
double svg_map_y_log(double y, double log_min, double log_max, double px_top, double px_bottom);

}  // namespace ipds
