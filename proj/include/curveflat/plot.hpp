#pragma once

// Minimal deterministic SVG line plots.
//
// Data coordinates map to pixels as
//   px = margin_left + (x - x_min) / (x_max - x_min) * plot_width
//   py = margin_top + plot_height - (y - y_min) / (y_max - y_min) * plot_height
// where plot_width = width - margin_left - margin_right (likewise height) and
// the ranges span all series. A degenerate range is widened by 1 on each side.
// Coordinates are written with two decimals.

#include <string>
#include <vector>

namespace curveflat {

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotStyle {
  std::string title;
  std::string x_label = "Day_ID";
  std::string y_label;
  double width = 800;
  double height = 480;
  double margin_left = 80;
  double margin_right = 160;
  double margin_top = 40;
  double margin_bottom = 60;
  int ticks = 5;
};

struct PlotFrame {
  double x_min, x_max, y_min, y_max;
  double px(const PlotStyle& s, double x) const;
  double py(const PlotStyle& s, double y) const;
};

PlotFrame plot_frame(const std::vector<PlotSeries>& series);
std::string emit_plot(const std::vector<PlotSeries>& series, const PlotStyle& style);

}  // namespace curveflat
