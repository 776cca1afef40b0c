#include "curveflat/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

#include "curveflat/error.hpp"

namespace curveflat {

namespace {

constexpr std::array<const char*, 6> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

double PlotFrame::px(const PlotStyle& s, double x) const {
  const double w = s.width - s.margin_left - s.margin_right;
  return s.margin_left + (x - x_min) / (x_max - x_min) * w;
}

double PlotFrame::py(const PlotStyle& s, double y) const {
  const double h = s.height - s.margin_top - s.margin_bottom;
  return s.margin_top + h - (y - y_min) / (y_max - y_min) * h;
}

PlotFrame plot_frame(const std::vector<PlotSeries>& series) {
  if (series.empty()) throw Error("cli", "plot needs at least one series");
  PlotFrame f{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
              std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw Error("cli", "series '" + s.name + "' has mismatched x/y lengths");
    if (s.x.size() < 2) throw Error("cli", "series '" + s.name + "' needs at least two points");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        throw Error("cli", "series '" + s.name + "' has a non-finite point");
      }
      f.x_min = std::min(f.x_min, s.x[i]);
      f.x_max = std::max(f.x_max, s.x[i]);
      f.y_min = std::min(f.y_min, s.y[i]);
      f.y_max = std::max(f.y_max, s.y[i]);
    }
  }
  if (f.x_max == f.x_min) {
    f.x_min -= 1;
    f.x_max += 1;
  }
  if (f.y_max == f.y_min) {
    f.y_min -= 1;
    f.y_max += 1;
  }
  return f;
}

std::string emit_plot(const std::vector<PlotSeries>& series, const PlotStyle& style) {
  const PlotFrame f = plot_frame(series);
  const double left = style.margin_left;
  const double right = style.width - style.margin_right;
  const double top = style.margin_top;
  const double bottom = style.height - style.margin_bottom;

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(style.width) + "\" height=\"" +
         fmt(style.height) + "\" viewBox=\"0 0 " + fmt(style.width) + " " + fmt(style.height) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + fmt(style.width) + "\" height=\"" + fmt(style.height) +
         "\" fill=\"white\"/>\n";
  if (!style.title.empty()) {
    svg += "<text x=\"" + fmt(style.width / 2) + "\" y=\"" + fmt(top / 2 + 6) +
           "\" text-anchor=\"middle\" font-size=\"15\">" + escape(style.title) + "</text>\n";
  }

  // axes
  svg += "<g stroke=\"black\" stroke-width=\"1\">\n";
  svg += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(bottom) + "\" x2=\"" + fmt(right) + "\" y2=\"" + fmt(bottom) +
         "\"/>\n";
  svg += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(top) + "\" x2=\"" + fmt(left) + "\" y2=\"" + fmt(bottom) +
         "\"/>\n";
  svg += "</g>\n<g fill=\"black\">\n";
  const int ticks = std::max(style.ticks, 1);
  for (int i = 0; i <= ticks; ++i) {
    const double xv = f.x_min + (f.x_max - f.x_min) * i / ticks;
    const double yv = f.y_min + (f.y_max - f.y_min) * i / ticks;
    const double px = f.px(style, xv);
    const double py = f.py(style, yv);
    svg += "<line x1=\"" + fmt(px) + "\" y1=\"" + fmt(bottom) + "\" x2=\"" + fmt(px) + "\" y2=\"" +
           fmt(bottom + 5) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt(px) + "\" y=\"" + fmt(bottom + 18) + "\" text-anchor=\"middle\">" + label(xv) +
           "</text>\n";
    svg += "<line x1=\"" + fmt(left - 5) + "\" y1=\"" + fmt(py) + "\" x2=\"" + fmt(left) + "\" y2=\"" + fmt(py) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt(left - 8) + "\" y=\"" + fmt(py + 4) + "\" text-anchor=\"end\">" + label(yv) +
           "</text>\n";
  }
  svg += "<text x=\"" + fmt((left + right) / 2) + "\" y=\"" + fmt(style.height - 15) +
         "\" text-anchor=\"middle\">" + escape(style.x_label) + "</text>\n";
  svg += "<text x=\"18\" y=\"" + fmt((top + bottom) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         fmt((top + bottom) / 2) + ")\">" + escape(style.y_label) + "</text>\n";
  svg += "</g>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kPalette[k % kPalette.size()];
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      svg += (i ? " " : "") + fmt(f.px(style, s.x[i])) + "," + fmt(f.py(style, s.y[i]));
    }
    svg += "\"/>\n";
  }

  // legend
  for (std::size_t k = 0; k < series.size(); ++k) {
    const double ly = top + 10 + 20 * static_cast<double>(k);
    svg += "<rect x=\"" + fmt(right + 15) + "\" y=\"" + fmt(ly - 8) + "\" width=\"14\" height=\"4\" fill=\"" +
           std::string(kPalette[k % kPalette.size()]) + "\"/>\n";
    svg += "<text x=\"" + fmt(right + 35) + "\" y=\"" + fmt(ly - 2) + "\">" + escape(series[k].name) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace curveflat
