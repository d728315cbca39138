#include "certmc/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace certmc::svg {
namespace {

struct Range {
  double min = 0.0;
  double max = 0.0;
};

std::string px(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f", v);
  return buffer;
}

std::string tick_label(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.6g", v);
  return buffer;
}

std::string exact(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

// Pads a degenerate range so the mapping below never divides by zero.
Range widen(Range r) {
  if (r.min == r.max) {
    const double pad = r.min == 0.0 ? 0.5 : std::fabs(r.min) * 0.05;
    r.min -= pad;
    r.max += pad;
  }
  return r;
}

}  // namespace

std::string_view series_color(std::string_view label, std::size_t index) {
  // Prefix match so decorated labels ("hoeffding k=10 alpha=0.1") keep the
  // method's pinned color.
  if (label.starts_with("hoeffding")) return "red";
  if (label.starts_with("clopper_pearson")) return "black";
  if (label.starts_with("jeffreys")) return "blue";
  static constexpr std::string_view kPalette[] = {"green",  "orange", "purple",
                                                  "brown",  "teal",   "magenta"};
  return kPalette[index % std::size(kPalette)];
}

double map_x(double value, double x_min, double x_max) {
  const double span = x_max - x_min;
  return kMarginLeft + (value - x_min) / span * (kWidth - kMarginLeft - kMarginRight);
}

double map_y(double value, double y_min, double y_max) {
  const double span = y_max - y_min;
  return kMarginTop + (y_max - value) / span * (kHeight - kMarginTop - kMarginBottom);
}

std::string render_line_chart(std::span<const Series> series, std::string_view x_label,
                              std::string_view y_label) {
  if (series.empty()) throw std::invalid_argument("render_line_chart: no series");
  Range xr{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  Range yr = xr;
  std::size_t total_points = 0;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      xr.min = std::min(xr.min, x);
      xr.max = std::max(xr.max, x);
      yr.min = std::min(yr.min, y);
      yr.max = std::max(yr.max, y);
      ++total_points;
    }
  }
  if (total_points == 0) throw std::invalid_argument("render_line_chart: no points");
  xr = widen(xr);
  yr = widen(yr);

  const double plot_left = kMarginLeft;
  const double plot_right = kWidth - kMarginRight;
  const double plot_top = kMarginTop;
  const double plot_bottom = kHeight - kMarginBottom;

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
         "viewBox=\"0 0 800 600\" data-x-min=\"" << exact(xr.min) << "\" data-x-max=\""
      << exact(xr.max) << "\" data-y-min=\"" << exact(yr.min) << "\" data-y-max=\""
      << exact(yr.max) << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";

  // Axes.
  out << "<line x1=\"" << px(plot_left) << "\" y1=\"" << px(plot_bottom) << "\" x2=\""
      << px(plot_right) << "\" y2=\"" << px(plot_bottom)
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out << "<line x1=\"" << px(plot_left) << "\" y1=\"" << px(plot_top) << "\" x2=\""
      << px(plot_left) << "\" y2=\"" << px(plot_bottom)
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";

  // Min/max ticks on both axes.
  struct Tick {
    double value;
    bool on_x;
  };
  const Tick ticks[4] = {{xr.min, true}, {xr.max, true}, {yr.min, false}, {yr.max, false}};
  for (const auto& t : ticks) {
    if (t.on_x) {
      const double x = map_x(t.value, xr.min, xr.max);
      out << "<line x1=\"" << px(x) << "\" y1=\"" << px(plot_bottom) << "\" x2=\"" << px(x)
          << "\" y2=\"" << px(plot_bottom + 6.0) << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
      out << "<text class=\"xtick\" x=\"" << px(x) << "\" y=\"" << px(plot_bottom + 20.0)
          << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">"
          << tick_label(t.value) << "</text>\n";
    } else {
      const double y = map_y(t.value, yr.min, yr.max);
      out << "<line x1=\"" << px(plot_left - 6.0) << "\" y1=\"" << px(y) << "\" x2=\""
          << px(plot_left) << "\" y2=\"" << px(y) << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
      out << "<text class=\"ytick\" x=\"" << px(plot_left - 10.0) << "\" y=\"" << px(y + 4.0)
          << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">"
          << tick_label(t.value) << "</text>\n";
    }
  }

  // Axis labels.
  out << "<text x=\"" << px(0.5 * (plot_left + plot_right)) << "\" y=\"" << px(kHeight - 15.0)
      << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">" << x_label
      << "</text>\n";
  out << "<text x=\"20\" y=\"" << px(0.5 * (plot_top + plot_bottom))
      << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 20 "
      << px(0.5 * (plot_top + plot_bottom)) << ")\">" << y_label << "</text>\n";

  // Series.
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const auto color = series_color(s.label, i);
    if (s.points.size() == 1) {
      const auto& [x, y] = s.points.front();
      out << "<circle class=\"series\" data-label=\"" << s.label << "\" cx=\""
          << px(map_x(x, xr.min, xr.max)) << "\" cy=\"" << px(map_y(y, yr.min, yr.max))
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
      continue;
    }
    if (s.points.empty()) continue;
    out << "<polyline class=\"series\" data-label=\"" << s.label
        << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t j = 0; j < s.points.size(); ++j) {
      if (j > 0) out << ' ';
      out << px(map_x(s.points[j].first, xr.min, xr.max)) << ','
          << px(map_y(s.points[j].second, yr.min, yr.max));
    }
    out << "\"/>\n";
  }

  // Legend, top-right corner of the plot area.
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto color = series_color(series[i].label, i);
    const double y = plot_top + 14.0 + 18.0 * static_cast<double>(i);
    const double x0 = plot_right - 150.0;
    out << "<line x1=\"" << px(x0) << "\" y1=\"" << px(y - 4.0) << "\" x2=\"" << px(x0 + 24.0)
        << "\" y2=\"" << px(y - 4.0) << "\" stroke=\"" << color
        << "\" stroke-width=\"1.5\"/>\n";
    out << "<text class=\"legend\" x=\"" << px(x0 + 30.0) << "\" y=\"" << px(y)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << series[i].label << "</text>\n";
  }

  out << "</svg>\n";
  return out.str();
}

void write_line_chart(std::span<const Series> series, std::string_view x_label,
                      std::string_view y_label, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << render_line_chart(series, x_label, y_label);
}

}  // namespace certmc::svg
