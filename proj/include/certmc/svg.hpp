#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace certmc::svg {

// Fixed chart geometry; public so readers of the emitted files can map pixel
// coordinates back to data values.
inline constexpr double kWidth = 800.0;
inline constexpr double kHeight = 600.0;
inline constexpr double kMarginLeft = 80.0;
inline constexpr double kMarginRight = 30.0;
inline constexpr double kMarginTop = 40.0;
inline constexpr double kMarginBottom = 60.0;

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;  // drawn in the given order
};

// Pinned palette: the binomial interval methods always keep the same colors
// so every coverage figure reads the same way.
std::string_view series_color(std::string_view label, std::size_t index);

// Data-to-pixel maps for the ranges recorded in the svg root's data-* attributes.
double map_x(double value, double x_min, double x_max);
double map_y(double value, double y_min, double y_max);

// 800x600 line chart: white background, axes with min/max ticks, one polyline
// per series (a dot when a series has a single point) and a legend.  Output is
// deterministic: fixed float formatting, no timestamps.
std::string render_line_chart(std::span<const Series> series, std::string_view x_label,
                              std::string_view y_label);

void write_line_chart(std::span<const Series> series, std::string_view x_label,
                      std::string_view y_label, const std::filesystem::path& path);

}  // namespace certmc::svg
