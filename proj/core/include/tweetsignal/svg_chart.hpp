#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace tweetsignal::svg {

struct Series {
  std::string name;
  std::string color;  ///< any SVG color
  std::vector<double> values;
};

struct LineChart {
  std::string title;
  std::string y_label;
  std::vector<std::string> x_labels;  ///< one per point; every series has this length
  std::vector<Series> series;
};

/// Pixel mapping used when drawing a chart. Exposed so callers can recover
/// data values from emitted coordinates.
struct Layout {
  double width = 900;
  double height = 420;
  double left = 70;
  double right = 150;
  double top = 40;
  double bottom = 70;
  double y_min = 0;
  double y_max = 1;
  std::size_t n_points = 0;

  double plot_width() const { return width - left - right; }
  double plot_height() const { return height - top - bottom; }
  double x_px(std::size_t index) const;
  double y_px(double value) const;
  double value_at(double y_pixel) const;
};

/// Throws Error(InvalidArgument) for ragged or non-finite series.
Layout layout_for(const LineChart& chart);

/// Standalone SVG document: axes, tick labels, legend and one
/// `<polyline class="series" data-name="...">` per series.
std::string render(const LineChart& chart);

/// Number of decimals used for polyline coordinates.
inline constexpr int kCoordinateDecimals = 3;

}  // namespace tweetsignal::svg
