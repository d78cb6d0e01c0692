#include "tweetsignal/svg_chart.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tweetsignal/error.hpp"
#include "tweetsignal/number_io.hpp"

namespace tweetsignal::svg {
namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string px(double v) { return format_fixed(v, kCoordinateDecimals); }

// Step of the form {1,2,5}*10^k giving roughly `target` intervals over span.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  double m = 10;
  if (r <= 1) m = 1;
  else if (r <= 2) m = 2;
  else if (r <= 5) m = 5;
  return m * mag;
}

std::string tick_label(double v, double step) {
  const int decimals = std::clamp(static_cast<int>(-std::floor(std::log10(step))), 0, 6);
  if (std::abs(v) < step * 1e-9) v = 0;
  return format_fixed(v, decimals);
}

}  // namespace

double Layout::x_px(std::size_t index) const {
  if (n_points <= 1) return left + plot_width() / 2;
  return left + plot_width() * static_cast<double>(index) / static_cast<double>(n_points - 1);
}

double Layout::y_px(double value) const {
  return top + plot_height() * (y_max - value) / (y_max - y_min);
}

double Layout::value_at(double y_pixel) const {
  return y_max - (y_pixel - top) * (y_max - y_min) / plot_height();
}

Layout layout_for(const LineChart& chart) {
  Layout l;
  l.n_points = chart.x_labels.size();
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& s : chart.series) {
    if (s.values.size() != l.n_points) {
      throw Error(ErrorCode::InvalidArgument, "series '" + s.name + "' has " + std::to_string(s.values.size()) +
                                                  " points, expected " + std::to_string(l.n_points));
    }
    for (double v : s.values) {
      if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "series '" + s.name + "' has a non-finite value");
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(lo <= hi)) {
    lo = 0;
    hi = 1;
  }
  if (hi - lo < 1e-9) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double step = nice_step(hi - lo, 5);
  l.y_min = std::floor(lo / step) * step;
  l.y_max = std::ceil(hi / step) * step;
  if (l.y_max <= l.y_min) l.y_max = l.y_min + step;
  return l;
}

std::string render(const LineChart& chart) {
  const Layout l = layout_for(chart);
  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(l.width) << "\" height=\"" << px(l.height)
    << "\" viewBox=\"0 0 " << px(l.width) << ' ' << px(l.height) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o << "<rect x=\"0\" y=\"0\" width=\"" << px(l.width) << "\" height=\"" << px(l.height) << "\" fill=\"white\"/>\n";
  o << "<text x=\"" << px(l.width / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
    << xml_escape(chart.title) << "</text>\n";

  const double x0 = l.left, x1 = l.left + l.plot_width();
  const double y0 = l.top, y1 = l.top + l.plot_height();

  // y grid and tick labels
  const double step = nice_step(l.y_max - l.y_min, 5);
  o << "<g class=\"y-axis\" stroke=\"#dddddd\">\n";
  for (double v = l.y_min; v <= l.y_max + step * 1e-6; v += step) {
    const double y = l.y_px(v);
    o << "<line x1=\"" << px(x0) << "\" y1=\"" << px(y) << "\" x2=\"" << px(x1) << "\" y2=\"" << px(y) << "\"/>\n";
    o << "<text x=\"" << px(x0 - 6) << "\" y=\"" << px(y + 4) << "\" text-anchor=\"end\" stroke=\"none\" fill=\"#333333\">"
      << tick_label(v, step) << "</text>\n";
  }
  o << "</g>\n";

  // x tick labels, at most about ten
  o << "<g class=\"x-axis\" fill=\"#333333\">\n";
  if (l.n_points > 0) {
    const std::size_t every = std::max<std::size_t>(1, (l.n_points + 9) / 10);
    for (std::size_t i = 0; i < l.n_points; i += every) {
      const double x = l.x_px(i);
      o << "<line x1=\"" << px(x) << "\" y1=\"" << px(y1) << "\" x2=\"" << px(x) << "\" y2=\"" << px(y1 + 4)
        << "\" stroke=\"#333333\"/>\n";
      o << "<text transform=\"translate(" << px(x) << ',' << px(y1 + 14) << ") rotate(30)\">"
        << xml_escape(chart.x_labels[i]) << "</text>\n";
    }
  }
  o << "</g>\n";

  o << "<rect x=\"" << px(x0) << "\" y=\"" << px(y0) << "\" width=\"" << px(l.plot_width()) << "\" height=\""
    << px(l.plot_height()) << "\" fill=\"none\" stroke=\"#333333\"/>\n";
  o << "<text transform=\"translate(16," << px((y0 + y1) / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
    << xml_escape(chart.y_label) << "</text>\n";

  for (const auto& s : chart.series) {
    o << "<polyline class=\"series\" data-name=\"" << xml_escape(s.name) << "\" fill=\"none\" stroke=\""
      << xml_escape(s.color) << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      if (i) o << ' ';
      o << px(l.x_px(i)) << ',' << px(l.y_px(s.values[i]));
    }
    o << "\"/>\n";
  }

  o << "<g class=\"legend\">\n";
  for (std::size_t k = 0; k < chart.series.size(); ++k) {
    const double y = y0 + 12 + 18 * static_cast<double>(k);
    o << "<line x1=\"" << px(x1 + 12) << "\" y1=\"" << px(y) << "\" x2=\"" << px(x1 + 36) << "\" y2=\"" << px(y)
      << "\" stroke=\"" << xml_escape(chart.series[k].color) << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << px(x1 + 42) << "\" y=\"" << px(y + 4) << "\">" << xml_escape(chart.series[k].name)
      << "</text>\n";
  }
  o << "</g>\n</svg>\n";
  return o.str();
}

}  // namespace tweetsignal::svg
