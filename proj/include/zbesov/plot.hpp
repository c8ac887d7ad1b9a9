#pragma once

// Minimal SVG line plots. Presentational only; the CSV files are the data.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "zbesov/io.hpp"

namespace zbesov::plot {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct Axes {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool log_x = true;
  bool log_y = true;
};

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

/// Points with a nonpositive coordinate on a log axis are skipped.
inline std::string svg(const std::vector<Series>& series, const Axes& axes) {
  constexpr double W = 640, H = 420, L = 70, R = 20, T = 40, B = 50;
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  const auto tx = [&](double v) { return axes.log_x ? std::log10(v) : v; };
  const auto ty = [&](double v) { return axes.log_y ? std::log10(v) : v; };
  const auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!axes.log_x || x > 0) && (!axes.log_y || y > 0);
  };
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (usable(s.x[i], s.y[i])) {
        x0 = std::min(x0, tx(s.x[i]));
        x1 = std::max(x1, tx(s.x[i]));
        y0 = std::min(y0, ty(s.y[i]));
        y1 = std::max(y1, ty(s.y[i]));
      }
  if (!(x0 <= x1)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
  const auto px = [&](double v) { return L + (tx(v) - x0) / (x1 - x0) * (W - L - R); };
  const auto py = [&](double v) { return H - B - (ty(v) - y0) / (y1 - y0) * (H - T - B); };

  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<rect x=\"" + io::num(L) + "\" y=\"" + io::num(T) + "\" width=\"" + io::num(W - L - R) + "\" height=\"" +
         io::num(H - T - B) + "\" fill=\"none\" stroke=\"black\"/>\n";
  out += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" + escape(axes.title) + "</text>\n";
  out += "<text x=\"" + io::num(L + (W - L - R) / 2) + "\" y=\"" + io::num(H - 12) + "\" text-anchor=\"middle\">" +
         escape(axes.xlabel) + (axes.log_x ? " (log10)" : "") + "</text>\n";
  out += "<text x=\"16\" y=\"" + io::num(T + (H - T - B) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         io::num(T + (H - T - B) / 2) + ")\">" + escape(axes.ylabel) + (axes.log_y ? " (log10)" : "") + "</text>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = x0 + (x1 - x0) * t / 4, yv = y0 + (y1 - y0) * t / 4;
    const double gx = L + (W - L - R) * t / 4, gy = H - B - (H - T - B) * t / 4;
    out += "<text x=\"" + io::num(gx) + "\" y=\"" + io::num(H - B + 16) + "\" text-anchor=\"middle\">" +
           io::num(std::round(xv * 100) / 100) + "</text>\n";
    out += "<text x=\"" + io::num(L - 6) + "\" y=\"" + io::num(gy + 4) + "\" text-anchor=\"end\">" +
           io::num(std::round(yv * 100) / 100) + "</text>\n";
  }
  for (std::size_t s = 0; s < series.size(); ++s) {
    const std::string color = colors[s % 6];
    std::string pts;
    for (std::size_t i = 0; i < series[s].x.size(); ++i) {
      if (!usable(series[s].x[i], series[s].y[i])) continue;
      const double cx = px(series[s].x[i]), cy = py(series[s].y[i]);
      pts += io::num(std::round(cx * 10) / 10) + "," + io::num(std::round(cy * 10) / 10) + " ";
      out += "<circle cx=\"" + io::num(std::round(cx * 10) / 10) + "\" cy=\"" + io::num(std::round(cy * 10) / 10) +
             "\" r=\"3\" fill=\"" + color + "\"/>\n";
    }
    out += "<polyline fill=\"none\" stroke=\"" + color + "\" points=\"" + pts + "\"/>\n";
    out += "<text x=\"" + io::num(L + 10) + "\" y=\"" + io::num(T + 16 + 14 * s) + "\" fill=\"" + color + "\">" +
           escape(series[s].name) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace zbesov::plot
