// Copyright (c) 2026, the optoring authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "optoring/errors.hpp"

namespace optoring {

/// 12 significant digits, C-locale formatting (the tool never installs a
/// locale, so the decimal point is stable and outputs are byte-identical
/// across runs and thread counts).
inline std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open output file " + path);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  out << content;
}

namespace detail {

struct SvgCanvas {
  std::string body;
  int width = 760;
  int height = 560;
  double ml = 80, mr = 30, mt = 50, mb = 60;

  double px(double t) const { return ml + t * (width - ml - mr); }
  double py(double t) const { return height - mb - t * (height - mt - mb); }

  void text(double x, double y, const std::string& s, int size, const char* anchor,
            const char* extra = "") {
    body += "<text x=\"" + fmt12(x) + "\" y=\"" + fmt12(y) + "\" font-size=\"" +
            std::to_string(size) + "\" font-family=\"sans-serif\" text-anchor=\"" + anchor +
            "\" " + extra + ">" + s + "</text>\n";
  }

  std::string finish(const std::string& title, const std::string& xlabel,
                     const std::string& ylabel) {
    std::string head = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                       std::to_string(width) + "\" height=\"" + std::to_string(height) +
                       "\" viewBox=\"0 0 " + std::to_string(width) + " " +
                       std::to_string(height) + "\">\n<rect width=\"100%\" height=\"100%\" "
                       "fill=\"white\"/>\n";
    text(width / 2.0, 26, title, 16, "middle");
    text((ml + width - mr) / 2.0, height - 14, xlabel, 13, "middle");
    text(20, (mt + height - mb) / 2.0, ylabel, 13, "middle",
         ("transform=\"rotate(-90 20 " + fmt12((mt + height - mb) / 2.0) + ")\"").c_str());
    return head + body + "</svg>\n";
  }
};

inline std::vector<double> nice_ticks(double lo, double hi, int target = 5) {
  std::vector<double> t;
  if (!(hi > lo)) {
    t.push_back(lo);
    return t;
  }
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * m >= raw) {
      step = mag * m;
      break;
    }
  }
  const double start = std::ceil(lo / step) * step;
  for (double v = start; v <= hi + 0.5 * step; v += step) t.push_back(v);
  return t;
}

inline std::string heat_color(double t) {
  // Diverging map: blue (-1) through white (0) to red (+1).
  auto channel = [](double a, double b, double x) {
    return std::to_string(static_cast<int>(std::lround(a + (b - a) * x)));
  };
  if (t < 0.0) {
    const double x = std::min(1.0, -t);
    return "rgb(" + channel(255, 0, x) + "," + channel(255, 84, x) + "," + channel(255, 159, x) +
           ")";
  }
  const double x = std::min(1.0, t);
  return "rgb(" + channel(255, 190, x) + "," + channel(255, 30, x) + "," + channel(255, 45, x) +
         ")";
}

}  // namespace detail

/// Presentation-only heatmap. values(iy, ix) maps row iy to ys[iy]; NaN
/// cells (refused points) render grey. Returns false instead of throwing:
/// plots must never take a run down.
inline bool svg_heatmap(const std::string& path, const std::string& title,
                        const std::string& xlabel, const std::string& ylabel,
                        const std::vector<double>& xs, const std::vector<double>& ys,
                        const std::vector<std::vector<double>>& values) try {
  detail::SvgCanvas cv;
  const std::size_t nx = xs.size(), ny = ys.size();
  if (nx == 0 || ny == 0 || values.size() != ny) return false;
  double vmax = 0.0;
  for (const auto& row : values)
    for (double v : row)
      if (std::isfinite(v)) vmax = std::max(vmax, std::abs(v));
  if (vmax == 0.0) vmax = 1.0;

  for (std::size_t iy = 0; iy < ny; ++iy) {
    if (values[iy].size() != nx) return false;
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const double x0 = cv.px(static_cast<double>(ix) / nx);
      const double x1 = cv.px(static_cast<double>(ix + 1) / nx);
      const double y0 = cv.py(static_cast<double>(iy + 1) / ny);
      const double y1 = cv.py(static_cast<double>(iy) / ny);
      const double v = values[iy][ix];
      const std::string fill = std::isfinite(v) ? detail::heat_color(v / vmax) : "rgb(160,160,160)";
      cv.body += "<rect x=\"" + fmt12(x0) + "\" y=\"" + fmt12(y0) + "\" width=\"" +
                 fmt12(x1 - x0) + "\" height=\"" + fmt12(y1 - y0) + "\" fill=\"" + fill +
                 "\"/>\n";
    }
  }
  for (std::size_t ix = 0; ix < nx; ++ix) {
    if (nx > 12 && ix % (nx / 6 + 1) != 0) continue;
    const double x = cv.px((ix + 0.5) / nx);
    cv.text(x, cv.height - cv.mb + 18, fmt12(xs[ix]), 11, "middle");
  }
  for (std::size_t iy = 0; iy < ny; ++iy) {
    if (ny > 12 && iy % (ny / 6 + 1) != 0) continue;
    const double y = cv.py((iy + 0.5) / ny);
    cv.text(cv.ml - 8, y + 4, fmt12(ys[iy]), 11, "end");
  }
  cv.text(cv.width - cv.mr, 26, "max |value| = " + fmt12(vmax), 11, "end");
  write_text_file(path, cv.finish(title, xlabel, ylabel));
  return true;
} catch (...) {
  return false;
}

/// Presentation-only line chart for one or more series over a shared x
/// grid. NaN samples break the polyline. Returns false on any failure.
inline bool svg_lines(const std::string& path, const std::string& title,
                      const std::string& xlabel, const std::string& ylabel,
                      const std::vector<double>& xs,
                      const std::vector<std::pair<std::string, std::vector<double>>>& series) try {
  detail::SvgCanvas cv;
  if (xs.empty() || series.empty()) return false;
  double xlo = xs.front(), xhi = xs.back();
  if (!(xhi > xlo)) xhi = xlo + 1.0;
  double ylo = std::numeric_limits<double>::infinity(), yhi = -ylo;
  for (const auto& s : series)
    for (double v : s.second)
      if (std::isfinite(v)) {
        ylo = std::min(ylo, v);
        yhi = std::max(yhi, v);
      }
  if (!(yhi > ylo)) {
    ylo -= 1.0;
    yhi += 1.0;
  }
  const double pad = 0.05 * (yhi - ylo);
  ylo -= pad;
  yhi += pad;

  static const char* palette[] = {"#00549f", "#be1e2d", "#2e8540", "#b8860b", "#6a3d9a"};
  auto tx = [&](double x) { return cv.px((x - xlo) / (xhi - xlo)); };
  auto ty = [&](double y) { return cv.py((y - ylo) / (yhi - ylo)); };

  for (double t : detail::nice_ticks(xlo, xhi)) {
    cv.body += "<line x1=\"" + fmt12(tx(t)) + "\" y1=\"" + fmt12(cv.py(0.0)) + "\" x2=\"" +
               fmt12(tx(t)) + "\" y2=\"" + fmt12(cv.py(0.0) + 5) + "\" stroke=\"black\"/>\n";
    cv.text(tx(t), cv.height - cv.mb + 20, fmt12(t), 11, "middle");
  }
  for (double t : detail::nice_ticks(ylo, yhi)) {
    cv.body += "<line x1=\"" + fmt12(cv.ml - 5) + "\" y1=\"" + fmt12(ty(t)) + "\" x2=\"" +
               fmt12(cv.ml) + "\" y2=\"" + fmt12(ty(t)) + "\" stroke=\"black\"/>\n";
    cv.text(cv.ml - 8, ty(t) + 4, fmt12(t), 11, "end");
  }
  cv.body += "<rect x=\"" + fmt12(cv.ml) + "\" y=\"" + fmt12(cv.mt) + "\" width=\"" +
             fmt12(cv.width - cv.ml - cv.mr) + "\" height=\"" + fmt12(cv.height - cv.mt - cv.mb) +
             "\" fill=\"none\" stroke=\"black\"/>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& [label, ys] = series[si];
    if (ys.size() != xs.size()) return false;
    const char* color = palette[si % 5];
    std::string points;
    bool open = false;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!std::isfinite(ys[i])) {
        if (open) {
          cv.body += "<polyline points=\"" + points + "\" fill=\"none\" stroke=\"" + color +
                     "\" stroke-width=\"1.8\"/>\n";
          points.clear();
          open = false;
        }
        continue;
      }
      points += fmt12(tx(xs[i])) + "," + fmt12(ty(ys[i])) + " ";
      open = true;
    }
    if (open)
      cv.body += "<polyline points=\"" + points + "\" fill=\"none\" stroke=\"" + color +
                 "\" stroke-width=\"1.8\"/>\n";
    cv.text(cv.width - cv.mr - 6, cv.mt + 18 + 16 * static_cast<double>(si), label, 12, "end",
            ("fill=\"" + std::string(color) + "\"").c_str());
  }
  write_text_file(path, cv.finish(title, xlabel, ylabel));
  return true;
} catch (...) {
  return false;
}

}  // namespace optoring
