// Copyright 2026 The langevin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LANGEVIN_SVG_HPP_
#define LANGEVIN_SVG_HPP_

// Minimal SVG line and box plots. Presentation only.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace langevin::svg {

struct Series {
  std::string label;
  std::vector<double> x, y;
};

struct Axes {
  std::string title, xlabel, ylabel;
  bool logx = true, logy = true;
  int width = 640, height = 420;
};

namespace detail {

inline const char* color(std::size_t i) {
  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                   "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  return kPalette[i % 8];
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct Scale {
  double lo = 0.0, hi = 1.0;
  bool log = false;
  double p0 = 0.0, p1 = 1.0;  // pixel range

  double tr(double v) const { return log ? std::log10(v) : v; }
  double operator()(double v) const {
    const double t = (tr(v) - lo) / (hi - lo);
    return p0 + t * (p1 - p0);
  }
};

inline Scale make_scale(std::vector<double> vals, bool log, double p0, double p1) {
  Scale s;
  s.log = log;
  s.p0 = p0;
  s.p1 = p1;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : vals) {
    if (!std::isfinite(v) || (log && !(v > 0.0))) continue;
    lo = std::min(lo, s.tr(v));
    hi = std::max(hi, s.tr(v));
  }
  if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
  if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
  const double pad = 0.04 * (hi - lo);
  s.lo = lo - pad;
  s.hi = hi + pad;
  return s;
}

inline void frame(std::ostringstream& o, const Axes& a, const Scale& sx, const Scale& sy) {
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << a.width << "\" height=\"" << a.height
    << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << a.width / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"13\">" << escape(a.title)
    << "</text>\n";
  o << "<rect x=\"" << sx.p0 << "\" y=\"" << sy.p1 << "\" width=\"" << sx.p1 - sx.p0 << "\" height=\""
    << sy.p0 - sy.p1 << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double tx = sx.lo + (sx.hi - sx.lo) * i / 4.0, ty = sy.lo + (sy.hi - sy.lo) * i / 4.0;
    const double px = sx.p0 + (sx.p1 - sx.p0) * i / 4.0, py = sy.p0 + (sy.p1 - sy.p0) * i / 4.0;
    o << "<text x=\"" << px << "\" y=\"" << sy.p0 + 14 << "\" text-anchor=\"middle\">"
      << num(sx.log ? std::pow(10.0, tx) : tx) << "</text>\n";
    o << "<text x=\"" << sx.p0 - 4 << "\" y=\"" << py + 4 << "\" text-anchor=\"end\">"
      << num(sy.log ? std::pow(10.0, ty) : ty) << "</text>\n";
  }
  o << "<text x=\"" << (sx.p0 + sx.p1) / 2 << "\" y=\"" << a.height - 6 << "\" text-anchor=\"middle\">"
    << escape(a.xlabel) << "</text>\n";
  o << "<text x=\"14\" y=\"" << (sy.p0 + sy.p1) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
    << (sy.p0 + sy.p1) / 2 << ")\">" << escape(a.ylabel) << "</text>\n";
}

}  // namespace detail

inline std::string line_plot(const Axes& a, const std::vector<Series>& series) {
  std::vector<double> xs, ys;
  for (const auto& s : series) {
    xs.insert(xs.end(), s.x.begin(), s.x.end());
    ys.insert(ys.end(), s.y.begin(), s.y.end());
  }
  const auto sx = detail::make_scale(xs, a.logx, 70.0, a.width - 150.0);
  const auto sy = detail::make_scale(ys, a.logy, a.height - 40.0, 30.0);
  std::ostringstream o;
  detail::frame(o, a, sx, sy);
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    o << "<polyline fill=\"none\" stroke=\"" << detail::color(i) << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t j = 0; j < std::min(s.x.size(), s.y.size()); ++j) {
      if (!std::isfinite(s.x[j]) || !std::isfinite(s.y[j])) continue;
      if ((a.logx && !(s.x[j] > 0.0)) || (a.logy && !(s.y[j] > 0.0))) continue;
      o << sx(s.x[j]) << ',' << sy(s.y[j]) << ' ';
    }
    o << "\"/>\n";
    o << "<text x=\"" << a.width - 144 << "\" y=\"" << 40 + 14 * i << "\" fill=\"" << detail::color(i) << "\">"
      << detail::escape(s.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

struct Box {
  std::string label;
  std::vector<double> values;
};

/// Median, quartiles and 1.5 IQR whiskers per group.
inline std::string box_plot(Axes a, const std::vector<Box>& boxes) {
  a.logx = false;
  std::vector<double> ys;
  for (const auto& b : boxes) ys.insert(ys.end(), b.values.begin(), b.values.end());
  const auto sy = detail::make_scale(ys, a.logy, a.height - 40.0, 30.0);
  detail::Scale sx;
  sx.lo = 0.0;
  sx.hi = static_cast<double>(std::max<std::size_t>(boxes.size(), 1));
  sx.p0 = 70.0;
  sx.p1 = a.width - 20.0;
  std::ostringstream o;
  detail::frame(o, a, sx, sy);
  auto q = [](const std::vector<double>& v, double p) {
    const double pos = p * static_cast<double>(v.size() - 1);
    const auto i = static_cast<std::size_t>(pos);
    const double f = pos - static_cast<double>(i);
    return i + 1 < v.size() ? v[i] * (1 - f) + v[i + 1] * f : v[i];
  };
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    std::vector<double> v;
    for (double x : boxes[i].values)
      if (std::isfinite(x) && (!a.logy || x > 0.0)) v.push_back(x);
    const double cx = sx(static_cast<double>(i) + 0.5), w = 0.3 * (sx.p1 - sx.p0) / sx.hi;
    o << "<text x=\"" << cx << "\" y=\"" << a.height - 24 << "\" text-anchor=\"middle\">"
      << detail::escape(boxes[i].label) << "</text>\n";
    if (v.empty()) continue;
    std::sort(v.begin(), v.end());
    const double q1 = q(v, 0.25), q2 = q(v, 0.5), q3 = q(v, 0.75), iqr = q3 - q1;
    double lo = q1, hi = q3;
    for (double x : v) {
      if (x >= q1 - 1.5 * iqr) lo = std::min(lo, x);
      if (x <= q3 + 1.5 * iqr) hi = std::max(hi, x);
    }
    const char* c = detail::color(i);
    o << "<line x1=\"" << cx << "\" x2=\"" << cx << "\" y1=\"" << sy(lo) << "\" y2=\"" << sy(hi)
      << "\" stroke=\"" << c << "\"/>\n";
    o << "<rect x=\"" << cx - w / 2 << "\" y=\"" << sy(q3) << "\" width=\"" << w << "\" height=\""
      << sy(q1) - sy(q3) << "\" fill=\"white\" stroke=\"" << c << "\"/>\n";
    o << "<line x1=\"" << cx - w / 2 << "\" x2=\"" << cx + w / 2 << "\" y1=\"" << sy(q2) << "\" y2=\"" << sy(q2)
      << "\" stroke=\"" << c << "\" stroke-width=\"2\"/>\n";
    for (double x : v)
      if (x < lo || x > hi)
        o << "<circle cx=\"" << cx << "\" cy=\"" << sy(x) << "\" r=\"2\" fill=\"" << c << "\"/>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace langevin::svg

#endif  // LANGEVIN_SVG_HPP_
