#include "longnet/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "longnet/numeric.hpp"

namespace longnet::svg {

namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 60, kRight = 20, kTop = 36, kBottom = 56;
const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
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

std::string open(double w, double h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
}

struct Frame {
  double x0, x1, y0, y1;
  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

void axes(std::ostringstream& out, const Frame& f, const std::string& title,
          const std::string& x_label, const std::string& y_label, bool x_ticks) {
  out << "<rect x=\"0\" y=\"0\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << num(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(title) << "</text>\n";
  out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kHeight - kBottom) << "\" x2=\""
      << num(kWidth - kRight) << "\" y2=\"" << num(kHeight - kBottom) << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(kLeft)
      << "\" y2=\"" << num(kHeight - kBottom) << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double y = f.y0 + (f.y1 - f.y0) * k / 4.0;
    out << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(f.py(y) + 4)
        << "\" text-anchor=\"end\">" << num(y) << "</text>\n";
    if (x_ticks) {
      const double x = f.x0 + (f.x1 - f.x0) * k / 4.0;
      out << "<text x=\"" << num(f.px(x)) << "\" y=\"" << num(kHeight - kBottom + 16)
          << "\" text-anchor=\"middle\">" << num(x) << "</text>\n";
    }
  }
  if (!x_label.empty())
    out << "<text x=\"" << num(kWidth / 2) << "\" y=\"" << num(kHeight - 8)
        << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
  out << "<text x=\"14\" y=\"" << num(kHeight / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << num(kHeight / 2) << ")\">" << escape(y_label) << "</text>\n";
}

}  // namespace

std::string curves(const std::string& title, const std::string& x_label,
                   const std::string& y_label, const std::vector<Series>& series) {
  const Frame f{0, 1, 0, 1};
  std::ostringstream out;
  out << open(kWidth, kHeight);
  axes(out, f, title, x_label, y_label, true);
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % std::size(kPalette)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < series[s].points.size(); ++i) {
      const auto& [x, y] = series[s].points[i];
      out << (i ? " " : "") << num(f.px(x)) << "," << num(f.py(y));
    }
    out << "\"/>\n";
    const double ly = kTop + 16 + 16 * static_cast<double>(s);
    out << "<line x1=\"" << num(kWidth - 170) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(kWidth - 150)
        << "\" y2=\"" << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << num(kWidth - 145) << "\" y=\"" << num(ly + 4) << "\">"
        << escape(series[s].name) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string boxplots(const std::string& title, const std::string& y_label,
                     const std::vector<Box>& boxes, std::optional<double> reference) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  auto extend = [&](double v) {
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  };
  for (const auto& b : boxes) {
    for (double v : b.values) extend(v);
    if (b.marker) extend(*b.marker);
  }
  if (reference) extend(*reference);
  if (!std::isfinite(lo)) lo = 0, hi = 1;
  if (hi - lo < 1e-9) lo -= 0.5, hi += 0.5;
  const double pad = 0.05 * (hi - lo);
  const Frame f{0, static_cast<double>(std::max<std::size_t>(boxes.size(), 1)), lo - pad, hi + pad};

  std::ostringstream out;
  out << open(kWidth, kHeight);
  axes(out, f, title, "", y_label, false);
  if (reference)
    out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(f.py(*reference)) << "\" x2=\""
        << num(kWidth - kRight) << "\" y2=\"" << num(f.py(*reference))
        << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  const double half = 0.3 * (f.px(1) - f.px(0));
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const Box& b = boxes[i];
    const double cx = f.px(static_cast<double>(i) + 0.5);
    out << "<text x=\"" << num(cx) << "\" y=\"" << num(kHeight - kBottom + 16)
        << "\" text-anchor=\"middle\" font-size=\"10\">" << escape(b.label) << "</text>\n";
    std::vector<double> v;
    for (double x : b.values)
      if (std::isfinite(x)) v.push_back(x);
    if (!v.empty()) {
      const double q1 = quantile(v, 0.25), q2 = quantile(v, 0.5), q3 = quantile(v, 0.75);
      const double iqr = q3 - q1;
      double wlo = q3, whi = q1;
      for (double x : v) {
        if (x >= q1 - 1.5 * iqr) wlo = std::min(wlo, x);
        if (x <= q3 + 1.5 * iqr) whi = std::max(whi, x);
      }
      out << "<line x1=\"" << num(cx) << "\" y1=\"" << num(f.py(wlo)) << "\" x2=\"" << num(cx)
          << "\" y2=\"" << num(f.py(whi)) << "\" stroke=\"black\"/>\n";
      out << "<rect x=\"" << num(cx - half) << "\" y=\"" << num(f.py(q3)) << "\" width=\""
          << num(2 * half) << "\" height=\"" << num(f.py(q1) - f.py(q3))
          << "\" fill=\"#c6dbef\" stroke=\"black\"/>\n";
      out << "<line x1=\"" << num(cx - half) << "\" y1=\"" << num(f.py(q2)) << "\" x2=\""
          << num(cx + half) << "\" y2=\"" << num(f.py(q2)) << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
      for (double x : v)
        if (x < wlo || x > whi)
          out << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(f.py(x))
              << "\" r=\"2\" fill=\"none\" stroke=\"black\"/>\n";
    }
    if (b.marker && std::isfinite(*b.marker))
      out << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(f.py(*b.marker))
          << "\" r=\"3.5\" fill=\"#d62728\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string stack(const std::vector<std::string>& panels) {
  std::ostringstream out;
  out << open(kWidth, kHeight * static_cast<double>(panels.size()));
  for (std::size_t i = 0; i < panels.size(); ++i)
    out << "<g transform=\"translate(0 " << num(kHeight * static_cast<double>(i)) << ")\">\n"
        << panels[i] << "</g>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace longnet::svg
