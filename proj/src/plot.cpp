#include "hslab/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace hslab {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::string emit_plot_svg(const std::vector<double>& x, const std::vector<double>& y,
                          double guide_slope, const std::string& title) {
  if (x.size() != y.size() || x.size() < 2)
    throw InsufficientData("emit_plot_svg: need at least 2 points");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw InsufficientData("emit_plot_svg: log-log plot needs positive data");
  }

  const int width = 640, height = 480;
  const double ml = 70, mr = 20, mt = 34, mb = 46;
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx[i] = std::log10(x[i]);
    ly[i] = std::log10(y[i]);
  }
  double x0 = *std::min_element(lx.begin(), lx.end());
  double x1 = *std::max_element(lx.begin(), lx.end());
  double y0 = *std::min_element(ly.begin(), ly.end());
  double y1 = *std::max_element(ly.begin(), ly.end());
  // guide line through the first point
  const double gy0 = ly[0] + guide_slope * (x0 - lx[0]);
  const double gy1 = ly[0] + guide_slope * (x1 - lx[0]);
  y0 = std::min({y0, gy0, gy1});
  y1 = std::max({y1, gy0, gy1});
  if (x1 - x0 < 1e-12) x1 = x0 + 1.0;
  if (y1 - y0 < 1e-12) y1 = y0 + 1.0;
  const double padx = 0.05 * (x1 - x0), pady = 0.08 * (y1 - y0);
  x0 -= padx;
  x1 += padx;
  y0 -= pady;
  y1 += pady;

  const auto px = [&](double v) { return ml + (v - x0) / (x1 - x0) * (width - ml - mr); };
  const auto py = [&](double v) { return height - mb - (v - y0) / (y1 - y0) * (height - mt - mb); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  os << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  if (!title.empty()) {
    os << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"14\">"
       << title << "</text>\n";
  }
  // frame
  os << "<rect x=\"" << num(ml) << "\" y=\"" << num(mt) << "\" width=\"" << num(width - ml - mr)
     << "\" height=\"" << num(height - mt - mb)
     << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  // decade ticks
  for (int d = static_cast<int>(std::ceil(x0)); d <= static_cast<int>(std::floor(x1)); ++d) {
    os << "<line x1=\"" << num(px(d)) << "\" y1=\"" << num(py(y0)) << "\" x2=\"" << num(px(d))
       << "\" y2=\"" << num(py(y0) + 5) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << num(px(d)) << "\" y=\"" << num(py(y0) + 20)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">1e" << d
       << "</text>\n";
  }
  for (int d = static_cast<int>(std::ceil(y0)); d <= static_cast<int>(std::floor(y1)); ++d) {
    os << "<line x1=\"" << num(ml - 5) << "\" y1=\"" << num(py(d)) << "\" x2=\"" << num(ml)
       << "\" y2=\"" << num(py(d)) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << num(ml - 8) << "\" y=\"" << num(py(d) + 4)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">1e" << d
       << "</text>\n";
  }
  // guide line with the theoretical slope, anchored at the first point
  os << "<line x1=\"" << num(px(x0 + padx)) << "\" y1=\""
     << num(py(ly[0] + guide_slope * (x0 + padx - lx[0]))) << "\" x2=\"" << num(px(x1 - padx))
     << "\" y2=\"" << num(py(ly[0] + guide_slope * (x1 - padx - lx[0])))
     << "\" stroke=\"#888888\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>\n";
  os << "<text x=\"" << num(width - mr - 4) << "\" y=\"" << num(mt + 14)
     << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">guide slope "
     << num(guide_slope) << "</text>\n";
  // markers
  for (std::size_t i = 0; i < lx.size(); ++i) {
    os << "<circle cx=\"" << num(px(lx[i])) << "\" cy=\"" << num(py(ly[i]))
       << "\" r=\"3.5\" fill=\"#1f6fb2\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace hslab
