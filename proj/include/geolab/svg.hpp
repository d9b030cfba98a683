#pragma once

// Minimal SVG emitters: per-component plots of a candidate and section rasters.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "geolab/circle.hpp"
#include "geolab/geodesic.hpp"
#include "geolab/semitube.hpp"

namespace geolab::svg {

namespace detail {

struct Frame {
  double x0, y0, size;  // panel origin and edge length in pixels
  double lo_x, lo_y, span;

  double px(double x) const { return x0 + 10 + (x - lo_x) / span * (size - 20); }
  double py(double y) const { return y0 + size - 10 - (y - lo_y) / span * (size - 20); }
};

inline Frame fit(const std::vector<std::vector<cplx>>& curves, double x0, double y0, double size) {
  double lx = INFINITY, hx = -INFINITY, ly = INFINITY, hy = -INFINITY;
  for (const auto& c : curves)
    for (const auto& z : c) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) continue;
      lx = std::min(lx, z.real());
      hx = std::max(hx, z.real());
      ly = std::min(ly, z.imag());
      hy = std::max(hy, z.imag());
    }
  if (!std::isfinite(lx)) lx = hx = ly = hy = 0.0;
  const double span = std::max({hx - lx, hy - ly, 1e-9}) * 1.1;
  const double cx = 0.5 * (lx + hx), cy = 0.5 * (ly + hy);
  return Frame{x0, y0, size, cx - span / 2, cy - span / 2, span};
}

inline std::string polyline(const Frame& f, const std::vector<cplx>& pts, const char* colour, double width) {
  std::ostringstream os;
  os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"" << width << "\" points=\"";
  char buf[64];
  for (const auto& z : pts) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) continue;
    std::snprintf(buf, sizeof buf, "%.3f,%.3f ", f.px(z.real()), f.py(z.imag()));
    os << buf;
  }
  os << "\"/>\n";
  return os.str();
}

}  // namespace detail

/// One panel per component: boundary values (black) and images of the
/// circles |lambda| = 0.3, 0.6, 0.9 (blue).
inline std::string candidate_plot(const GeodesicCandidate& cand, std::size_t samples = 256) {
  const double panel = 320.0;
  const std::size_t n = cand.rep.n;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << panel * static_cast<double>(n) << "\" height=\""
     << panel + 20 << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const std::vector<double> radii{0.3, 0.6, 0.9};
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::vector<cplx>> curves;
    std::vector<cplx> bnd;
    const auto& vals = cand.boundary.values()[j];
    for (const auto& v : vals) bnd.push_back(v);
    if (!bnd.empty()) bnd.push_back(bnd.front());
    curves.push_back(bnd);
    for (double r : radii) {
      std::vector<cplx> c;
      for (std::size_t k = 0; k <= samples; ++k)
        c.push_back(cand.rep.eval(std::polar(r, kTwoPi * static_cast<double>(k) / static_cast<double>(samples)))[j]);
      curves.push_back(std::move(c));
    }
    const detail::Frame f = detail::fit(curves, panel * static_cast<double>(j), 20, panel);
    os << "<text x=\"" << f.x0 + 10 << "\" y=\"15\" font-family=\"monospace\" font-size=\"12\">component " << j + 1
       << "</text>\n";
    os << "<rect x=\"" << f.x0 + 5 << "\" y=\"25\" width=\"" << panel - 10 << "\" height=\"" << panel - 10
       << "\" fill=\"none\" stroke=\"#ccc\"/>\n";
    for (std::size_t c = 1; c < curves.size(); ++c) os << detail::polyline(f, curves[c], "#3060c0", 1.0);
    os << detail::polyline(f, curves[0], "black", 1.5);
  }
  os << "</svg>\n";
  return os.str();
}

/// Occupied pixels drawn as horizontal runs.
inline std::string raster_plot(const semitube::SectionRaster& r, double size = 512.0) {
  std::ostringstream os;
  const double cell = size / static_cast<double>(r.m);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
     << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  char buf[128];
  for (std::size_t j = 0; j < r.m; ++j) {
    std::size_t i = 0;
    while (i < r.m) {
      if (!r.at(i, j)) {
        ++i;
        continue;
      }
      const std::size_t start = i;
      while (i < r.m && r.at(i, j)) ++i;
      std::snprintf(buf, sizeof buf, "<rect x=\"%.3f\" y=\"%.3f\" width=\"%.3f\" height=\"%.3f\" fill=\"#304060\"/>\n",
                    static_cast<double>(start) * cell, size - static_cast<double>(j + 1) * cell,
                    static_cast<double>(i - start) * cell, cell);
      os << buf;
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace geolab::svg
