#pragma once

// Semitube domains S_B = Pi^{-1}(B) over bases B in R^{2n-1}: rasterized
// complex-line sections, topology counts, sampled convexity and fiber checks,
// hyperplane correspondences and a combined harness.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "geolab/circle.hpp"
#include "geolab/error.hpp"
#include "geolab/parallel.hpp"

namespace geolab::semitube {

using Point = std::vector<double>;

/// (Re z_1, Im z_1, ..., Re z_{n-1}, Im z_{n-1}, Re z_n).
inline Point project_pi(const CVec& z) {
  if (z.empty()) throw ArgumentError("project_pi: empty point");
  Point x;
  x.reserve(2 * z.size() - 1);
  for (std::size_t j = 0; j + 1 < z.size(); ++j) {
    x.push_back(z[j].real());
    x.push_back(z[j].imag());
  }
  x.push_back(z.back().real());
  return x;
}

inline CVec lift_iota(const Point& x) {
  if (x.size() % 2 == 0) throw ArgumentError("lift_iota: expected odd dimension 2n - 1");
  CVec z;
  for (std::size_t j = 0; j + 1 < x.size(); j += 2) z.emplace_back(x[j], x[j + 1]);
  z.emplace_back(x.back(), 0.0);
  return z;
}

/// x^T A x + b . x + c < 0, A stored row-major.
struct Quadric {
  std::vector<double> A;
  std::vector<double> b;
  double c = 0.0;

  double eval(const double* x, std::size_t dim) const {
    double s = c;
    for (std::size_t i = 0; i < dim; ++i) {
      double row = b.empty() ? 0.0 : b[i];
      if (!A.empty())
        for (std::size_t k = 0; k < dim; ++k) row += A[i * dim + k] * x[k];
      s += row * x[i];
    }
    return s;
  }
};

/// Intersection of strict quadric inequalities.
struct Piece {
  std::vector<Quadric> all_of;
};

struct VoxelGrid {
  Point lo, hi;
  std::vector<std::size_t> res;
  std::vector<std::uint8_t> occupancy;  // first axis fastest

  bool contains(const double* x) const {
    std::size_t index = 0, stride = 1;
    for (std::size_t i = 0; i < res.size(); ++i) {
      const double u = (x[i] - lo[i]) / (hi[i] - lo[i]);
      if (!(u >= 0.0 && u < 1.0)) return false;
      index += stride * std::min(res[i] - 1, static_cast<std::size_t>(u * static_cast<double>(res[i])));
      stride *= res[i];
    }
    return occupancy[index] != 0;
  }
};

struct Base {
  std::string name;
  std::size_t n = 2;
  std::variant<std::vector<Piece>, VoxelGrid> shape;
  Point bbox_lo, bbox_hi;  // sampling box; unbounded bases use a nominal range
  Point interior;          // a point of the base, used as a ray origin
  Point offset;            // translation applied to the shape

  std::size_t dim() const { return 2 * n - 1; }

  bool contains(const Point& x) const { return contains(x.data()); }
  bool contains(const double* x) const {
    double local[8];
    const std::size_t m = dim();
    for (std::size_t i = 0; i < m; ++i) local[i] = x[i] - (offset.empty() ? 0.0 : offset[i]);
    if (const auto* pieces = std::get_if<std::vector<Piece>>(&shape)) {
      for (const auto& p : *pieces) {
        bool in = true;
        for (const auto& q : p.all_of) {
          if (!(q.eval(local, m) < 0.0)) {
            in = false;
            break;
          }
        }
        if (in) return true;
      }
      return false;
    }
    return std::get<VoxelGrid>(shape).contains(local);
  }

  Point lo() const { return shifted(bbox_lo); }
  Point hi() const { return shifted(bbox_hi); }
  Point interior_point() const { return shifted(interior); }

  double diameter() const {
    double s = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) s += (bbox_hi[i] - bbox_lo[i]) * (bbox_hi[i] - bbox_lo[i]);
    return std::sqrt(s);
  }

  Base translated(const Point& w) const {
    Base out = *this;
    if (out.offset.empty()) out.offset.assign(dim(), 0.0);
    for (std::size_t i = 0; i < dim(); ++i) out.offset[i] += w[i];
    return out;
  }

  void validate() const {
    if (n < 2 || n > 3) throw ValidationError("semitube bases need n in {2, 3}");
    if (bbox_lo.size() != dim() || bbox_hi.size() != dim()) throw ValidationError("bbox dimension mismatch");
    for (std::size_t i = 0; i < dim(); ++i)
      if (!(bbox_lo[i] < bbox_hi[i])) throw ValidationError("bbox must have positive extent");
    if (interior.size() != dim() || !contains(interior_point())) throw ValidationError("interior point not in base");
    if (const auto* v = std::get_if<VoxelGrid>(&shape)) {
      if (v->res.size() != dim() || v->lo.size() != dim() || v->hi.size() != dim())
        throw ValidationError("voxel grid dimension mismatch");
      std::size_t cells = 1;
      for (auto r : v->res) cells *= r;
      if (cells != v->occupancy.size()) throw ValidationError("voxel occupancy size mismatch");
    }
  }

 private:
  Point shifted(const Point& p) const {
    Point out = p;
    if (!offset.empty())
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += offset[i];
    return out;
  }
};

/// |x - c|^2 - r^2 restricted to the listed coordinates.
inline Quadric ball_quadric(std::size_t dim, const Point& center, double r, const std::vector<std::size_t>& axes) {
  Quadric q;
  q.A.assign(dim * dim, 0.0);
  q.b.assign(dim, 0.0);
  q.c = -r * r;
  for (auto i : axes) {
    q.A[i * dim + i] = 1.0;
    q.b[i] = -2.0 * center[i];
    q.c += center[i] * center[i];
  }
  return q;
}

/// s * (x_i - t) < 0.
inline Quadric halfspace(std::size_t dim, std::size_t i, double t, double s) {
  Quadric q;
  q.b.assign(dim, 0.0);
  q.b[i] = s;
  q.c = -s * t;
  return q;
}

inline Base ball_base(double r = 1.0) {
  Base b{"ball", 2, std::vector<Piece>{Piece{{ball_quadric(3, {0, 0, 0}, r, {0, 1, 2})}}}, {-r, -r, -r}, {r, r, r},
         {0, 0, 0}, {}};
  return b;
}

/// Two unit balls at (+-1.6, 0, 0) joined by a thin cylinder along x_1.
inline Base dumbbell_base(double separation = 1.6, double neck = 0.35) {
  const std::size_t dim = 3;
  std::vector<Piece> pieces{
      Piece{{ball_quadric(dim, {-separation, 0, 0}, 1.0, {0, 1, 2})}},
      Piece{{ball_quadric(dim, {separation, 0, 0}, 1.0, {0, 1, 2})}},
      Piece{{ball_quadric(dim, {0, 0, 0}, neck, {1, 2}), halfspace(dim, 0, separation, 1.0),
             halfspace(dim, 0, -separation, -1.0)}},
  };
  const double ext = separation + 1.0;
  return Base{"dumbbell", 2, std::move(pieces), {-ext, -1, -1}, {ext, 1, 1}, {0, 0, 0}, {}};
}

/// (unit disc minus the slot {x_1 >= 0, |x_2| <= w}) x R.
inline Base slit_disc_base(double half_width = 0.15) {
  const std::size_t dim = 3;
  const Quadric disc = ball_quadric(dim, {0, 0, 0}, 1.0, {0, 1});
  std::vector<Piece> pieces{
      Piece{{disc, halfspace(dim, 1, half_width, -1.0)}},
      Piece{{disc, halfspace(dim, 1, -half_width, 1.0)}},
      Piece{{disc, halfspace(dim, 0, 0.0, 1.0)}},
  };
  return Base{"slit_disc", 2, std::move(pieces), {-1, -1, -1}, {1, 1, 1}, {-0.5, 0, 0}, {}};
}

inline Base builtin_base(const std::string& name) {
  if (name == "ball") return ball_base();
  if (name == "dumbbell") return dumbbell_base();
  if (name == "slit_disc" || name == "slit-disc") return slit_disc_base();
  throw ConfigError("unknown built-in base: " + name);
}

struct ComplexLine {
  CVec anchor;
  CVec direction;
};

/// Pixel (i, j) has centre t = (-R + (i + 1/2) h) + i (-R + (j + 1/2) h), h = 2R/m.
struct SectionRaster {
  std::size_t m = 0;
  double R = 0.0;
  std::vector<std::uint8_t> occ;  // row j, column i at j * m + i
  std::size_t occupied = 0;
  std::array<bool, 4> touches{};  // left, right, bottom, top

  bool at(std::size_t i, std::size_t j) const { return occ[j * m + i] != 0; }
  cplx pixel_center(std::size_t i, std::size_t j) const {
    const double h = 2.0 * R / static_cast<double>(m);
    return {-R + (static_cast<double>(i) + 0.5) * h, -R + (static_cast<double>(j) + 0.5) * h};
  }
  bool truncated() const { return touches[0] || touches[1] || touches[2] || touches[3]; }
  std::size_t sides_touched() const {
    return static_cast<std::size_t>(touches[0]) + touches[1] + touches[2] + touches[3];
  }
};

inline SectionRaster line_section(const Base& base, const ComplexLine& line, double R, std::size_t m) {
  if (line.direction.size() != base.n || line.anchor.size() != base.n)
    throw ArgumentError("line dimension does not match the base");
  bool nonzero = false;
  for (const auto& c : line.direction) nonzero = nonzero || c != cplx(0.0);
  if (!nonzero) throw ArgumentError("line direction must be nonzero");
  if (!(R > 0.0)) throw ArgumentError("window half-width must be positive");
  if (m < 64) throw ArgumentError("raster resolution must be at least 64");

  SectionRaster r;
  r.m = m;
  r.R = R;
  r.occ.assign(m * m, 0);
  const std::size_t n = base.n;
  const std::size_t dim = base.dim();
  for (std::size_t j = 0; j < m; ++j) {
    double x[8];
    for (std::size_t i = 0; i < m; ++i) {
      const cplx t = r.pixel_center(i, j);
      for (std::size_t k = 0; k + 1 < n; ++k) {
        const cplx z = line.anchor[k] + t * line.direction[k];
        x[2 * k] = z.real();
        x[2 * k + 1] = z.imag();
      }
      x[dim - 1] = (line.anchor[n - 1] + t * line.direction[n - 1]).real();
      if (base.contains(x)) {
        r.occ[j * m + i] = 1;
        ++r.occupied;
        if (i == 0) r.touches[0] = true;
        if (i == m - 1) r.touches[1] = true;
        if (j == 0) r.touches[2] = true;
        if (j == m - 1) r.touches[3] = true;
      }
    }
  }
  return r;
}

struct TopologyReport {
  std::size_t components = 0;
  std::size_t holes = 0;
  std::size_t resolution = 0;
  long margin = -1;  // pixels between the occupied set and the frame; -1 when empty
  bool inconclusive = false;
  std::optional<bool> stable;  // set when re-run at doubled resolution

  bool same_counts(const TopologyReport& o) const {
    return components == o.components && holes == o.holes && inconclusive == o.inconclusive;
  }
  bool violates() const { return !inconclusive && margin >= 0 && (components != 1 || holes != 0); }
};

namespace detail {

/// Labels connected runs of pixels with value `value`; returns the number of
/// components and, per component, whether it reaches the frame.
inline std::pair<std::size_t, std::vector<bool>> label(const SectionRaster& r, std::uint8_t value, bool eight) {
  const std::size_t m = r.m;
  std::vector<int> lab(m * m, -1);
  std::vector<bool> frame;
  std::vector<std::size_t> stack;
  int count = 0;
  for (std::size_t s = 0; s < m * m; ++s) {
    if (r.occ[s] != value || lab[s] >= 0) continue;
    bool on_frame = false;
    lab[s] = count;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      const long i = static_cast<long>(p % m), j = static_cast<long>(p / m);
      if (i == 0 || j == 0 || i == static_cast<long>(m) - 1 || j == static_cast<long>(m) - 1) on_frame = true;
      for (long dj = -1; dj <= 1; ++dj) {
        for (long di = -1; di <= 1; ++di) {
          if (di == 0 && dj == 0) continue;
          if (!eight && di != 0 && dj != 0) continue;
          const long ii = i + di, jj = j + dj;
          if (ii < 0 || jj < 0 || ii >= static_cast<long>(m) || jj >= static_cast<long>(m)) continue;
          const std::size_t q = static_cast<std::size_t>(jj) * m + static_cast<std::size_t>(ii);
          if (r.occ[q] == value && lab[q] < 0) {
            lab[q] = count;
            stack.push_back(q);
          }
        }
      }
    }
    frame.push_back(on_frame);
    ++count;
  }
  return {static_cast<std::size_t>(count), frame};
}

}  // namespace detail

/// Occupied pixels are grouped with 8-neighbourhoods, the background with
/// 4-neighbourhoods; holes are background components away from the frame.
inline TopologyReport topology(const SectionRaster& r) {
  TopologyReport t;
  t.resolution = r.m;
  t.components = detail::label(r, 1, true).first;
  const auto [bg, frame] = detail::label(r, 0, false);
  for (std::size_t c = 0; c < bg; ++c)
    if (!frame[c]) ++t.holes;
  if (r.occupied > 0) {
    long best = static_cast<long>(r.m);
    for (std::size_t j = 0; j < r.m; ++j)
      for (std::size_t i = 0; i < r.m; ++i)
        if (r.at(i, j)) {
          const long d = std::min({static_cast<long>(i), static_cast<long>(j), static_cast<long>(r.m - 1 - i),
                                   static_cast<long>(r.m - 1 - j)});
          best = std::min(best, d);
        }
    t.margin = best;
  }
  t.inconclusive = r.sides_touched() >= 2;
  return t;
}

inline double default_window(const Base& base) { return 8.0 * base.diameter(); }

struct ScanConfig {
  std::size_t lines = 500;
  unsigned long long seed = 0;
  std::size_t resolution = 256;
  double window = 0.0;  // 0 selects 8 x diameter of the sampling box
  std::size_t min_pixels = 16;
  bool stop_at_first = true;
};

/// A square sub-window of the line parameter: `line` is re-anchored at the
/// window centre and t ranges over [-R, R]^2.
struct SectionWindow {
  ComplexLine line;
  double R = 0.0;
};

/// Tight window around the occupied pixels of `r`, padded by `pad` pixels.
inline std::optional<SectionWindow> tight_window(const ComplexLine& line, const SectionRaster& r, double pad = 2.0) {
  if (r.occupied == 0) return std::nullopt;
  std::size_t ilo = r.m, ihi = 0, jlo = r.m, jhi = 0;
  for (std::size_t j = 0; j < r.m; ++j)
    for (std::size_t i = 0; i < r.m; ++i)
      if (r.at(i, j)) {
        ilo = std::min(ilo, i);
        ihi = std::max(ihi, i);
        jlo = std::min(jlo, j);
        jhi = std::max(jhi, j);
      }
  const double h = 2.0 * r.R / static_cast<double>(r.m);
  const cplx centre = 0.5 * (r.pixel_center(ilo, jlo) + r.pixel_center(ihi, jhi));
  const double half = 0.5 * h * static_cast<double>(std::max(ihi - ilo, jhi - jlo)) + (pad + 0.5) * h;
  SectionWindow w{line, half};
  for (std::size_t k = 0; k < w.line.anchor.size(); ++k) w.line.anchor[k] += centre * line.direction[k];
  return w;
}

struct LineOutcome {
  ComplexLine line;
  TopologyReport report;
  std::optional<TopologyReport> doubled;
  std::optional<SectionWindow> zoom;  // window of `report` and `doubled` for bounded sections
  enum class Kind { empty, tiny, inconclusive, clean, unstable, violation } kind = Kind::empty;
};

inline std::string to_string(LineOutcome::Kind k) {
  switch (k) {
    case LineOutcome::Kind::empty: return "empty";
    case LineOutcome::Kind::tiny: return "tiny";
    case LineOutcome::Kind::inconclusive: return "inconclusive";
    case LineOutcome::Kind::clean: return "clean";
    case LineOutcome::Kind::unstable: return "unstable";
    case LineOutcome::Kind::violation: return "violation";
  }
  return "unknown";
}

struct ScanReport {
  std::string base;
  std::size_t lines_examined = 0;
  std::size_t empty = 0, tiny = 0, inconclusive = 0, clean = 0, unstable = 0, violations = 0;
  double window = 0.0;
  std::size_t resolution = 0;
  std::optional<LineOutcome> first_violation;
};

/// Anchors are lifts of uniform points of the sampling box; directions are
/// uniform on the unit sphere of C^n.
inline std::vector<ComplexLine> sample_lines(const Base& base, std::size_t count, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Point lo = base.lo(), hi = base.hi();
  std::vector<ComplexLine> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    Point x(base.dim());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = lo[i] + (hi[i] - lo[i]) * unit(rng);
    CVec d(base.n);
    double nrm = 0.0;
    do {
      nrm = 0.0;
      for (auto& c : d) {
        c = cplx(gauss(rng), gauss(rng));
        nrm += std::norm(c);
      }
    } while (nrm < 1e-12);
    for (auto& c : d) c /= std::sqrt(nrm);
    out.push_back(ComplexLine{lift_iota(x), std::move(d)});
  }
  return out;
}

/// Bounded sections are re-rasterized at resolution m on a tight window
/// around their coarse footprint before topology is decided.
inline LineOutcome classify_line(const Base& base, const ComplexLine& line, double R, std::size_t m,
                                 std::size_t min_pixels) {
  LineOutcome out{line, {}, std::nullopt, std::nullopt, LineOutcome::Kind::empty};
  const SectionRaster r = line_section(base, line, R, m);
  out.report = topology(r);
  if (r.occupied == 0) return out;
  if (r.occupied < min_pixels) {
    out.kind = LineOutcome::Kind::tiny;
    return out;
  }
  if (out.report.inconclusive) {
    out.kind = LineOutcome::Kind::inconclusive;
    return out;
  }
  out.zoom = tight_window(line, r);
  out.report = topology(line_section(base, out.zoom->line, out.zoom->R, m));
  if (out.report.inconclusive) {
    out.kind = LineOutcome::Kind::inconclusive;
    return out;
  }
  if (!out.report.violates()) {
    out.kind = LineOutcome::Kind::clean;
    return out;
  }
  out.doubled = topology(line_section(base, out.zoom->line, out.zoom->R, 2 * m));
  const bool stable = out.doubled->same_counts(out.report);
  out.report.stable = stable;
  out.kind = stable ? LineOutcome::Kind::violation : LineOutcome::Kind::unstable;
  return out;
}

inline ScanReport cconvexity_scan(const Base& base, const ScanConfig& cfg = {}) {
  base.validate();
  ScanReport rep;
  rep.base = base.name;
  rep.window = cfg.window > 0.0 ? cfg.window : default_window(base);
  rep.resolution = cfg.resolution;
  const auto lines = sample_lines(base, cfg.lines, cfg.seed);
  const std::size_t block = std::max<std::size_t>(8, 4 * worker_count());
  for (std::size_t start = 0; start < lines.size(); start += block) {
    const std::size_t len = std::min(block, lines.size() - start);
    std::vector<LineOutcome> outcomes(len);
    parallel_for(len, [&](std::size_t i) {
      outcomes[i] = classify_line(base, lines[start + i], rep.window, cfg.resolution, cfg.min_pixels);
    });
    for (auto& o : outcomes) {
      ++rep.lines_examined;
      switch (o.kind) {
        case LineOutcome::Kind::empty: ++rep.empty; break;
        case LineOutcome::Kind::tiny: ++rep.tiny; break;
        case LineOutcome::Kind::inconclusive: ++rep.inconclusive; break;
        case LineOutcome::Kind::clean: ++rep.clean; break;
        case LineOutcome::Kind::unstable: ++rep.unstable; break;
        case LineOutcome::Kind::violation:
          ++rep.violations;
          if (!rep.first_violation) rep.first_violation = o;
          break;
      }
      if (cfg.stop_at_first && rep.first_violation) return rep;
    }
  }
  return rep;
}

struct SamplerConfig {
  std::size_t count = 10000;
  unsigned long long seed = 0;
};

struct ConvexityResult {
  bool convex = true;
  std::size_t pairs_tested = 0;
  std::optional<std::array<Point, 3>> witness;  // x, y, midpoint
};

inline Point sample_point_in(const Base& base, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Point lo = base.lo(), hi = base.hi();
  Point x(base.dim());
  for (int attempt = 0; attempt < 100000; ++attempt) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = lo[i] + (hi[i] - lo[i]) * unit(rng);
    if (base.contains(x)) return x;
  }
  throw PipelineError("rejection sampling found no point of the base");
}

inline ConvexityResult convexity_check(const Base& base, const SamplerConfig& cfg = {}) {
  base.validate();
  std::mt19937_64 rng(cfg.seed);
  ConvexityResult out;
  for (std::size_t s = 0; s < cfg.count; ++s) {
    const Point x = sample_point_in(base, rng);
    const Point y = sample_point_in(base, rng);
    Point mid(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) mid[i] = 0.5 * (x[i] + y[i]);
    ++out.pairs_tested;
    if (!base.contains(mid)) {
      out.convex = false;
      out.witness = std::array<Point, 3>{x, y, mid};
      return out;
    }
  }
  return out;
}

/// Boundary point on the ray from `origin` towards `dir`, by bisection.
inline std::optional<Point> boundary_on_ray(const Base& base, const Point& origin, const Point& dir, double reach) {
  auto at = [&](double s) {
    Point p(origin.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = origin[i] + s * dir[i];
    return p;
  };
  if (!base.contains(origin) || base.contains(at(reach))) return std::nullopt;
  double in = 0.0, out = reach;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (in + out);
    (base.contains(at(mid)) ? in : out) = mid;
  }
  return at(0.5 * (in + out));
}

inline Point random_unit(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Point d(dim);
  double nrm = 0.0;
  do {
    nrm = 0.0;
    for (auto& c : d) {
      c = gauss(rng);
      nrm += c * c;
    }
  } while (nrm < 1e-12);
  for (auto& c : d) c /= std::sqrt(nrm);
  return d;
}

struct FiberConfig {
  std::size_t boundary_points = 200;
  std::size_t heights = 100;
  unsigned long long seed = 0;
};

struct FiberResult {
  bool holds = true;
  std::size_t points_tested = 0;
  std::optional<Point> witness;  // boundary point whose vertical fiber stays in the boundary
};

/// True at x when both the base and its complement meet the delta-box around x
/// in the horizontal directions.
inline bool near_boundary(const Base& base, Point x, double delta) {
  bool in = base.contains(x), out = !in;
  const std::size_t horiz = base.dim() - 1;
  for (std::size_t i = 0; i < horiz && !(in && out); ++i) {
    for (double s : {-delta, delta}) {
      const double keep = x[i];
      x[i] += s;
      (base.contains(x) ? in : out) = true;
      x[i] = keep;
    }
  }
  return in && out;
}

inline FiberResult fiber_condition_check(const Base& base, const FiberConfig& cfg = {}) {
  base.validate();
  std::mt19937_64 rng(cfg.seed);
  const double diam = base.diameter();
  const double delta = diam / 256.0;
  const Point lo = base.lo(), hi = base.hi();
  const std::size_t last = base.dim() - 1;
  const double span = hi[last] - lo[last];
  FiberResult out;
  for (std::size_t s = 0; s < cfg.boundary_points; ++s) {
    const auto a = boundary_on_ray(base, base.interior_point(), random_unit(base.dim(), rng), 4.0 * diam);
    if (!a) continue;
    ++out.points_tested;
    bool all_boundary = true;
    for (std::size_t k = 0; k < cfg.heights && all_boundary; ++k) {
      Point x = *a;
      x[last] = lo[last] - span + 3.0 * span * static_cast<double>(k) / static_cast<double>(cfg.heights - 1);
      all_boundary = near_boundary(base, x, delta);
    }
    if (all_boundary) {
      out.holds = false;
      out.witness = *a;
      return out;
    }
  }
  return out;
}

/// H of codimension 1: x_{2n-1} = a_{2n-1} - b . (x' - a'); of codimension 2:
/// b . (x' - a') = b~ . (x' - a') = 0.
struct RealAffineSubspace {
  int codim = 1;
  Point a;
  Point b;

  bool contains(const Point& x, double tol = 1e-12) const {
    const std::size_t m = b.size();
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += b[j] * (x[j] - a[j]);
    if (codim == 1) return std::abs(x[m] - a[m] + s) <= tol;
    const Point bt = companion(b);
    double s2 = 0.0;
    for (std::size_t j = 0; j < m; ++j) s2 += bt[j] * (x[j] - a[j]);
    return std::abs(s) <= tol && std::abs(s2) <= tol;
  }

  /// b~_j = -b_{j+1} for odd j, b_{j-1} for even j (1-based).
  static Point companion(const Point& b) {
    Point t(b.size());
    for (std::size_t k = 0; k + 1 < b.size(); k += 2) {
      t[k] = -b[k + 1];
      t[k + 1] = b[k];
    }
    return t;
  }
};

inline bool is_zero(const Point& b) {
  return std::all_of(b.begin(), b.end(), [](double v) { return v == 0.0; });
}

inline RealAffineSubspace hyperplane_from_b(const Point& a, const Point& b, int codim) {
  if (codim != 1 && codim != 2) throw ArgumentError("codimension must be 1 or 2");
  if (a.size() != b.size() + 1 || b.size() % 2 != 0) throw ArgumentError("expected a in R^{2n-1}, b in R^{2n-2}");
  if (codim == 2 && is_zero(b)) throw ArgumentError("codimension 2 requires b != 0");
  return RealAffineSubspace{codim, a, b};
}

/// alpha_j = b_{2j-1} - i b_{2j}; alpha_n = 0 (codim 2) or 1 (codim 1).
inline CVec alpha_from_b(const Point& b, int codim) {
  if (codim != 1 && codim != 2) throw ArgumentError("codimension must be 1 or 2");
  if (b.size() % 2 != 0) throw ArgumentError("b must have even length");
  if (codim == 2 && is_zero(b)) throw ArgumentError("codimension 2 requires b != 0");
  CVec alpha;
  for (std::size_t k = 0; k < b.size(); k += 2) alpha.emplace_back(b[k], -b[k + 1]);
  alpha.emplace_back(codim == 2 ? 0.0 : 1.0);
  return alpha;
}

/// b_{2j-1} = Re alpha_j, b_{2j} = -Im alpha_j, after scaling alpha_n to 1 when nonzero.
inline Point b_from_alpha(const CVec& alpha) {
  if (alpha.empty() || std::all_of(alpha.begin(), alpha.end(), [](cplx c) { return c == cplx(0.0); }))
    throw ArgumentError("alpha must be nonzero");
  const cplx scale = alpha.back() == cplx(0.0) ? cplx(1.0) : alpha.back();
  Point b;
  for (std::size_t j = 0; j + 1 < alpha.size(); ++j) {
    const cplx a = alpha[j] / scale;
    b.push_back(a.real());
    b.push_back(-a.imag());
  }
  return b;
}

/// Complex hyperplane {z : alpha . (z - anchor) = 0} (no conjugation).
inline bool on_complex_hyperplane(const CVec& alpha, const CVec& anchor, const CVec& z, double tol = 1e-12) {
  cplx s{};
  for (std::size_t j = 0; j < alpha.size(); ++j) s += alpha[j] * (z[j] - anchor[j]);
  return std::abs(s) <= tol;
}

struct LinConvexConfig {
  std::size_t exterior_points = 50;
  double grid_degrees = 2.0;
  std::size_t plane_samples = 48;  // per axis
  std::size_t fine_divisions = 256;  // in-plane spacing is diameter / fine_divisions
  std::size_t random_directions = 20000;  // used when n = 3
  double offset = 0.02;               // exterior distance, relative to the diameter
  unsigned long long seed = 0;
};

struct LinConvexPoint {
  Point a;
  bool success = false;
  int codim = 0;
  Point b;
};

struct LinConvexReport {
  std::vector<LinConvexPoint> points;
  std::size_t successes() const {
    return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [](const auto& p) { return p.success; }));
  }
};

namespace detail {

/// Coarse-to-fine sweep of the plane H (codimension 1, n = 2) over a square
/// covering the sampling box, at spacing diameter / fine_divisions.
inline bool misses_in_plane(const Base& base, const RealAffineSubspace& H, const LinConvexConfig& cfg) {
  const Point lo = base.lo(), hi = base.hi();
  Point v{H.b[0], H.b[1], 1.0};
  const double vn = std::sqrt(v[0] * v[0] + v[1] * v[1] + 1.0);
  for (auto& c : v) c /= vn;
  Point u1 = std::abs(v[0]) < 0.9 ? Point{1.0, 0.0, 0.0} : Point{0.0, 1.0, 0.0};
  double dot = u1[0] * v[0] + u1[1] * v[1] + u1[2] * v[2];
  for (int i = 0; i < 3; ++i) u1[i] -= dot * v[i];
  const double n1 = std::sqrt(u1[0] * u1[0] + u1[1] * u1[1] + u1[2] * u1[2]);
  for (auto& c : u1) c /= n1;
  const Point u2{v[1] * u1[2] - v[2] * u1[1], v[2] * u1[0] - v[0] * u1[2], v[0] * u1[1] - v[1] * u1[0]};
  double reach = 0.0;
  for (int i = 0; i < 3; ++i) reach += std::pow(H.a[i] - 0.5 * (lo[i] + hi[i]), 2);
  const double diam = base.diameter();
  const double L = std::sqrt(reach) + 0.5 * diam;
  std::size_t k = 1;
  while (static_cast<double>(k) < 2.0 * L / (diam / static_cast<double>(cfg.fine_divisions))) k *= 2;
  const double h = 2.0 * L / static_cast<double>(k);
  Point x(3);
  for (std::size_t stride = k; stride >= 1; stride /= 2) {
    for (std::size_t i = 0; i <= k; i += stride) {
      for (std::size_t j = 0; j <= k; j += stride) {
        if (stride < k && i % (2 * stride) == 0 && j % (2 * stride) == 0) continue;
        const double s = -L + h * static_cast<double>(i), t = -L + h * static_cast<double>(j);
        for (int c = 0; c < 3; ++c) x[c] = H.a[c] + s * u1[c] + t * u2[c];
        if (base.contains(x)) return false;
      }
    }
  }
  return true;
}

/// Samples H inside the horizontal extent of the sampling box.
inline bool misses_base(const Base& base, const RealAffineSubspace& H, const LinConvexConfig& cfg) {
  const Point lo = base.lo(), hi = base.hi();
  const std::size_t dim = base.dim();
  const std::size_t m = dim - 1;
  const std::size_t k = cfg.plane_samples;
  Point x(dim);
  if (H.codim == 2 && base.n == 2) {
    const double span = hi[m] - lo[m];
    x[0] = H.a[0];
    x[1] = H.a[1];
    for (std::size_t s = 0; s < k * k; ++s) {
      x[m] = lo[m] - span + 3.0 * span * static_cast<double>(s) / static_cast<double>(k * k - 1);
      if (base.contains(x)) return false;
    }
    return true;
  }
  if (H.codim == 1 && base.n == 2) {
    if (!misses_in_plane(base, H, cfg)) return false;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        x[0] = lo[0] + (hi[0] - lo[0]) * static_cast<double>(i) / static_cast<double>(k - 1);
        x[1] = lo[1] + (hi[1] - lo[1]) * static_cast<double>(j) / static_cast<double>(k - 1);
        x[2] = H.a[2] - H.b[0] * (x[0] - H.a[0]) - H.b[1] * (x[1] - H.a[1]);
        if (base.contains(x)) return false;
      }
    }
    return true;
  }
  // n = 3: random points of H in the box.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t samples = k * k * 4;
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t i = 0; i < dim; ++i) x[i] = lo[i] + (hi[i] - lo[i]) * unit(rng);
    if (H.codim == 1) {
      double dot = 0.0;
      for (std::size_t j = 0; j < m; ++j) dot += H.b[j] * (x[j] - H.a[j]);
      x[m] = H.a[m] - dot;
    } else {
      // project x' onto the complex hyperplane of C^{n-1} through a'
      const CVec alpha = alpha_from_b(H.b, 2);
      CVec zp;
      for (std::size_t j = 0; j < m; j += 2) zp.emplace_back(x[j] - H.a[j], x[j + 1] - H.a[j + 1]);
      cplx num{};
      double den = 0.0;
      for (std::size_t j = 0; j < zp.size(); ++j) {
        num += alpha[j] * zp[j];
        den += std::norm(alpha[j]);
      }
      for (std::size_t j = 0; j < zp.size(); ++j) zp[j] -= num * std::conj(alpha[j]) / den;
      for (std::size_t j = 0; j < zp.size(); ++j) {
        x[2 * j] = H.a[2 * j] + zp[j].real();
        x[2 * j + 1] = H.a[2 * j + 1] + zp[j].imag();
      }
    }
    if (base.contains(x)) return false;
  }
  return true;
}

/// Candidate unit normals (b, 1)/|(b, 1)| of codimension-1 graphs, sorted by
/// closeness to `outward`.
inline std::vector<Point> codim1_normals(std::size_t dim, const Point& outward, const LinConvexConfig& cfg) {
  std::vector<Point> normals;
  if (dim == 3) {
    const double step = cfg.grid_degrees * std::numbers::pi / 180.0;
    for (double polar = 0.0; polar < std::numbers::pi / 2.0 - 1e-9; polar += step) {
      const std::size_t az = polar == 0.0 ? 1 : static_cast<std::size_t>(std::ceil(kTwoPi * std::sin(polar) / step));
      for (std::size_t k = 0; k < az; ++k) {
        const double phi = kTwoPi * static_cast<double>(k) / static_cast<double>(az);
        normals.push_back({std::sin(polar) * std::cos(phi), std::sin(polar) * std::sin(phi), std::cos(polar)});
      }
    }
  } else {
    std::mt19937_64 rng(cfg.seed + 1);
    for (std::size_t s = 0; s < cfg.random_directions; ++s) {
      Point v = random_unit(dim, rng);
      if (v.back() < 0) for (auto& c : v) c = -c;
      if (v.back() < 1e-3) continue;
      normals.push_back(std::move(v));
    }
  }
  auto score = [&](const Point& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < dim; ++i) s += v[i] * outward[i];
    return -std::abs(s);
  };
  std::stable_sort(normals.begin(), normals.end(), [&](const Point& a, const Point& b) { return score(a) < score(b); });
  return normals;
}

}  // namespace detail

/// Searches an H through a, of the two admissible forms, that misses the base.
inline LinConvexPoint linear_convexity_at(const Base& base, const Point& a, const LinConvexConfig& cfg = {}) {
  LinConvexPoint out{a, false, 0, {}};
  if (base.contains(a)) throw ArgumentError("linear convexity probe must lie outside the base");
  const std::size_t dim = base.dim();
  Point outward(dim);
  const Point c = base.interior_point();
  for (std::size_t i = 0; i < dim; ++i) outward[i] = a[i] - c[i];
  for (const auto& v : detail::codim1_normals(dim, outward, cfg)) {
    Point b(v.begin(), v.end() - 1);
    for (auto& x : b) x /= v.back();
    const auto H = hyperplane_from_b(a, b, 1);
    if (detail::misses_base(base, H, cfg)) {
      out.success = true;
      out.codim = 1;
      out.b = b;
      return out;
    }
  }
  std::vector<Point> dirs;
  if (base.n == 2) {
    dirs.push_back({1.0, 0.0});
  } else {
    std::mt19937_64 rng(cfg.seed + 2);
    for (std::size_t s = 0; s < cfg.random_directions; ++s) dirs.push_back(random_unit(dim - 1, rng));
  }
  for (const auto& b : dirs) {
    const auto H = hyperplane_from_b(a, b, 2);
    if (detail::misses_base(base, H, cfg)) {
      out.success = true;
      out.codim = 2;
      out.b = b;
      return out;
    }
  }
  return out;
}

inline LinConvexReport linear_convexity_scan(const Base& base, const LinConvexConfig& cfg = {}) {
  base.validate();
  std::mt19937_64 rng(cfg.seed);
  const double diam = base.diameter();
  std::vector<Point> probes;
  for (std::size_t attempt = 0; probes.size() < cfg.exterior_points && attempt < 100 * cfg.exterior_points; ++attempt) {
    const Point dir = random_unit(base.dim(), rng);
    const auto bnd = boundary_on_ray(base, base.interior_point(), dir, 4.0 * diam);
    if (!bnd) continue;
    Point a = *bnd;
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += cfg.offset * diam * dir[i];
    if (!base.contains(a)) probes.push_back(std::move(a));
  }
  LinConvexReport rep;
  rep.points.resize(probes.size());
  parallel_for(probes.size(), [&](std::size_t i) { rep.points[i] = linear_convexity_at(base, probes[i], cfg); });
  return rep;
}

struct HarnessConfig {
  ScanConfig scan;
  SamplerConfig convexity;
  FiberConfig fiber;
};

struct HarnessRecord {
  std::string base;
  FiberResult fiber;
  ConvexityResult convexity;
  ScanReport scan;
  bool applicable = true;  // fiber condition holds
  bool consistent = true;
  std::string note;
};

/// Convexity and the line-section scan must agree whenever the fiber
/// condition holds.
inline HarnessRecord run_harness(const Base& base, const HarnessConfig& cfg = {}) {
  HarnessRecord rec;
  rec.base = base.name;
  rec.fiber = fiber_condition_check(base, cfg.fiber);
  rec.convexity = convexity_check(base, cfg.convexity);
  rec.scan = cconvexity_scan(base, cfg.scan);
  rec.applicable = rec.fiber.holds;
  const bool scan_clean = rec.scan.violations == 0;
  rec.consistent = !rec.applicable || rec.convexity.convex == scan_clean;
  if (!rec.applicable) {
    rec.note = "fiber condition fails: the convexity equivalence does not apply; sampled convexity " +
               std::string(rec.convexity.convex ? "true" : "false") + ", scan " +
               (scan_clean ? "clean" : "with violations");
  } else {
    rec.note = std::string(rec.consistent ? "consistent" : "inconsistent") + ": convexity " +
               (rec.convexity.convex ? "true" : "false") + ", scan " + (scan_clean ? "clean" : "with violations");
  }
  return rec;
}

}  // namespace geolab::semitube
