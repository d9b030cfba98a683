#pragma once

// Built-in convex domains of class A_d^n with closed-form support maps.
//
//   semiball        |z1|^2 + (Re z2)^2 < 1                    n = 2, d = 1
//   paraboloid      Re z2 > |z1|^2                            n = 2, d = 1
//   euclidean_ball  ||z|| < r                                 any n, d = 0
//   tube_polygon    (Re z1, Re z2) in a convex polygon         n = 2, d = 2
//
// Vectors v in C^{n-d} x R^d are stored as complex vectors whose last d
// entries have zero imaginary part.

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "geolab/circle.hpp"
#include "geolab/error.hpp"

namespace geolab {

enum class DomainKind { semiball, paraboloid, euclidean_ball, tube_polygon };

inline std::string to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::semiball: return "semiball";
    case DomainKind::paraboloid: return "paraboloid";
    case DomainKind::euclidean_ball: return "euclidean_ball";
    case DomainKind::tube_polygon: return "tube_polygon";
  }
  return "unknown";
}

inline DomainKind domain_kind_from_string(const std::string& s) {
  if (s == "semiball") return DomainKind::semiball;
  if (s == "paraboloid") return DomainKind::paraboloid;
  if (s == "euclidean_ball" || s == "ball") return DomainKind::euclidean_ball;
  if (s == "tube_polygon") return DomainKind::tube_polygon;
  throw ConfigError("unknown domain kind '" + s + "'");
}

struct DomainDescriptor {
  DomainKind kind = DomainKind::semiball;
  std::size_t n = 2;
  std::size_t d = 1;
  double radius = 1.0;
  std::vector<std::array<double, 2>> vertices;  // counter-clockwise, tube_polygon only

  static DomainDescriptor semiball() { return {DomainKind::semiball, 2, 1, 1.0, {}}; }
  static DomainDescriptor paraboloid() { return {DomainKind::paraboloid, 2, 1, 1.0, {}}; }
  static DomainDescriptor euclidean_ball(std::size_t n, double radius = 1.0) {
    return {DomainKind::euclidean_ball, n, 0, radius, {}};
  }
  static DomainDescriptor tube_polygon(std::vector<std::array<double, 2>> vertices) {
    DomainDescriptor dom{DomainKind::tube_polygon, 2, 2, 1.0, std::move(vertices)};
    dom.validate();
    return dom;
  }

  void validate() const {
    switch (kind) {
      case DomainKind::semiball:
      case DomainKind::paraboloid:
        if (n != 2 || d != 1) throw ValidationError(to_string(kind) + " requires n = 2, d = 1");
        break;
      case DomainKind::euclidean_ball:
        if (d != 0 || n == 0) throw ValidationError("euclidean_ball requires d = 0");
        if (!(radius > 0)) throw ValidationError("euclidean_ball radius must be positive");
        break;
      case DomainKind::tube_polygon: {
        if (n != 2 || d != 2) throw ValidationError("tube_polygon requires n = 2, d = 2");
        if (vertices.size() < 3) throw ValidationError("tube_polygon needs at least 3 vertices");
        const std::size_t m = vertices.size();
        for (std::size_t i = 0; i < m; ++i) {
          const auto& p = vertices[i];
          const auto& q = vertices[(i + 1) % m];
          const auto& r = vertices[(i + 2) % m];
          const double cross = (q[0] - p[0]) * (r[1] - q[1]) - (q[1] - p[1]) * (r[0] - q[0]);
          if (cross <= 0) throw ValidationError("tube_polygon vertices must be strictly convex and counter-clockwise");
        }
        break;
      }
    }
  }
};

inline DomainDescriptor builtin_domain(const std::string& name) {
  if (name == "semiball") return DomainDescriptor::semiball();
  if (name == "paraboloid") return DomainDescriptor::paraboloid();
  if (name == "ball" || name == "euclidean_ball") return DomainDescriptor::euclidean_ball(2);
  if (name == "tube_square") return DomainDescriptor::tube_polygon({{{-1, -1}}, {{1, -1}}, {{1, 1}}, {{-1, 1}}});
  throw ConfigError("unknown built-in domain '" + name + "'");
}

struct Membership {
  bool inside = false;
  double margin = 0.0;  // defining-function value, positive inside
};

inline Membership contains(const DomainDescriptor& dom, const CVec& z) {
  if (z.size() != dom.n) throw ArgumentError("contains: point has wrong dimension");
  double margin = 0.0;
  switch (dom.kind) {
    case DomainKind::semiball:
      margin = 1.0 - std::norm(z[0]) - z[1].real() * z[1].real();
      break;
    case DomainKind::paraboloid:
      margin = z[1].real() - std::norm(z[0]);
      break;
    case DomainKind::euclidean_ball: {
      double s = 0.0;
      for (const auto& c : z) s += std::norm(c);
      margin = dom.radius * dom.radius - s;
      break;
    }
    case DomainKind::tube_polygon: {
      const double x = z[0].real(), y = z[1].real();
      margin = INFINITY;
      const std::size_t m = dom.vertices.size();
      for (std::size_t i = 0; i < m; ++i) {
        const auto& p = dom.vertices[i];
        const auto& q = dom.vertices[(i + 1) % m];
        const double ex = q[0] - p[0], ey = q[1] - p[1];
        const double len = std::hypot(ex, ey);
        // inward normal of a counter-clockwise edge is (-ey, ex)
        margin = std::min(margin, ((x - p[0]) * (-ey) + (y - p[1]) * ex) / len);
      }
      break;
    }
  }
  return {margin > 0.0, margin};
}

/// Element of P_D(v), a boundary point maximizing Re(z . v).
struct SupportPoint {
  CVec point;
  CVec direction;
};

inline bool is_zero(const CVec& v) {
  for (const auto& c : v)
    if (c != cplx{}) return false;
  return true;
}

inline double norm(const CVec& v) {
  double s = 0.0;
  for (const auto& c : v) s += std::norm(c);
  return std::sqrt(s);
}

inline cplx dot(const CVec& a, const CVec& b) {
  cplx s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// v must lie in C^{n-d} x R^d.
inline bool in_direction_space(const DomainDescriptor& dom, const CVec& v) {
  if (v.size() != dom.n) return false;
  for (std::size_t j = dom.n - dom.d; j < dom.n; ++j)
    if (v[j].imag() != 0.0) return false;
  return true;
}

/// The unique element of P_D(v), or nullopt when P_D(v) is empty.
inline std::optional<SupportPoint> support_point(const DomainDescriptor& dom, const CVec& v) {
  if (v.size() != dom.n) throw ArgumentError("support_point: direction has wrong dimension");
  if (is_zero(v)) throw ArgumentError("support_point: direction must be nonzero");
  if (!in_direction_space(dom, v)) return std::nullopt;
  switch (dom.kind) {
    case DomainKind::semiball:
    case DomainKind::euclidean_ball: {
      const double r = dom.kind == DomainKind::semiball ? 1.0 : dom.radius;
      const double nv = norm(v);
      CVec p(dom.n);
      for (std::size_t j = 0; j < dom.n; ++j) p[j] = r * std::conj(v[j]) / nv;
      return SupportPoint{p, v};
    }
    case DomainKind::paraboloid: {
      const double v2 = v[1].real();
      if (!(v2 < 0.0)) return std::nullopt;
      const cplx q = v[0] / (2.0 * v2);
      return SupportPoint{{-std::conj(v[0]) / (2.0 * v2), std::norm(q)}, v};
    }
    case DomainKind::tube_polygon: {
      const double vx = v[0].real(), vy = v[1].real();
      const std::size_t m = dom.vertices.size();
      std::size_t best = 0;
      double best_val = -INFINITY;
      double scale = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double val = vx * dom.vertices[i][0] + vy * dom.vertices[i][1];
        scale = std::max(scale, std::abs(val));
        if (val > best_val) {
          best_val = val;
          best = i;
        }
      }
      const double tie_tol = 1e-12 * std::max(1.0, scale);
      for (std::size_t i = 0; i < m; ++i) {
        if (i == best) continue;
        const double val = vx * dom.vertices[i][0] + vy * dom.vertices[i][1];
        if (best_val - val <= tie_tol) {
          throw NonSingletonSupport("support set of the polygon tube in this direction is an edge");
        }
      }
      return SupportPoint{{dom.vertices[best][0], dom.vertices[best][1]}, v};
    }
  }
  return std::nullopt;
}

/// v in W_D: Re(z . v) bounded above on D.
inline bool in_WD(const DomainDescriptor& dom, const CVec& v) {
  if (!in_direction_space(dom, v)) return false;
  switch (dom.kind) {
    case DomainKind::paraboloid:
      return v[1].real() < 0.0 || is_zero(v);
    case DomainKind::semiball:
    case DomainKind::euclidean_ball:
    case DomainKind::tube_polygon:
      return true;
  }
  return false;
}

/// y in S_D, the real cone of directions dual-negative to W_D.
inline bool in_SD(const DomainDescriptor& dom, const RVec& y) {
  if (y.size() != dom.d) return false;
  switch (dom.kind) {
    case DomainKind::paraboloid:
      return y[0] >= 0.0;
    case DomainKind::semiball:
    case DomainKind::euclidean_ball:
    case DomainKind::tube_polygon:
      for (double c : y)
        if (c != 0.0) return false;
      return true;
  }
  return false;
}

/// True when S_D contains a nonzero vector (atoms are possible).
inline bool has_nontrivial_SD(const DomainDescriptor& dom) { return dom.kind == DomainKind::paraboloid; }

/// Bounded image under the projection onto the first n - d coordinates.
inline bool bounded_projection(const DomainDescriptor& dom) { return dom.kind != DomainKind::paraboloid; }

/// Real sampling box: lo/hi for (Re z_1, Im z_1, ..., Re z_n, Im z_n).
struct SampleBox {
  RVec lo, hi;
};

inline SampleBox sample_box(const DomainDescriptor& dom) {
  SampleBox box{RVec(2 * dom.n), RVec(2 * dom.n)};
  auto set = [&](std::size_t j, double rlo, double rhi, double ilo, double ihi) {
    box.lo[2 * j] = rlo;
    box.hi[2 * j] = rhi;
    box.lo[2 * j + 1] = ilo;
    box.hi[2 * j + 1] = ihi;
  };
  switch (dom.kind) {
    case DomainKind::semiball:
      set(0, -1, 1, -1, 1);
      set(1, -1, 1, -3, 3);
      break;
    case DomainKind::paraboloid:
      set(0, -2, 2, -2, 2);
      set(1, 0, 4, -3, 3);
      break;
    case DomainKind::euclidean_ball:
      for (std::size_t j = 0; j < dom.n; ++j) set(j, -dom.radius, dom.radius, -dom.radius, dom.radius);
      break;
    case DomainKind::tube_polygon: {
      double xlo = INFINITY, xhi = -INFINITY, ylo = INFINITY, yhi = -INFINITY;
      for (const auto& v : dom.vertices) {
        xlo = std::min(xlo, v[0]);
        xhi = std::max(xhi, v[0]);
        ylo = std::min(ylo, v[1]);
        yhi = std::max(yhi, v[1]);
      }
      set(0, xlo, xhi, -3, 3);
      set(1, ylo, yhi, -3, 3);
      break;
    }
  }
  return box;
}

/// Rejection sample of a point with margin in (min_margin, max_margin).
template <typename Rng>
CVec sample_in_domain(const DomainDescriptor& dom, Rng& rng, double min_margin = 0.0,
                      double max_margin = INFINITY) {
  const SampleBox box = sample_box(dom);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int attempt = 0; attempt < 10'000'000; ++attempt) {
    CVec z(dom.n);
    for (std::size_t j = 0; j < dom.n; ++j) {
      const double re = box.lo[2 * j] + u(rng) * (box.hi[2 * j] - box.lo[2 * j]);
      const double im = box.lo[2 * j + 1] + u(rng) * (box.hi[2 * j + 1] - box.lo[2 * j + 1]);
      z[j] = {re, im};
    }
    const double m = contains(dom, z).margin;
    if (m > min_margin && m < max_margin) return z;
  }
  throw PipelineError("sample_in_domain: rejection sampling failed");
}

/// Point of D within defining-function margin `band` of the boundary.
template <typename Rng>
CVec sample_near_boundary(const DomainDescriptor& dom, Rng& rng, double band = 0.05) {
  return sample_in_domain(dom, rng, 0.0, band);
}

/// Rejection sample of a direction in the interior of W_D.
template <typename Rng>
CVec sample_cone_interior(const DomainDescriptor& dom, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  for (int attempt = 0; attempt < 1'000'000; ++attempt) {
    CVec v(dom.n);
    for (std::size_t j = 0; j < dom.n; ++j) v[j] = (j < dom.n - dom.d) ? cplx(g(rng), g(rng)) : cplx(g(rng), 0.0);
    if (is_zero(v) || !in_WD(dom, v)) continue;
    if (dom.kind == DomainKind::paraboloid && v[1].real() > -1e-3) continue;
    return v;
  }
  throw PipelineError("sample_cone_interior: rejection sampling failed");
}

}  // namespace geolab
