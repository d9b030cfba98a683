#pragma once

// Spectral calculus on the unit circle: uniform grids, Fourier tables,
// Poisson and Schwarz extensions of boundary measures, and the split of a
// holomorphic representation into its absolutely continuous and singular
// parts.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "geolab/error.hpp"
#include "geolab/fft.hpp"

namespace geolab {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;
using RVec = std::vector<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kDefaultRim = 1e-6;

/// Uniform grid on the unit circle, theta_k = 2 pi k / N.
class CircleGrid {
 public:
  explicit CircleGrid(std::size_t size = 256) : size_(size) {
    if (size < 8 || (size & (size - 1)) != 0) {
      throw ConfigError("circle grid size must be a power of two >= 8, got " +
                        std::to_string(size));
    }
  }

  std::size_t size() const { return size_; }
  double theta(std::size_t k) const { return kTwoPi * static_cast<double>(k) / static_cast<double>(size_); }
  cplx node(std::size_t k) const { return std::polar(1.0, theta(k)); }

  /// Index of the node closest to angle (any real).
  std::size_t nearest_node(double angle) const {
    double t = std::fmod(angle, kTwoPi);
    if (t < 0) t += kTwoPi;
    auto k = static_cast<std::size_t>(std::llround(t / kTwoPi * static_cast<double>(size_)));
    return k % size_;
  }

  friend bool operator==(const CircleGrid&, const CircleGrid&) = default;

 private:
  std::size_t size_;
};

/// Two-sided Fourier coefficients, frequencies -N/2 .. N/2-1, per component.
struct FourierTable {
  std::size_t size = 0;
  std::vector<CVec> coeffs;  // coeffs[j][f + N/2]

  cplx at(std::size_t component, long freq) const {
    const long half = static_cast<long>(size / 2);
    if (freq < -half || freq >= half) return {};
    return coeffs[component][static_cast<std::size_t>(freq + half)];
  }
};

inline FourierTable fourier_coefficients(const CircleGrid& grid, const std::vector<CVec>& values) {
  const std::size_t N = grid.size();
  FourierTable table{N, {}};
  table.coeffs.reserve(values.size());
  for (const auto& v : values) {
    if (v.size() != N) throw ConfigError("signal component length does not match grid size");
    CVec spectrum = fft::forward(v);
    CVec two_sided(N);
    const double scale = 1.0 / static_cast<double>(N);
    for (std::size_t m = 0; m < N; ++m) {
      // DFT bin m holds frequency m for m < N/2 and m - N otherwise.
      const std::size_t slot = (m < N / 2) ? m + N / 2 : m - N / 2;
      two_sided[slot] = spectrum[m] * scale;
    }
    table.coeffs.push_back(std::move(two_sided));
  }
  return table;
}

/// Samples of a C^n-valued function on the grid, with its Fourier table.
class BoundarySignal {
 public:
  BoundarySignal(CircleGrid grid, std::vector<CVec> values)
      : grid_(grid), values_(std::move(values)), coeffs_(fourier_coefficients(grid_, values_)) {}

  template <typename F>
  static BoundarySignal sample(const CircleGrid& grid, std::size_t components, F&& f) {
    std::vector<CVec> values(components, CVec(grid.size()));
    for (std::size_t k = 0; k < grid.size(); ++k) {
      CVec v = f(grid.node(k));
      for (std::size_t j = 0; j < components; ++j) values[j][k] = v[j];
    }
    return BoundarySignal(grid, std::move(values));
  }

  const CircleGrid& grid() const { return grid_; }
  std::size_t components() const { return values_.size(); }
  const std::vector<CVec>& values() const { return values_; }
  const FourierTable& coeffs() const { return coeffs_; }

  /// Values reproduced from the Fourier table (inverse transform).
  std::vector<CVec> synthesize() const {
    const std::size_t N = grid_.size();
    std::vector<CVec> out;
    for (const auto& two_sided : coeffs_.coeffs) {
      CVec bins(N);
      for (std::size_t slot = 0; slot < N; ++slot) {
        const std::size_t m = (slot >= N / 2) ? slot - N / 2 : slot + N / 2;
        bins[m] = two_sided[slot];
      }
      out.push_back(fft::backward(bins));
    }
    return out;
  }

  /// Trigonometric interpolant evaluated at an arbitrary angle.
  CVec interpolate(double angle) const {
    const long half = static_cast<long>(grid_.size() / 2);
    CVec out(components());
    for (std::size_t j = 0; j < components(); ++j) {
      cplx acc{};
      for (long f = -half; f < half; ++f) acc += coeffs_.at(j, f) * std::polar(1.0, static_cast<double>(f) * angle);
      out[j] = acc;
    }
    return out;
  }

 private:
  CircleGrid grid_;
  std::vector<CVec> values_;
  FourierTable coeffs_;
};

/// Point mass alpha * rho at exp(i angle), acting on the last d components.
struct Atom {
  double angle = 0.0;
  double weight = 0.0;
  RVec direction;

  cplx point() const { return std::polar(1.0, angle); }
};

inline void validate_atom(const Atom& atom, std::size_t d) {
  if (!(atom.weight >= 0.0) || !std::isfinite(atom.weight)) throw ValidationError("atom weight must be finite and nonnegative");
  if (atom.direction.size() != d) throw ValidationError("atom direction must have length d");
  double norm2 = 0.0;
  for (double r : atom.direction) norm2 += r * r;
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-12) throw ValidationError("atom direction must be a unit vector");
}

/// (alpha / 2 pi) (zeta0 + lambda) / (zeta0 - lambda), the holomorphic
/// extension of a point mass of weight alpha at zeta0.
inline cplx cayley_term(const Atom& atom, cplx lambda) {
  const cplx z0 = atom.point();
  return atom.weight / kTwoPi * (z0 + lambda) / (z0 - lambda);
}

/// Density g dL_T on the grid (L_T of total mass 2 pi) plus finitely many atoms.
struct BoundaryMeasure {
  CircleGrid grid{256};
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<RVec> density;  // n components, N samples each
  std::vector<Atom> atoms;

  static BoundaryMeasure zero(CircleGrid grid, std::size_t n, std::size_t d) {
    return BoundaryMeasure{grid, n, d, std::vector<RVec>(n, RVec(grid.size(), 0.0)), {}};
  }

  void validate() const {
    if (d > n) throw ValidationError("measure: d exceeds n");
    if (density.size() != n) throw ValidationError("measure: density must have n components");
    for (const auto& g : density)
      if (g.size() != grid.size()) throw ValidationError("measure: density length does not match grid");
    for (const auto& a : atoms) validate_atom(a, d);
  }

  /// Total mass per component.
  RVec total_mass() const {
    RVec mass(n, 0.0);
    const double w = kTwoPi / static_cast<double>(grid.size());
    for (std::size_t j = 0; j < n; ++j)
      for (double g : density[j]) mass[j] += w * g;
    for (const auto& a : atoms)
      for (std::size_t i = 0; i < d; ++i) mass[n - d + i] += a.weight * a.direction[i];
    return mass;
  }
};

inline void check_rim(cplx lambda, double rim) {
  if (std::abs(lambda) > 1.0 - rim) {
    throw RimError("evaluation point |lambda| = " + std::to_string(std::abs(lambda)) +
                   " is within the evaluation rim of the unit circle");
  }
}

/// Truncated Taylor series at 0 plus Cayley-type atom terms plus an
/// imaginary constant:
///   value_j(lambda) = sum_m c_{j,m} lambda^m + [atoms]_j + i imconst_j.
struct HoloRep {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<CVec> taylor;  // taylor[j][m]
  std::vector<Atom> atoms;   // act on the last d components
  RVec imconst;              // length n

  static HoloRep zero(std::size_t n, std::size_t d) {
    return HoloRep{n, d, std::vector<CVec>(n, CVec{cplx{}}), {}, RVec(n, 0.0)};
  }

  /// Absolutely continuous part only: Taylor series plus imaginary constant.
  CVec eval_regular(cplx lambda) const {
    CVec out(n);
    for (std::size_t j = 0; j < n; ++j) {
      cplx acc{};
      for (auto it = taylor[j].rbegin(); it != taylor[j].rend(); ++it) acc = acc * lambda + *it;
      out[j] = acc + cplx(0.0, imconst[j]);
    }
    return out;
  }

  CVec eval(cplx lambda) const {
    CVec out = eval_regular(lambda);
    for (const auto& a : atoms) {
      const cplx c = cayley_term(a, lambda);
      for (std::size_t i = 0; i < d; ++i) out[n - d + i] += c * a.direction[i];
    }
    return out;
  }

  /// (value(lambda) - value(0)) / lambda, computed without cancellation:
  /// shifted Horner for the series, 2/(zeta0 - lambda) for each atom.
  CVec difference_quotient(cplx lambda) const {
    CVec out(n);
    for (std::size_t j = 0; j < n; ++j) {
      cplx acc{};
      for (std::size_t m = taylor[j].size(); m-- > 1;) acc = acc * lambda + taylor[j][m];
      out[j] = acc;
    }
    for (const auto& a : atoms) {
      const cplx q = a.weight / kTwoPi * 2.0 / (a.point() - lambda);
      for (std::size_t i = 0; i < d; ++i) out[n - d + i] += q * a.direction[i];
    }
    return out;
  }

  CVec derivative_at_zero() const { return difference_quotient(0.0); }

  std::size_t degree() const {
    std::size_t deg = 0;
    for (const auto& t : taylor) deg = std::max(deg, t.empty() ? 0 : t.size() - 1);
    return deg;
  }
};

/// Taylor coefficients of the Schwarz integral of a real density:
/// c_0 = ghat_0, c_m = 2 ghat_m (1 <= m <= M).
inline CVec schwarz_taylor(const CircleGrid& grid, const RVec& density, std::size_t max_degree) {
  CVec values(density.begin(), density.end());
  const FourierTable table = fourier_coefficients(grid, {values});
  CVec c(max_degree + 1);
  c[0] = table.at(0, 0).real();
  for (std::size_t m = 1; m <= max_degree; ++m) c[m] = 2.0 * table.at(0, static_cast<long>(m));
  return c;
}

inline std::size_t default_degree(const CircleGrid& grid) { return grid.size() / 2 - 1; }

/// Harmonic extension (1/2pi) \int P(lambda, zeta) dmu(zeta). The density
/// part is the real part of the Schwarz series built from trapezoidal
/// Fourier coefficients; atoms are added in closed form.
inline RVec poisson_extend(const BoundaryMeasure& measure, cplx lambda, double rim = kDefaultRim) {
  check_rim(lambda, rim);
  measure.validate();
  const std::size_t M = default_degree(measure.grid);
  RVec out(measure.n, 0.0);
  for (std::size_t j = 0; j < measure.n; ++j) {
    const CVec c = schwarz_taylor(measure.grid, measure.density[j], M);
    cplx acc{};
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * lambda + *it;
    out[j] = acc.real();
  }
  const double r2 = std::norm(lambda);
  for (const auto& a : measure.atoms) {
    const double p = a.weight / kTwoPi * (1.0 - r2) / std::norm(a.point() - lambda);
    for (std::size_t i = 0; i < measure.d; ++i) out[measure.n - measure.d + i] += p * a.direction[i];
  }
  return out;
}

/// Holomorphic map with boundary measure `measure` and Im value(0) = imconst.
inline HoloRep schwarz_rep(const BoundaryMeasure& measure, const RVec& imconst) {
  measure.validate();
  if (imconst.size() != measure.n) throw ValidationError("imconst must have n components");
  HoloRep rep{measure.n, measure.d, {}, measure.atoms, imconst};
  const std::size_t M = default_degree(measure.grid);
  for (std::size_t j = 0; j < measure.n; ++j) rep.taylor.push_back(schwarz_taylor(measure.grid, measure.density[j], M));
  return rep;
}

/// (1/2pi) \int (zeta+lambda)/(zeta-lambda) dmu(zeta) + i imconst.
inline CVec schwarz_extend(const BoundaryMeasure& measure, const RVec& imconst, cplx lambda,
                           double rim = kDefaultRim) {
  check_rim(lambda, rim);
  return schwarz_rep(measure, imconst).eval(lambda);
}

struct HardyResidual {
  double value = 0.0;
  bool degenerate = false;
};

/// Fraction of spectral energy at negative frequencies; 0 for boundary
/// values of a holomorphic function.
inline HardyResidual hardy_residual(const BoundarySignal& signal, std::size_t component) {
  if (component >= signal.components()) throw ArgumentError("hardy_residual: component out of range");
  const auto& c = signal.coeffs().coeffs[component];
  const std::size_t half = signal.grid().size() / 2;
  double negative = 0.0, total = 0.0;
  for (std::size_t slot = 0; slot < c.size(); ++slot) {
    const double e = std::norm(c[slot]);
    total += e;
    if (slot < half) negative += e;
  }
  if (total == 0.0) return {0.0, true};
  return {negative / total, false};
}

/// phi = phi^a + phi^s: the regular part keeps the series and imaginary
/// constant, the singular part keeps the atoms (Im phi^s(0) = 0).
inline std::pair<HoloRep, HoloRep> split_parts(const HoloRep& rep) {
  HoloRep regular = rep;
  regular.atoms.clear();
  HoloRep singular = HoloRep::zero(rep.n, rep.d);
  singular.atoms = rep.atoms;
  return {std::move(regular), std::move(singular)};
}

}  // namespace geolab
