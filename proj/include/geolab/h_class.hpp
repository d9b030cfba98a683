#pragma once

// Finite parametrization of dual maps h = (h_1, ..., h_n): free polynomial
// components followed by d constrained components whose boundary symbol
// conj(lambda) h_j(lambda) is real on the unit circle.

#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "geolab/circle.hpp"
#include "geolab/error.hpp"

namespace geolab {

/// h_j(lambda) = conj(a) lambda^2 + b lambda + a, with b real.
struct PairForm {
  cplx a{};
  cplx b{};  // complex storage so that non-real b can be represented and rejected
};

/// h_j(lambda) = sign * c * (lambda - d)(1 - conj(d) lambda), c >= 0, |d| <= 1.
/// On the circle the boundary symbol is sign * c * |lambda - d|^2.
struct PositiveForm {
  int sign = 1;
  double c = 0.0;
  cplx d_blaschke{};
};

using ConstrainedForm = std::variant<PairForm, PositiveForm>;

struct HParams {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<CVec> free;                   // n - d polynomial coefficient lists
  std::vector<ConstrainedForm> constrained;  // d entries
};

namespace poly {

inline cplx eval(const CVec& c, cplx x) {
  cplx acc{};
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

/// (p(x) - p(0)) / x.
inline cplx eval_quotient(const CVec& c, cplx x) {
  cplx acc{};
  for (std::size_t m = c.size(); m-- > 1;) acc = acc * x + c[m];
  return acc;
}

inline CVec multiply(const CVec& p, const CVec& q) {
  if (p.empty() || q.empty()) return {};
  CVec r(p.size() + q.size() - 1);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
  return r;
}

inline CVec power(const CVec& p, std::size_t k) {
  CVec r{1.0};
  for (std::size_t i = 0; i < k; ++i) r = multiply(r, p);
  return r;
}

inline void add_scaled(CVec& acc, const CVec& p, cplx s) {
  if (acc.size() < p.size()) acc.resize(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) acc[i] += s * p[i];
}

inline std::size_t effective_degree(const CVec& c, double tol = 0.0) {
  std::size_t deg = 0;
  for (std::size_t m = 0; m < c.size(); ++m)
    if (std::abs(c[m]) > tol) deg = m;
  return deg;
}

}  // namespace poly

inline CVec coefficients(const ConstrainedForm& form) {
  return std::visit(
      [](const auto& f) -> CVec {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PairForm>) {
          return {f.a, f.b, std::conj(f.a)};
        } else {
          const double s = f.sign * f.c;
          return {-s * f.d_blaschke, s * (1.0 + std::norm(f.d_blaschke)), -s * std::conj(f.d_blaschke)};
        }
      },
      form);
}

/// Structural violations (empty when the parameters are well formed).
inline std::vector<std::string> structural_violations(const HParams& h) {
  std::vector<std::string> out;
  if (h.n == 0) out.emplace_back("n must be positive");
  if (h.d > h.n) out.emplace_back("d must not exceed n");
  if (h.free.size() + h.d != h.n) out.emplace_back("expected n - d free components");
  if (h.constrained.size() != h.d) out.emplace_back("expected d constrained components");
  for (std::size_t j = 0; j < h.free.size(); ++j) {
    if (h.free[j].empty()) out.push_back("free component " + std::to_string(j + 1) + " has no coefficients");
    for (const auto& c : h.free[j])
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        out.push_back("free component " + std::to_string(j + 1) + " has non-finite coefficient");
  }
  for (std::size_t i = 0; i < h.constrained.size(); ++i) {
    const std::string tag = "constrained component " + std::to_string(h.n - h.d + i + 1);
    if (const auto* p = std::get_if<PairForm>(&h.constrained[i])) {
      if (p->b.imag() != 0.0) out.push_back(tag + ": pair-form b must be real");
    } else {
      const auto& q = std::get<PositiveForm>(h.constrained[i]);
      if (q.sign != 1 && q.sign != -1) out.push_back(tag + ": sign must be +1 or -1");
      if (!(q.c >= 0.0)) out.push_back(tag + ": c must be nonnegative");
      if (std::abs(q.d_blaschke) > 1.0 + 1e-12) out.push_back(tag + ": |d_blaschke| must not exceed 1");
    }
  }
  return out;
}

inline void require_valid(const HParams& h) {
  const auto v = structural_violations(h);
  if (v.empty()) return;
  std::ostringstream msg;
  msg << "invalid h parameters:";
  for (const auto& s : v) msg << ' ' << s << ';';
  throw ValidationError(msg.str());
}

/// h in polynomial form, one coefficient list per component. Construction
/// validates the parameters; evaluation is then allocation-light.
class HPolynomial {
 public:
  explicit HPolynomial(const HParams& h) : n_(h.n), d_(h.d) {
    require_valid(h);
    for (const auto& c : h.free) coeffs_.push_back(c);
    for (const auto& f : h.constrained) coeffs_.push_back(coefficients(f));
  }

  std::size_t n() const { return n_; }
  std::size_t d() const { return d_; }
  const std::vector<CVec>& coeffs() const { return coeffs_; }

  CVec eval(cplx lambda) const {
    CVec out(n_);
    for (std::size_t j = 0; j < n_; ++j) out[j] = poly::eval(coeffs_[j], lambda);
    return out;
  }
  /// (h(lambda) - h(0)) / lambda.
  CVec quotient(cplx lambda) const {
    CVec out(n_);
    for (std::size_t j = 0; j < n_; ++j) out[j] = poly::eval_quotient(coeffs_[j], lambda);
    return out;
  }
  CVec at_zero() const {
    CVec out(n_);
    for (std::size_t j = 0; j < n_; ++j) out[j] = coeffs_[j].front();
    return out;
  }

 private:
  std::size_t n_, d_;
  std::vector<CVec> coeffs_;
};

inline CVec eval_h(const HParams& h, cplx lambda) { return HPolynomial(h).eval(lambda); }

/// conj(lambda) h(lambda) for lambda on the circle; the last d components are
/// returned with zero imaginary part after checking the residual.
inline CVec boundary_symbol(const HPolynomial& h, cplx lambda, double tol = 1e-10) {
  CVec v = h.eval(lambda);
  const cplx lc = std::conj(lambda);
  for (auto& x : v) x *= lc;
  for (std::size_t j = h.n() - h.d(); j < h.n(); ++j) {
    if (std::abs(v[j].imag()) > tol) {
      throw ClassViolation("boundary symbol component " + std::to_string(j + 1) +
                           " has imaginary residual " + std::to_string(std::abs(v[j].imag())));
    }
    v[j] = v[j].real();
  }
  return v;
}

inline CVec boundary_symbol(const HParams& h, cplx lambda, double tol = 1e-10) {
  return boundary_symbol(HPolynomial(h), lambda, tol);
}

struct ClassReport {
  bool ok = true;
  double max_imag_residual = 0.0;
  std::size_t sign_violations = 0;
  std::vector<std::string> failures;
};

/// Checks every class invariant on the full grid. Never throws on bad
/// parameters; failures are listed in the report.
inline ClassReport validate_class(const HParams& h, const CircleGrid& grid = CircleGrid(256),
                                  double tol = 1e-12) {
  ClassReport report;
  report.failures = structural_violations(h);
  if (h.free.size() + h.d != h.n || h.constrained.size() != h.d || h.d > h.n) {
    report.ok = false;
    return report;
  }
  for (std::size_t i = 0; i < h.d; ++i) {
    const CVec c = coefficients(h.constrained[i]);
    const auto* pos = std::get_if<PositiveForm>(&h.constrained[i]);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const cplx lambda = grid.node(k);
      const cplx v = std::conj(lambda) * poly::eval(c, lambda);
      report.max_imag_residual = std::max(report.max_imag_residual, std::abs(v.imag()));
      if (pos && pos->sign * v.real() < -tol * std::max(1.0, pos->c)) ++report.sign_violations;
    }
  }
  if (report.max_imag_residual > tol) {
    report.failures.push_back("boundary symbol not real: max imaginary residual " +
                              std::to_string(report.max_imag_residual));
  }
  if (report.sign_violations > 0) {
    report.failures.push_back(std::to_string(report.sign_violations) + " sign violations of positive form");
  }
  report.ok = report.failures.empty();
  return report;
}

/// t * h for t > 0.
inline HParams scaled(const HParams& h, double t) {
  HParams out = h;
  for (auto& comp : out.free)
    for (auto& c : comp) c *= t;
  for (auto& f : out.constrained) {
    if (auto* p = std::get_if<PairForm>(&f)) {
      p->a *= t;
      p->b *= t;
    } else {
      std::get<PositiveForm>(f).c *= t;
    }
  }
  return out;
}

/// Euclidean norm of the linear coefficients (free coefficients, a, b, c).
inline double parameter_norm(const HParams& h) {
  double s = 0.0;
  for (const auto& comp : h.free)
    for (const auto& c : comp) s += std::norm(c);
  for (const auto& f : h.constrained) {
    if (const auto* p = std::get_if<PairForm>(&f)) {
      s += std::norm(p->a) + std::norm(p->b);
    } else {
      s += std::get<PositiveForm>(f).c * std::get<PositiveForm>(f).c;
    }
  }
  return std::sqrt(s);
}

inline HParams normalized(const HParams& h) {
  const double norm = parameter_norm(h);
  if (!(norm > 0.0)) throw ValidationError("cannot normalize the zero map");
  return scaled(h, 1.0 / norm);
}

}  // namespace geolab
