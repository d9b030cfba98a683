#pragma once

// Complex geodesics from dual maps: boundary data through the support map,
// reconstruction of phi from its boundary measure, the psi_z certificate,
// singular-part compatibility, sibling variation and disc automorphisms.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "geolab/circle.hpp"
#include "geolab/domains.hpp"
#include "geolab/error.hpp"
#include "geolab/h_class.hpp"
#include "geolab/parallel.hpp"

namespace geolab {

struct GeodesicCandidate {
  HoloRep rep;
  DomainDescriptor domain;
  HParams h;
  BoundarySignal boundary;
};

/// Grid nodes closest to the atoms; the support condition is not imposed there.
inline std::vector<bool> atom_nodes(const CircleGrid& grid, const std::vector<Atom>& atoms) {
  std::vector<bool> exempt(grid.size(), false);
  for (const auto& a : atoms) exempt[grid.nearest_node(a.angle)] = true;
  return exempt;
}

/// Per node, the support point of the boundary symbol of h. Nodes next to
/// atoms take the mean of their nearest regular neighbours.
inline BoundarySignal boundary_data_from_h(const DomainDescriptor& dom, const HParams& h,
                                           const CircleGrid& grid, const std::vector<Atom>& atoms = {}) {
  if (h.n != dom.n || h.d != dom.d) throw PipelineError("h dimensions do not match the domain");
  const HPolynomial hp(h);
  const std::size_t N = grid.size();
  const auto exempt = atom_nodes(grid, atoms);
  std::vector<CVec> values(dom.n, CVec(N));
  for (std::size_t k = 0; k < N; ++k) {
    if (exempt[k]) continue;
    const CVec v = boundary_symbol(hp, grid.node(k));
    if (is_zero(v)) {
      throw PipelineError("boundary symbol vanishes at node " + std::to_string(k) + " (theta = " +
                          std::to_string(grid.theta(k)) + ")");
    }
    std::optional<SupportPoint> sp;
    try {
      sp = support_point(dom, v);
    } catch (const NonSingletonSupport& e) {
      throw NonSingletonSupport(std::string(e.what()) + " at node " + std::to_string(k));
    }
    if (!sp) {
      throw PipelineError("empty support set at node " + std::to_string(k) + " (theta = " +
                          std::to_string(grid.theta(k)) + ")");
    }
    for (std::size_t j = 0; j < dom.n; ++j) values[j][k] = sp->point[j];
  }
  for (std::size_t k = 0; k < N; ++k) {
    if (!exempt[k]) continue;
    std::size_t left = k, right = k;
    std::size_t steps = 0;
    do {
      left = (left + N - 1) % N;
    } while (exempt[left] && ++steps < N);
    steps = 0;
    do {
      right = (right + 1) % N;
    } while (exempt[right] && ++steps < N);
    if (exempt[left] || exempt[right]) throw PipelineError("every node is next to an atom");
    for (std::size_t j = 0; j < dom.n; ++j) values[j][k] = 0.5 * (values[j][left] + values[j][right]);
  }
  return BoundarySignal(grid, std::move(values));
}

inline RVec expand_imconst(const RVec& imconst, std::size_t n, std::size_t d) {
  if (imconst.empty()) return RVec(n, 0.0);
  if (imconst.size() == n) return imconst;
  if (imconst.size() == d) {
    RVec out(n, 0.0);
    std::copy(imconst.begin(), imconst.end(), out.begin() + static_cast<long>(n - d));
    return out;
  }
  throw ValidationError("imconst must have length d or n");
}

inline void require_atoms_in_cone(const DomainDescriptor& dom, const std::vector<Atom>& atoms) {
  for (const auto& a : atoms) {
    validate_atom(a, dom.d);
    if (!in_SD(dom, a.direction)) throw ConeError("atom direction lies outside the cone S_D");
  }
}

/// Rebuilds phi: Taylor coefficients of the first n - d components from the
/// nonnegative frequencies of the boundary data, the last d components from
/// the Schwarz integral of their real parts plus atoms and i * imconst.
inline GeodesicCandidate reconstruct(const DomainDescriptor& dom, const HParams& h,
                                     const std::vector<Atom>& atoms, const RVec& imconst,
                                     const CircleGrid& grid = CircleGrid(256), std::size_t max_degree = 0) {
  dom.validate();
  require_valid(h);
  const ClassReport cls = validate_class(h, grid);
  if (!cls.ok) throw ValidationError("h is not in the dual class: " + cls.failures.front());
  if (!atoms.empty() && dom.d == 0) throw ConeError("atoms require d > 0");
  require_atoms_in_cone(dom, atoms);
  const std::size_t M = max_degree == 0 ? default_degree(grid) : std::min(max_degree, default_degree(grid));

  BoundarySignal signal = boundary_data_from_h(dom, h, grid, atoms);
  HoloRep rep{dom.n, dom.d, {}, atoms, expand_imconst(imconst, dom.n, dom.d)};
  for (std::size_t j = 0; j < dom.n - dom.d; ++j) {
    CVec c(M + 1);
    for (std::size_t m = 0; m <= M; ++m) c[m] = signal.coeffs().at(j, static_cast<long>(m));
    rep.taylor.push_back(std::move(c));
  }
  for (std::size_t j = dom.n - dom.d; j < dom.n; ++j) {
    RVec g(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) g[k] = signal.values()[j][k].real();
    rep.taylor.push_back(schwarz_taylor(grid, g, M));
  }
  return GeodesicCandidate{std::move(rep), dom, h, std::move(signal)};
}

/// psi_z(lambda) for a fixed pair (phi, h).
class PsiEvaluator {
 public:
  PsiEvaluator(const HoloRep& phi, const HParams& h, double crossover = 1e-3)
      : phi_(phi), h_(h), crossover_(crossover), phi0_(phi.eval(0.0)), h0_(h_.at_zero()) {
    if (h.n != phi.n) throw ArgumentError("psi: phi and h have different dimensions");
  }

  cplx operator()(const CVec& z, cplx lambda) const {
    return std::abs(lambda) >= crossover_ ? quotient_form(z, lambda) : taylor_form(z, lambda);
  }

  /// (h(l).(z - phi(l)) - h(0).(z - phi(0))) / l + l conj(h(0).(z - phi(0))).
  cplx quotient_form(const CVec& z, cplx lambda) const {
    const CVec hl = h_.eval(lambda);
    const CVec pl = phi_.eval(lambda);
    cplx s{};
    for (std::size_t j = 0; j < hl.size(); ++j) s += hl[j] * (z[j] - pl[j]);
    const cplx c0 = center_term(z);
    return (s - c0) / lambda + lambda * std::conj(c0);
  }

  /// Difference-quotient form; well conditioned near lambda = 0.
  cplx taylor_form(const CVec& z, cplx lambda) const {
    const CVec dphi = phi_.difference_quotient(lambda);
    const CVec hl = h_.eval(lambda);
    const CVec dh = h_.quotient(lambda);
    cplx s{};
    for (std::size_t j = 0; j < hl.size(); ++j) s += -dphi[j] * hl[j] + dh[j] * (z[j] - phi0_[j]);
    return s + lambda * std::conj(center_term(z));
  }

  /// Re psi_{phi(0)}(0) = -Re(h(0) . phi'(0)).
  double re_at_center() const {
    const CVec dphi = phi_.derivative_at_zero();
    cplx s{};
    for (std::size_t j = 0; j < dphi.size(); ++j) s += h0_[j] * dphi[j];
    return -s.real();
  }

  const CVec& phi0() const { return phi0_; }

 private:
  cplx center_term(const CVec& z) const {
    cplx c{};
    for (std::size_t j = 0; j < z.size(); ++j) c += h0_[j] * (z[j] - phi0_[j]);
    return c;
  }

  const HoloRep& phi_;
  HPolynomial h_;
  double crossover_;
  CVec phi0_;
  CVec h0_;
};

inline cplx eval_psi(const GeodesicCandidate& cand, const HParams& h, const CVec& z, cplx lambda) {
  if (std::abs(lambda) >= 1.0) throw RimError("psi is evaluated inside the unit disc only");
  return PsiEvaluator(cand.rep, h)(z, lambda);
}

/// max over atoms of |conj(l0) h_{n-d+1..n}(l0) . rho|.
inline double atom_compatibility(const HParams& h, const std::vector<Atom>& atoms) {
  if (atoms.empty()) return 0.0;
  const HPolynomial hp(h);
  double worst = 0.0;
  for (const auto& a : atoms) {
    validate_atom(a, h.d);
    const CVec v = boundary_symbol(hp, a.point());
    double s = 0.0;
    for (std::size_t i = 0; i < h.d; ++i) s += v[h.n - h.d + i].real() * a.direction[i];
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

struct Tolerances {
  double psi = 1e-9;       // psi_max <= psi
  double nd = 1e-9;        // psi_at_zero <= -nd
  double holo = 1e-8;      // hardy residuals
  double atom = 1e-10;     // atom compatibility
  double support = 1e-8;   // node-wise support residual
  double boundary = 1e-9;  // |margin| below this counts as on the boundary
};

struct CertifyConfig {
  unsigned long long seed = 0;
  std::size_t interior_samples = 200;
  std::size_t boundary_samples = 50;
  double boundary_band = 0.05;
  std::vector<double> radii{0.0, 0.3, 0.6, 0.9};
  std::size_t angles = 64;
  Tolerances tol;
};

enum class Verdict { certified, boundary_degenerate, rejected };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::certified: return "certified";
    case Verdict::boundary_degenerate: return "boundary-degenerate";
    case Verdict::rejected: return "rejected";
  }
  return "unknown";
}

/// Numerical certificate, not a proof: sampled psi bounds plus node-wise
/// support and holomorphy checks.
struct CertificationReport {
  double support_residual = 0.0;
  RVec holo_residuals;  // first n - d components
  double psi_max = -INFINITY;
  double psi_at_zero = 0.0;
  double atom_residual = 0.0;
  bool center_inside = false;
  double center_margin = 0.0;
  bool bounded_projection = true;
  std::size_t z_samples = 0;
  std::size_t lambda_samples = 0;
  Verdict verdict = Verdict::rejected;
  std::string reason;  // set when rejected

  std::string verdict_string() const {
    return verdict == Verdict::rejected ? "rejected(" + reason + ")" : to_string(verdict);
  }
};

inline double support_residual(const DomainDescriptor& dom, const HoloRep& rep, const HParams& h,
                               const CircleGrid& grid) {
  const HPolynomial hp(h);
  const auto exempt = atom_nodes(grid, rep.atoms);
  const std::size_t free_dims = dom.n - dom.d;
  double worst = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (exempt[k]) continue;
    const cplx lambda = grid.node(k);
    std::optional<SupportPoint> sp;
    try {
      const CVec v = boundary_symbol(hp, lambda);
      if (is_zero(v)) return INFINITY;
      sp = support_point(dom, v);
    } catch (const Error&) {
      return INFINITY;
    }
    if (!sp) return INFINITY;
    const CVec b = rep.eval_regular(lambda);
    double dist2 = 0.0;
    for (std::size_t j = 0; j < dom.n; ++j) {
      const cplx phi_star = j < free_dims ? b[j] : cplx(b[j].real(), 0.0);
      dist2 += std::norm(phi_star - sp->point[j]);
    }
    worst = std::max(worst, std::sqrt(dist2));
  }
  return worst;
}

inline CertificationReport certify(const DomainDescriptor& dom, const GeodesicCandidate& cand, const HParams& h,
                                   const CertifyConfig& cfg = {}) {
  CertificationReport report;
  const CircleGrid& grid = cand.boundary.grid();
  const CVec center = cand.rep.eval(0.0);
  const Membership mem = contains(dom, center);
  report.center_margin = mem.margin;
  report.center_inside = mem.margin > cfg.tol.boundary;
  report.bounded_projection = bounded_projection(dom);

  report.support_residual = support_residual(dom, cand.rep, h, grid);
  bool support_ok = std::isfinite(report.support_residual);
  try {
    const BoundarySignal data = boundary_data_from_h(dom, h, grid, cand.rep.atoms);
    for (std::size_t j = 0; j < dom.n - dom.d; ++j) report.holo_residuals.push_back(hardy_residual(data, j).value);
  } catch (const Error&) {
    support_ok = false;
    report.holo_residuals.assign(dom.n - dom.d, std::numeric_limits<double>::quiet_NaN());
  }
  try {
    report.atom_residual = atom_compatibility(h, cand.rep.atoms);
  } catch (const Error&) {
    report.atom_residual = INFINITY;
  }

  const PsiEvaluator psi(cand.rep, h);
  report.psi_at_zero = psi.re_at_center();

  std::mt19937_64 rng(cfg.seed);
  std::vector<CVec> zs;
  for (std::size_t i = 0; i < cfg.interior_samples; ++i) zs.push_back(sample_in_domain(dom, rng));
  for (std::size_t i = 0; i < cfg.boundary_samples; ++i) zs.push_back(sample_near_boundary(dom, rng, cfg.boundary_band));
  std::vector<cplx> lambdas;
  for (double r : cfg.radii) {
    if (r == 0.0) {
      lambdas.emplace_back(0.0);
      continue;
    }
    for (std::size_t a = 0; a < cfg.angles; ++a)
      lambdas.push_back(std::polar(r, kTwoPi * static_cast<double>(a) / static_cast<double>(cfg.angles)));
  }
  std::vector<double> per_z(zs.size(), -INFINITY);
  parallel_for(zs.size(), [&](std::size_t i) {
    double m = -INFINITY;
    for (const cplx& l : lambdas) m = std::max(m, psi(zs[i], l).real());
    per_z[i] = m;
  });
  for (double m : per_z) report.psi_max = std::max(report.psi_max, m);
  report.z_samples = zs.size();
  report.lambda_samples = lambdas.size();

  const auto reject = [&](std::string why) {
    report.verdict = Verdict::rejected;
    report.reason = std::move(why);
    return report;
  };
  if (mem.margin < -cfg.tol.boundary) return reject("outside");
  if (!report.center_inside) {
    report.verdict = Verdict::boundary_degenerate;
    return report;
  }
  for (double r : report.holo_residuals)
    if (!(r <= cfg.tol.holo)) return reject(support_ok ? "holomorphy" : "support");
  if (!support_ok || !(report.support_residual <= cfg.tol.support)) return reject("support");
  if (!(report.atom_residual <= cfg.tol.atom)) return reject("atom");
  if (!(report.psi_max <= cfg.tol.psi)) return reject("psi");
  if (!(report.psi_at_zero <= -cfg.tol.nd)) return reject("nondegeneracy");
  report.verdict = Verdict::certified;
  return report;
}

struct SiblingResult {
  GeodesicCandidate tau;
  Verdict classification = Verdict::rejected;
  std::optional<CertificationReport> report;
};

/// Keeps the regular part of the candidate and replaces its singular part.
inline SiblingResult sibling_variation(const GeodesicCandidate& cand, const HParams& h,
                                       const std::vector<Atom>& new_atoms, const RVec& new_imconst,
                                       const CertifyConfig& cfg = {}) {
  const DomainDescriptor& dom = cand.domain;
  try {
    require_atoms_in_cone(dom, new_atoms);
  } catch (const Error& e) {
    throw PreconditionError(std::string("sibling atoms: ") + e.what());
  }
  if (!new_atoms.empty() && dom.d == 0) throw PreconditionError("sibling atoms require d > 0");
  const double compat = atom_compatibility(h, new_atoms);
  if (compat > cfg.tol.atom) {
    throw PreconditionError("sibling atoms are incompatible with h (residual " + std::to_string(compat) + ")");
  }
  auto [regular, singular] = split_parts(cand.rep);
  regular.atoms = new_atoms;
  regular.imconst = expand_imconst(new_imconst, dom.n, dom.d);
  SiblingResult out{GeodesicCandidate{std::move(regular), dom, h, cand.boundary}, Verdict::rejected, std::nullopt};
  const Membership mem = contains(dom, out.tau.rep.eval(0.0));
  if (mem.margin <= cfg.tol.boundary) {
    out.classification = Verdict::boundary_degenerate;
    return out;
  }
  out.report = certify(dom, out.tau, h, cfg);
  out.classification = out.report->verdict;
  return out;
}

/// m(lambda) = exp(i theta) (lambda - w) / (1 - conj(w) lambda).
struct DiscAutomorphism {
  double theta = 0.0;
  cplx w{};

  cplx operator()(cplx lambda) const { return std::polar(1.0, theta) * (lambda - w) / (1.0 - std::conj(w) * lambda); }
  cplx inverse(cplx mu) const {
    const cplx e = std::polar(1.0, -theta) * mu;
    return (e + w) / (1.0 + std::conj(w) * e);
  }
  /// |m'(zeta)|.
  double derivative_modulus(cplx zeta) const { return (1.0 - std::norm(w)) / std::norm(1.0 - std::conj(w) * zeta); }
};

/// Coefficients of p(m(lambda)) (1 - conj(w) lambda)^2 exp(-i theta) / (1 - |w|^2),
/// i.e. h(m) / m', for a polynomial p of degree at most 2.
inline CVec transform_dual_polynomial(const CVec& p, const DiscAutomorphism& m) {
  if (poly::effective_degree(p, 1e-14) > 2) {
    throw ArgumentError("disc automorphisms act on h components of degree at most 2 only");
  }
  const CVec lin{-m.w, 1.0};                  // lambda - w
  const CVec den{1.0, -std::conj(m.w)};       // 1 - conj(w) lambda
  const double scale = 1.0 / (1.0 - std::norm(m.w));
  CVec out{0.0};
  for (std::size_t k = 0; k < std::min<std::size_t>(p.size(), 3); ++k) {
    const CVec term = poly::multiply(poly::power(lin, k), poly::power(den, 2 - k));
    poly::add_scaled(out, term, p[k] * std::polar(1.0, (static_cast<double>(k) - 1.0) * m.theta) * scale);
  }
  out.resize(3);
  return out;
}

inline double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0 ? a + kTwoPi : a;
}

/// Dual map of phi o m: h(m(lambda)) / m'(lambda).
inline HParams transform_h(const HParams& h, const DiscAutomorphism& m) {
  require_valid(h);
  HParams out = h;
  for (auto& comp : out.free) {
    CVec t = transform_dual_polynomial(comp, m);
    t.resize(std::max(comp.size(), t.size()));
    comp = std::move(t);
  }
  for (auto& form : out.constrained) {
    const CVec t = transform_dual_polynomial(coefficients(form), m);
    if (auto* pair = std::get_if<PairForm>(&form)) {
      pair->a = t[0];
      pair->b = t[1].real();
    } else {
      auto& pos = std::get<PositiveForm>(form);
      const cplx zero = m.inverse(pos.d_blaschke);
      pos.d_blaschke = std::abs(zero) > 1.0 ? zero / std::abs(zero) : zero;
      pos.c = pos.sign * t[1].real() / (1.0 + std::norm(pos.d_blaschke));
    }
  }
  return out;
}

/// phi o m together with its transformed dual map.
inline GeodesicCandidate mobius_reparametrize(const GeodesicCandidate& cand, const DiscAutomorphism& m) {
  if (!(std::abs(m.w) < 1.0)) throw ArgumentError("automorphism centre must lie in the unit disc");
  const HoloRep& rep = cand.rep;
  const CircleGrid& grid = cand.boundary.grid();
  const std::size_t N = grid.size();
  const std::size_t M = rep.degree();
  const std::size_t free_dims = rep.n - rep.d;

  std::vector<CVec> regular(rep.n, CVec(N));
  std::vector<CVec> boundary(rep.n, CVec(N));
  for (std::size_t k = 0; k < N; ++k) {
    const cplx mu = m(grid.node(k));
    const CVec v = rep.eval_regular(mu);
    const CVec b = cand.boundary.interpolate(std::arg(mu));
    for (std::size_t j = 0; j < rep.n; ++j) {
      regular[j][k] = v[j];
      boundary[j][k] = b[j];
    }
  }
  HoloRep out{rep.n, rep.d, {}, {}, RVec(rep.n, 0.0)};
  const FourierTable table = fourier_coefficients(grid, regular);
  for (std::size_t j = 0; j < rep.n; ++j) {
    if (j < free_dims) {
      CVec c(M + 1);
      for (std::size_t q = 0; q <= M; ++q) c[q] = table.at(j, static_cast<long>(q));
      out.taylor.push_back(std::move(c));
    } else {
      RVec g(N);
      for (std::size_t k = 0; k < N; ++k) g[k] = regular[j][k].real();
      out.taylor.push_back(schwarz_taylor(grid, g, M));
    }
  }
  for (const auto& a : rep.atoms) {
    const cplx pre = m.inverse(a.point());
    out.atoms.push_back(Atom{wrap_angle(std::arg(pre)), a.weight / m.derivative_modulus(pre), a.direction});
  }
  const CVec at_center = rep.eval(m(0.0));
  for (std::size_t j = free_dims; j < rep.n; ++j) out.imconst[j] = at_center[j].imag();

  return GeodesicCandidate{std::move(out), cand.domain, transform_h(cand.h, m),
                           BoundarySignal(grid, std::move(boundary))};
}

}  // namespace geolab
