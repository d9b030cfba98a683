#pragma once

// Two-point connection: find (h, atoms, imconst, sigma) with phi(0) = p and
// phi(sigma) = q by multi-start Levenberg-Marquardt over a finite family.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "geolab/circle.hpp"
#include "geolab/domains.hpp"
#include "geolab/error.hpp"
#include "geolab/geodesic.hpp"
#include "geolab/h_class.hpp"

namespace geolab {

struct ConnectConfig {
  unsigned long long seed = 0;
  std::size_t max_starts = 16;
  std::size_t max_iterations = 200;
  std::size_t free_degree = 4;
  std::size_t grid_size = 256;
  double fd_step = 1e-6;
  double objective_tol = 1e-10;
  double holomorphy_weight = 1.0;
  double perturbation = 0.5;
  CertifyConfig certify;
};

struct ConnectResult {
  bool converged = false;
  bool degenerate = false;
  HParams h;
  std::optional<GeodesicCandidate> candidate;
  double sigma = 0.0;
  double objective = INFINITY;  // |phi(0) - p|^2 + |phi(sigma) - q|^2
  std::size_t starts_used = 0;
  std::optional<CertificationReport> report;
};

namespace detail {

/// Unpacked trial point of the search family.
struct Trial {
  HParams h;
  std::vector<Atom> atoms;
  RVec imconst;
  double sigma = 0.0;
};

inline double logistic(double s) { return 1.0 / (1.0 + std::exp(-s)); }
inline double logit(double p) { return std::log(p / (1.0 - p)); }

/// Parameter layout. Domains with S_D = {0} use pair forms on the constrained
/// components; otherwise a signed positive form whose zero either sits inside
/// the disc or on the circle carrying an atom. The first positive form has
/// c = 1, which fixes the positive scaling; without one the h block is kept
/// at unit norm.
class ConnectFamily {
 public:
  ConnectFamily(const DomainDescriptor& dom, std::size_t free_degree, bool with_atoms)
      : dom_(dom), free_coeffs_(free_degree + 1), positive_(has_nontrivial_SD(dom)), atoms_(with_atoms) {
    if (atoms_ && !positive_) throw ArgumentError("atoms require a nontrivial cone S_D");
    sign_ = -1;
    if (positive_) {
      CVec e(dom.n, 0.0);
      e.back() = 1.0;
      sign_ = in_WD(dom, e) ? 1 : -1;
    }
  }

  std::size_t free_dims() const { return dom_.n - dom_.d; }
  std::size_t h_block() const {
    std::size_t k = 2 * free_dims() * free_coeffs_;
    for (std::size_t i = 0; i < dom_.d; ++i) k += positive_ ? per_positive(i) : 3;
    return k;
  }
  std::size_t size() const { return h_block() + dom_.d + 1; }
  bool renormalize_h() const { return !positive_; }

  Trial unpack(const Eigen::VectorXd& x) const {
    Trial t;
    t.h.n = dom_.n;
    t.h.d = dom_.d;
    std::size_t k = 0;
    for (std::size_t j = 0; j < free_dims(); ++j) {
      CVec c(free_coeffs_);
      for (auto& z : c) {
        z = cplx(x[k], x[k + 1]);
        k += 2;
      }
      t.h.free.push_back(std::move(c));
    }
    for (std::size_t i = 0; i < dom_.d; ++i) {
      if (!positive_) {
        t.h.constrained.emplace_back(PairForm{cplx(x[k], x[k + 1]), cplx(x[k + 2], 0.0)});
        k += 3;
        continue;
      }
      PositiveForm f;
      f.sign = sign_;
      if (i == 0) {
        f.c = 1.0;
      } else {
        f.c = x[k] * x[k];
        ++k;
      }
      if (atoms_) {
        const double beta = x[k];
        f.d_blaschke = std::polar(1.0, beta);
        RVec rho(dom_.d, 0.0);
        rho[i] = 1.0;
        t.atoms.push_back(Atom{wrap_angle(beta), x[k + 1] * x[k + 1], rho});
        k += 2;
      } else {
        const cplx u(x[k], x[k + 1]);
        f.d_blaschke = u / std::sqrt(1.0 + std::norm(u));
        k += 2;
      }
      t.h.constrained.emplace_back(f);
    }
    t.imconst.assign(dom_.n, 0.0);
    for (std::size_t i = 0; i < dom_.d; ++i) t.imconst[dom_.n - dom_.d + i] = x[k++];
    t.sigma = logistic(x[k]);
    return t;
  }

  /// Deterministic starting point adapted to p.
  Eigen::VectorXd canonical(const CVec& p) const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<long>(size()));
    std::size_t k = 0;
    for (std::size_t j = 0; j < free_dims(); ++j) {
      x[static_cast<long>(k)] = positive_ ? 0.0 : 1.0;
      k += 2 * free_coeffs_;
    }
    for (std::size_t i = 0; i < dom_.d; ++i) {
      if (!positive_) {
        x[static_cast<long>(k + 2)] = 1.0;
        k += 3;
        continue;
      }
      if (i > 0) x[static_cast<long>(k++)] = 1.0;
      if (atoms_) {
        x[static_cast<long>(k)] = 0.5;
        x[static_cast<long>(k + 1)] = std::sqrt(std::max(std::abs(p[dom_.n - dom_.d + i].real()), 0.1) * kTwoPi * 0.5);
      }
      k += 2;
    }
    for (std::size_t i = 0; i < dom_.d; ++i) x[static_cast<long>(k++)] = p[dom_.n - dom_.d + i].imag();
    x[static_cast<long>(k)] = logit(0.3);
    normalize(x);
    return x;
  }

  void normalize(Eigen::VectorXd& x) const {
    if (!renormalize_h()) return;
    const long hb = static_cast<long>(h_block());
    const double nrm = x.head(hb).norm();
    if (nrm > 0.0) x.head(hb) /= nrm;
  }

 private:
  std::size_t per_positive(std::size_t i) const { return (i == 0 ? 0 : 1) + 2; }

  DomainDescriptor dom_;
  std::size_t free_coeffs_;
  bool positive_;
  bool atoms_;
  int sign_ = -1;
};

struct Evaluation {
  Eigen::VectorXd residual;
  double endpoint_objective = INFINITY;
  bool ok = false;
};

inline Evaluation evaluate_trial(const DomainDescriptor& dom, const ConnectFamily& fam, const Eigen::VectorXd& x,
                                 const CVec& p, const CVec& q, const CircleGrid& grid, double holo_weight) {
  const std::size_t n = dom.n;
  const std::size_t half = grid.size() / 2;
  const long rows = static_cast<long>(4 * n + 2 * fam.free_dims() * half);
  Evaluation ev;
  ev.residual = Eigen::VectorXd::Constant(rows, 1e3);
  try {
    const Trial t = fam.unpack(x);
    const GeodesicCandidate cand = reconstruct(dom, t.h, t.atoms, t.imconst, grid);
    const CVec a = cand.rep.eval(0.0);
    const CVec b = cand.rep.eval(t.sigma);
    long r = 0;
    double obj = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const cplx da = a[j] - p[j];
      const cplx db = b[j] - q[j];
      ev.residual[r++] = da.real();
      ev.residual[r++] = da.imag();
      ev.residual[r++] = db.real();
      ev.residual[r++] = db.imag();
      obj += std::norm(da) + std::norm(db);
    }
    for (std::size_t j = 0; j < fam.free_dims(); ++j) {
      for (std::size_t f = 1; f <= half; ++f) {
        const cplx c = cand.boundary.coeffs().at(j, -static_cast<long>(f));
        ev.residual[r++] = holo_weight * c.real();
        ev.residual[r++] = holo_weight * c.imag();
      }
    }
    if (!ev.residual.allFinite()) return Evaluation{Eigen::VectorXd::Constant(rows, 1e3), INFINITY, false};
    ev.endpoint_objective = obj;
    ev.ok = true;
  } catch (const Error&) {
  }
  return ev;
}

struct StartOutcome {
  Eigen::VectorXd x;
  Evaluation ev;
};

inline StartOutcome levenberg_marquardt(const DomainDescriptor& dom, const ConnectFamily& fam, Eigen::VectorXd x,
                                        const CVec& p, const CVec& q, const CircleGrid& grid,
                                        const ConnectConfig& cfg) {
  Evaluation cur = evaluate_trial(dom, fam, x, p, q, grid, cfg.holomorphy_weight);
  double mu = 1e-3;
  const long k = x.size();
  for (std::size_t it = 0; it < cfg.max_iterations && cur.ok; ++it) {
    const double cost = cur.residual.squaredNorm();
    if (cost <= 1e-24) break;
    Eigen::MatrixXd J(cur.residual.size(), k);
    for (long c = 0; c < k; ++c) {
      Eigen::VectorXd xp = x, xm = x;
      const double step = cfg.fd_step * std::max(1.0, std::abs(x[c]));
      xp[c] += step;
      xm[c] -= step;
      const Evaluation ep = evaluate_trial(dom, fam, xp, p, q, grid, cfg.holomorphy_weight);
      const Evaluation em = evaluate_trial(dom, fam, xm, p, q, grid, cfg.holomorphy_weight);
      J.col(c) = (ep.ok && em.ok) ? Eigen::VectorXd((ep.residual - em.residual) / (2.0 * step))
                                  : Eigen::VectorXd::Zero(cur.residual.size());
    }
    const Eigen::MatrixXd JtJ = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * cur.residual;
    bool accepted = false;
    for (int tries = 0; tries < 12; ++tries) {
      Eigen::MatrixXd A = JtJ;
      A.diagonal().array() += mu * (1.0 + JtJ.diagonal().array());
      const Eigen::VectorXd delta = A.ldlt().solve(-g);
      Eigen::VectorXd xn = x + delta;
      fam.normalize(xn);
      const Evaluation en = evaluate_trial(dom, fam, xn, p, q, grid, cfg.holomorphy_weight);
      if (en.ok && en.residual.squaredNorm() < cost) {
        x = std::move(xn);
        cur = en;
        mu = std::max(mu / 3.0, 1e-12);
        accepted = true;
        break;
      }
      mu *= 4.0;
    }
    if (!accepted || cost - cur.residual.squaredNorm() <= 1e-15 * cost) break;
  }
  return {std::move(x), std::move(cur)};
}

}  // namespace detail

inline ConnectResult connect(const DomainDescriptor& dom, const CVec& p, const CVec& q, const ConnectConfig& cfg = {}) {
  dom.validate();
  if (p.size() != dom.n || q.size() != dom.n) throw ArgumentError("connect: endpoints must have length n");
  if (!contains(dom, p).inside || !contains(dom, q).inside) throw PreconditionError("connect: endpoints must lie in D");

  ConnectResult out;
  if (norm([&] {
        CVec diff(p.size());
        for (std::size_t j = 0; j < p.size(); ++j) diff[j] = q[j] - p[j];
        return diff;
      }()) == 0.0) {
    out.converged = true;
    out.degenerate = true;
    out.sigma = 0.0;
    out.objective = 0.0;
    return out;
  }

  const CircleGrid grid(cfg.grid_size);
  std::vector<detail::ConnectFamily> families;
  if (has_nontrivial_SD(dom)) families.emplace_back(dom, cfg.free_degree, true);
  families.emplace_back(dom, cfg.free_degree, false);

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double best_total = INFINITY;
  for (std::size_t start = 0; start < cfg.max_starts; ++start) {
    const auto& fam = families[start % families.size()];
    Eigen::VectorXd x0 = fam.canonical(p);
    if (start >= families.size()) {
      for (long c = 0; c < x0.size(); ++c) x0[c] += cfg.perturbation * gauss(rng);
      fam.normalize(x0);
    }
    auto res = detail::levenberg_marquardt(dom, fam, x0, p, q, grid, cfg);
    out.starts_used = start + 1;
    if (!res.ev.ok) continue;
    const double total = res.ev.residual.squaredNorm();
    const detail::Trial t = fam.unpack(res.x);
    const bool better = total < best_total;
    if (!better && res.ev.endpoint_objective > cfg.objective_tol) continue;
    GeodesicCandidate cand = reconstruct(dom, t.h, t.atoms, t.imconst, grid);
    CertificationReport report = certify(dom, cand, t.h, cfg.certify);
    const bool success = res.ev.endpoint_objective <= cfg.objective_tol && report.verdict == Verdict::certified;
    if (better || success) {
      best_total = total;
      out.h = t.h;
      out.candidate = std::move(cand);
      out.sigma = t.sigma;
      out.objective = res.ev.endpoint_objective;
      out.report = std::move(report);
    }
    if (success) {
      out.converged = true;
      return out;
    }
  }
  return out;
}

}  // namespace geolab
