#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "geolab/geodesic.hpp"

using namespace geolab;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

HParams semiball_h() { return HParams{2, 1, {CVec{1.0}}, {PairForm{0.0, 1.0}}}; }
HParams zeta2_h() { return HParams{2, 1, {CVec{0.0, 0.0, 1.0}}, {PairForm{0.0, 0.0}}}; }
HParams cayley_h() { return HParams{2, 1, {CVec{0.0}}, {PositiveForm{-1, 1.0, 1.0}}}; }
std::vector<Atom> cayley_atoms(double weight = kTwoPi) { return {Atom{0.0, weight, {1.0}}}; }

GeodesicCandidate semiball_candidate() {
  return reconstruct(DomainDescriptor::semiball(), semiball_h(), {}, {0.0});
}
GeodesicCandidate cayley_candidate() {
  return reconstruct(DomainDescriptor::paraboloid(), cayley_h(), cayley_atoms(), {0.0});
}

double max_node_error(const GeodesicCandidate& c, const std::function<CVec(cplx)>& exact) {
  double err = 0.0;
  const CircleGrid& g = c.boundary.grid();
  for (std::size_t k = 0; k < g.size(); ++k) {
    const cplx l = 0.999 * g.node(k);
    const CVec a = c.rep.eval(l), b = exact(l);
    for (std::size_t j = 0; j < a.size(); ++j) err = std::max(err, std::abs(a[j] - b[j]));
  }
  return err;
}

std::vector<cplx> random_disc_points(std::size_t count, double radius, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<cplx> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(std::polar(radius * std::sqrt(u(rng)), kTwoPi * u(rng)));
  return out;
}

}  // namespace

TEST(BoundaryData, SemiballPairForm) {
  const auto s = boundary_data_from_h(DomainDescriptor::semiball(), semiball_h(), CircleGrid(64));
  for (std::size_t k = 0; k < 64; ++k) {
    const cplx l = s.grid().node(k);
    EXPECT_NEAR(std::abs(s.values()[0][k] - l * kInvSqrt2), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s.values()[1][k] - kInvSqrt2), 0.0, 1e-15);
  }
}

TEST(BoundaryData, SemiballZetaSquared) {
  const auto s = boundary_data_from_h(DomainDescriptor::semiball(), zeta2_h(), CircleGrid(64));
  for (std::size_t k = 0; k < 64; ++k) {
    EXPECT_NEAR(std::abs(s.values()[0][k] - std::conj(s.grid().node(k))), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s.values()[1][k]), 0.0, 1e-15);
  }
}

TEST(BoundaryData, ParaboloidQuarter) {
  const HParams h{2, 1, {CVec{1.0}}, {PositiveForm{-1, 1.0, 0.0}}};
  const auto s = boundary_data_from_h(DomainDescriptor::paraboloid(), h, CircleGrid(64));
  for (std::size_t k = 0; k < 64; ++k) {
    EXPECT_NEAR(std::abs(s.values()[0][k] - s.grid().node(k) / 2.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s.values()[1][k] - 0.25), 0.0, 1e-15);
  }
}

TEST(BoundaryData, EmptySupportNamesNode) {
  // positive sign on the paraboloid has no support point
  const HParams h{2, 1, {CVec{1.0}}, {PositiveForm{1, 1.0, 0.0}}};
  try {
    boundary_data_from_h(DomainDescriptor::paraboloid(), h, CircleGrid(16));
    FAIL() << "expected PipelineError";
  } catch (const PipelineError& e) {
    EXPECT_NE(std::string(e.what()).find("node"), std::string::npos);
  }
}

TEST(Reconstruct, SemiballClosedForm) {
  const auto c = semiball_candidate();
  EXPECT_LE(max_node_error(c, [](cplx l) { return CVec{l * kInvSqrt2, kInvSqrt2}; }), 1e-10);
}

TEST(Reconstruct, ParaboloidCayley) {
  const auto c = cayley_candidate();
  EXPECT_LE(max_node_error(c, [](cplx l) { return CVec{0.0, (1.0 + l) / (1.0 - l)}; }), 1e-10);
  // left inverse oracle: f(z) = (z2 - 1)/(z2 + 1) recovers lambda
  for (cplx l : random_disc_points(50, 0.95, 4)) {
    const cplx z2 = c.rep.eval(l)[1];
    EXPECT_NEAR(std::abs((z2 - 1.0) / (z2 + 1.0) - l), 0.0, 1e-10);
  }
}

TEST(Reconstruct, ZeroMeasureIsBoundaryDegenerate) {
  const HParams h{2, 1, {CVec{0.0}}, {PairForm{0.0, 1.0}}};
  const auto c = reconstruct(DomainDescriptor::semiball(), h, {}, {0.0});
  EXPECT_LE(max_node_error(c, [](cplx) { return CVec{0.0, 1.0}; }), 1e-12);
  EXPECT_EQ(certify(c.domain, c, h).verdict, Verdict::boundary_degenerate);
}

TEST(Reconstruct, AtomsOnSemiballAreConeErrors) {
  EXPECT_THROW(reconstruct(DomainDescriptor::semiball(), semiball_h(), {Atom{1.0, 0.5, {1.0}}}, {0.0}), ConeError);
  EXPECT_THROW(reconstruct(DomainDescriptor::paraboloid(), cayley_h(), {Atom{0.0, 1.0, {-1.0}}}, {0.0}), ConeError);
}

TEST(Psi, ZeroDualMapGivesZero) {
  const auto c = semiball_candidate();
  const HParams zero{2, 1, {CVec{0.0}}, {PairForm{0.0, 0.0}}};
  for (cplx l : {cplx(0.0), cplx(1e-4, 0.0), cplx(0.3, 0.4)})
    EXPECT_EQ(eval_psi(c, zero, {cplx(0.1, 0.2), cplx(0.3, -1.0)}, l), cplx(0.0));
}

TEST(Psi, CentreValues) {
  const auto s = semiball_candidate();
  EXPECT_NEAR(eval_psi(s, semiball_h(), s.rep.eval(0.0), 0.0).real(), -kInvSqrt2, 1e-12);
  const auto p = cayley_candidate();
  EXPECT_NEAR(eval_psi(p, cayley_h(), p.rep.eval(0.0), 0.0).real(), -2.0, 1e-12);
  EXPECT_THROW(eval_psi(s, semiball_h(), {0.0, 0.0}, 1.0), RimError);
}

TEST(Psi, QuotientAndTaylorFormsAgreeOnOverlap) {
  std::mt19937_64 rng(2);
  for (const auto& [c, h] : {std::pair{semiball_candidate(), semiball_h()}, std::pair{cayley_candidate(), cayley_h()}}) {
    const PsiEvaluator psi(c.rep, h);
    for (int s = 0; s < 20; ++s) {
      const CVec z = sample_in_domain(c.domain, rng);
      for (double r : {1e-3, 2e-3, 5e-3, 1e-2})
        for (double t : {0.0, 1.0, 2.5, 4.0}) {
          const cplx l = std::polar(r, t);
          EXPECT_NEAR(std::abs(psi.quotient_form(z, l) - psi.taylor_form(z, l)), 0.0, 1e-9);
        }
    }
  }
}

TEST(AtomCompatibility, Examples) {
  EXPECT_NEAR(atom_compatibility(cayley_h(), cayley_atoms()), 0.0, 1e-15);
  EXPECT_NEAR(atom_compatibility(semiball_h(), {Atom{2.0, 1.0, {1.0}}}), 1.0, 1e-14);
  EXPECT_EQ(atom_compatibility(semiball_h(), {}), 0.0);
}

TEST(Certify, SemiballCertified) {
  const auto c = semiball_candidate();
  const auto r = certify(c.domain, c, semiball_h());
  EXPECT_EQ(r.verdict, Verdict::certified) << r.verdict_string();
  EXPECT_NEAR(r.psi_at_zero, -kInvSqrt2, 1e-12);
  EXPECT_EQ(r.z_samples, 250u);
  EXPECT_EQ(r.lambda_samples, 1u + 3u * 64u);
}

TEST(Certify, ZetaSquaredRejectedForHolomorphy) {
  const auto c = reconstruct(DomainDescriptor::semiball(), zeta2_h(), {}, {0.0});
  const auto r = certify(c.domain, c, zeta2_h());
  EXPECT_EQ(r.verdict, Verdict::rejected);
  EXPECT_EQ(r.reason, "holomorphy");
  ASSERT_EQ(r.holo_residuals.size(), 1u);
  EXPECT_NEAR(r.holo_residuals[0], 1.0, 1e-12);
}

TEST(Certify, ParaboloidCayleyCertified) {
  const auto c = cayley_candidate();
  const auto r = certify(c.domain, c, cayley_h());
  EXPECT_EQ(r.verdict, Verdict::certified) << r.verdict_string();
  EXPECT_NEAR(r.psi_at_zero, -2.0, 1e-10);
  EXPECT_LE(r.atom_residual, 1e-10);
  EXPECT_FALSE(r.bounded_projection);
}

TEST(Certify, CentreOutsideIsRejected) {
  auto c = semiball_candidate();
  c.rep.taylor[1][0] = 3.0;
  const auto r = certify(c.domain, c, semiball_h());
  EXPECT_EQ(r.verdict_string(), "rejected(outside)");
}

TEST(Certify, WrongDualMapFailsSupport) {
  const auto c = semiball_candidate();
  const HParams other{2, 1, {CVec{0.0, 1.0}}, {PairForm{0.0, 1.0}}};
  EXPECT_EQ(certify(c.domain, c, other).verdict, Verdict::rejected);
}

TEST(Sibling, Cases) {
  const auto c = cayley_candidate();
  const auto doubled = sibling_variation(c, cayley_h(), cayley_atoms(2 * kTwoPi), {0.0});
  EXPECT_EQ(doubled.classification, Verdict::certified);
  for (cplx l : random_disc_points(20, 0.9, 8))
    EXPECT_NEAR(std::abs(doubled.tau.rep.eval(l)[1] - 2.0 * (1.0 + l) / (1.0 - l)), 0.0, 1e-9);

  const auto none = sibling_variation(c, cayley_h(), {}, {0.0});
  EXPECT_EQ(none.classification, Verdict::boundary_degenerate);
  for (cplx l : random_disc_points(20, 0.9, 9)) EXPECT_NEAR(none.tau.rep.eval(l)[1].real(), 0.0, 1e-10);

  const auto s = semiball_candidate();
  EXPECT_THROW(sibling_variation(s, semiball_h(), {Atom{0.0, 1.0, {1.0}}}, {0.0}), PreconditionError);
  EXPECT_THROW(sibling_variation(c, cayley_h(), {Atom{1.0, 1.0, {1.0}}}, {0.0}), PreconditionError);
}

TEST(Mobius, IdentityAndRotation) {
  const auto c = semiball_candidate();
  const auto same = mobius_reparametrize(c, DiscAutomorphism{0.0, 0.0});
  for (cplx l : random_disc_points(30, 0.9, 1)) {
    const CVec a = c.rep.eval(l), b = same.rep.eval(l);
    for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(std::abs(a[j] - b[j]), 0.0, 1e-12);
  }
  const auto rot = mobius_reparametrize(c, DiscAutomorphism{std::numbers::pi, 0.0});
  for (cplx l : random_disc_points(30, 0.9, 2)) {
    const CVec b = rot.rep.eval(l);
    EXPECT_NEAR(std::abs(b[0] + l * kInvSqrt2), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(b[1] - kInvSqrt2), 0.0, 1e-12);
  }
}

TEST(Mobius, ComposesPointwise) {
  const auto c = cayley_candidate();
  const DiscAutomorphism m{0.7, cplx(0.2, -0.35)};
  const auto t = mobius_reparametrize(c, m);
  for (cplx l : random_disc_points(30, 0.8, 3)) {
    const CVec a = c.rep.eval(m(l)), b = t.rep.eval(l);
    for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(std::abs(a[j] - b[j]), 0.0, 1e-9 * (1.0 + std::abs(a[j])));
  }
}

TEST(Mobius, VerdictInvariantUnderRandomAutomorphisms) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& c : {semiball_candidate(), cayley_candidate()}) {
    const Verdict base = certify(c.domain, c, c.h).verdict;
    ASSERT_EQ(base, Verdict::certified);
    for (int s = 0; s < 10; ++s) {
      const DiscAutomorphism m{kTwoPi * u(rng), std::polar(0.6 * std::sqrt(u(rng)), kTwoPi * u(rng))};
      const auto t = mobius_reparametrize(c, m);
      const auto r = certify(t.domain, t, t.h);
      EXPECT_EQ(r.verdict, base) << "theta " << m.theta << " w " << m.w << ": " << r.verdict_string();
    }
  }
}

TEST(Mobius, HalfShiftOnSemiball) {
  const auto c = semiball_candidate();
  const auto t = mobius_reparametrize(c, DiscAutomorphism{0.0, 0.3});
  EXPECT_EQ(certify(t.domain, t, t.h).verdict, Verdict::certified);
}

TEST(Invariants, ScalingOfDualMap) {
  for (const auto& c : {semiball_candidate(), cayley_candidate()}) {
    const auto base = certify(c.domain, c, c.h);
    const PsiEvaluator psi(c.rep, c.h);
    const CVec z = c.rep.eval(0.25);
    for (double t : {0.5, 2.0, 10.0}) {
      const HParams ht = scaled(c.h, t);
      const auto r = certify(c.domain, c, ht);
      EXPECT_EQ(r.verdict, base.verdict);
      EXPECT_NEAR(r.psi_at_zero, t * base.psi_at_zero, 1e-12 * t);
      const PsiEvaluator psit(c.rep, ht);
      for (cplx l : {cplx(0.0), cplx(0.3, 0.2), cplx(-0.6, 0.1)})
        EXPECT_NEAR(std::abs(psit(z, l) - t * psi(z, l)), 0.0, 1e-12 * t * (1.0 + std::abs(psi(z, l))));
    }
  }
}

TEST(Invariants, DenseSamplingOnWorkedExamples) {
  CertifyConfig dense;
  dense.interior_samples = 2000;
  dense.boundary_samples = 500;
  dense.seed = 77;
  dense.radii.clear();
  dense.radii.push_back(0.0);
  for (int i = 1; i <= 30; ++i) dense.radii.push_back(0.03 * i);
  for (const auto& c : {semiball_candidate(), cayley_candidate()}) {
    const auto r = certify(c.domain, c, c.h, dense);
    EXPECT_EQ(r.verdict, Verdict::certified) << r.verdict_string();
    EXPECT_LE(r.psi_max, 1e-9);
    EXPECT_GE(r.z_samples * r.lambda_samples, 10u * 250u * 193u);
  }
}

TEST(Invariants, SplitRecombinationIsBitIdentical) {
  for (const auto& c : {semiball_candidate(), cayley_candidate()}) {
    auto [regular, singular] = split_parts(c.rep);
    GeodesicCandidate joined = c;
    joined.rep = regular;
    joined.rep.atoms = singular.atoms;
    for (std::size_t j = 0; j < joined.rep.n; ++j) joined.rep.imconst[j] += singular.imconst[j];
    const auto a = certify(c.domain, c, c.h), b = certify(joined.domain, joined, joined.h);
    EXPECT_EQ(a.support_residual, b.support_residual);
    EXPECT_EQ(a.holo_residuals, b.holo_residuals);
    EXPECT_EQ(a.psi_max, b.psi_max);
    EXPECT_EQ(a.psi_at_zero, b.psi_at_zero);
    EXPECT_EQ(a.atom_residual, b.atom_residual);
    EXPECT_EQ(a.verdict, b.verdict);
  }
}

TEST(Invariants, CertifyIsDeterministicForFixedSeed) {
  const auto c = cayley_candidate();
  CertifyConfig cfg;
  cfg.seed = 5;
  EXPECT_EQ(certify(c.domain, c, c.h, cfg).psi_max, certify(c.domain, c, c.h, cfg).psi_max);
}
