#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "geolab/semitube.hpp"

using namespace geolab;
using namespace geolab::semitube;

namespace {

bool ball_oracle(const Point& x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] < 1.0; }

bool slit_oracle(const Point& x) {
  const bool disc = x[0] * x[0] + x[1] * x[1] < 1.0;
  const bool slot = x[0] >= 0.0 && std::abs(x[1]) <= 0.15;
  return disc && !slot;
}

bool dumbbell_oracle(const Point& x) {
  auto sq = [](double v) { return v * v; };
  const bool left = sq(x[0] + 1.6) + sq(x[1]) + sq(x[2]) < 1.0;
  const bool right = sq(x[0] - 1.6) + sq(x[1]) + sq(x[2]) < 1.0;
  const bool neck = std::abs(x[0]) <= 1.6 && sq(x[1]) + sq(x[2]) < sq(0.35);
  return left || right || neck;
}

SectionRaster mask(std::size_t m, const std::function<bool(double, double)>& inside) {
  SectionRaster r;
  r.m = m;
  r.R = 1.0;
  r.occ.assign(m * m, 0);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < m; ++i) {
      const cplx c = r.pixel_center(i, j);
      if (!inside(c.real(), c.imag())) continue;
      r.occ[j * m + i] = 1;
      ++r.occupied;
      r.touches[0] = r.touches[0] || i == 0;
      r.touches[1] = r.touches[1] || i == m - 1;
      r.touches[2] = r.touches[2] || j == 0;
      r.touches[3] = r.touches[3] || j == m - 1;
    }
  return r;
}

}  // namespace

TEST(PiIota, Examples) {
  EXPECT_EQ(project_pi({cplx(1, 2), cplx(3, 4)}), (Point{1, 2, 3}));
  const CVec z = lift_iota({1, 2, 3});
  ASSERT_EQ(z.size(), 2u);
  EXPECT_EQ(z[0], cplx(1, 2));
  EXPECT_EQ(z[1], cplx(3, 0));
}

TEST(PiIota, RoundTripIsExact) {
  std::mt19937_64 rng(0);
  std::normal_distribution<double> g(0.0, 10.0);
  for (int s = 0; s < 100; ++s) {
    for (std::size_t dim : {3u, 5u}) {
      Point x(dim);
      for (auto& c : x) c = g(rng);
      EXPECT_EQ(project_pi(lift_iota(x)), x);
      CVec z = lift_iota(x);
      z.back() += cplx(0.0, g(rng));
      const CVec w = lift_iota(project_pi(z));
      for (std::size_t j = 0; j + 1 < z.size(); ++j) EXPECT_EQ(w[j], z[j]);
      EXPECT_EQ(w.back().real(), z.back().real());
    }
  }
}

TEST(Base, BuiltinsAgreeWithOracles) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const std::pair<Base, std::function<bool(const Point&)>> cases[] = {
      {ball_base(), ball_oracle}, {slit_disc_base(), slit_oracle}, {dumbbell_base(), dumbbell_oracle}};
  for (const auto& [base, oracle] : cases) {
    for (int s = 0; s < 20000; ++s) {
      const Point x{u(rng), u(rng), u(rng)};
      EXPECT_EQ(base.contains(x), oracle(x)) << base.name << " at " << x[0] << "," << x[1] << "," << x[2];
    }
  }
  EXPECT_THROW(builtin_base("torus"), ConfigError);
  EXPECT_NO_THROW(builtin_base("slit-disc"));
}

TEST(LineSection, BallVerticalStrip) {
  const auto r = line_section(ball_base(), ComplexLine{{0.0, 0.0}, {0.0, 1.0}}, 2.0, 128);
  for (std::size_t j = 0; j < r.m; ++j)
    for (std::size_t i = 0; i < r.m; ++i) {
      const cplx t = r.pixel_center(i, j);
      EXPECT_EQ(r.at(i, j), t.real() * t.real() < 1.0);
    }
  EXPECT_TRUE(r.touches[2] && r.touches[3]);
  EXPECT_FALSE(r.touches[0] || r.touches[1]);
  const auto t = topology(r);
  EXPECT_EQ(t.components, 1u);
  EXPECT_EQ(t.holes, 0u);
  EXPECT_TRUE(t.inconclusive);
}

TEST(LineSection, SlitDiscVerticalLineFillsWindow) {
  const auto r = line_section(slit_disc_base(), ComplexLine{lift_iota({-0.5, 0.0, 0.0}), {0.0, 1.0}}, 4.0, 64);
  EXPECT_EQ(r.occupied, 64u * 64u);
  EXPECT_TRUE(r.truncated());
  EXPECT_EQ(r.sides_touched(), 4u);
  EXPECT_TRUE(topology(r).inconclusive);
}

TEST(LineSection, EmptyIntersection) {
  const auto r = line_section(ball_base(), ComplexLine{{cplx(5.0, 0.0), 0.0}, {0.0, 1.0}}, 2.0, 64);
  EXPECT_EQ(r.occupied, 0u);
  const auto t = topology(r);
  EXPECT_EQ(t.components, 0u);
  EXPECT_EQ(t.margin, -1);
  EXPECT_FALSE(t.violates());
}

TEST(LineSection, InvalidArguments) {
  const auto b = ball_base();
  EXPECT_THROW(line_section(b, ComplexLine{{0.0, 0.0}, {0.0, 0.0}}, 1.0, 64), ArgumentError);
  EXPECT_THROW(line_section(b, ComplexLine{{0.0, 0.0}, {1.0, 0.0}}, 0.0, 64), ArgumentError);
  EXPECT_THROW(line_section(b, ComplexLine{{0.0, 0.0}, {1.0, 0.0}}, 1.0, 32), ArgumentError);
}

TEST(Topology, Masks) {
  const auto full = topology(mask(64, [](double, double) { return true; }));
  EXPECT_EQ(full.components, 1u);
  EXPECT_EQ(full.holes, 0u);

  const auto annulus = topology(mask(128, [](double x, double y) {
    const double r2 = x * x + y * y;
    return r2 > 0.2 && r2 < 0.6;
  }));
  EXPECT_EQ(annulus.components, 1u);
  EXPECT_EQ(annulus.holes, 1u);
  EXPECT_FALSE(annulus.inconclusive);
  EXPECT_TRUE(annulus.violates());

  const auto two = topology(mask(128, [](double x, double y) {
    return (x - 0.5) * (x - 0.5) + y * y < 0.09 || (x + 0.5) * (x + 0.5) + y * y < 0.09;
  }));
  EXPECT_EQ(two.components, 2u);
  EXPECT_EQ(two.holes, 0u);
  EXPECT_TRUE(two.violates());

  const auto disc = topology(mask(128, [](double x, double y) { return x * x + y * y < 0.5; }));
  EXPECT_EQ(disc.components, 1u);
  EXPECT_EQ(disc.holes, 0u);
  EXPECT_FALSE(disc.violates());
  EXPECT_GT(disc.margin, 0);
}

TEST(Topology, TranslationEquivariance) {
  const Point w{0.7, -1.3, 2.1};
  for (const auto& base : {ball_base(), dumbbell_base(), slit_disc_base()}) {
    const Base moved = base.translated(w);
    const CVec iw = lift_iota(w);
    for (const auto& line : sample_lines(base, 40, 3)) {
      ComplexLine shifted = line;
      for (std::size_t j = 0; j < shifted.anchor.size(); ++j) shifted.anchor[j] += iw[j];
      const double R = default_window(base);
      const auto a = topology(line_section(base, line, R, 128));
      const auto b = topology(line_section(moved, shifted, R, 128));
      EXPECT_EQ(a.components, b.components);
      EXPECT_EQ(a.holes, b.holes);
      EXPECT_EQ(a.inconclusive, b.inconclusive);
      EXPECT_EQ(a.margin, b.margin);
    }
  }
}

TEST(Topology, AcceptedReportsStableUnderDoubling) {
  for (const auto& base : {ball_base(), dumbbell_base(), slit_disc_base()}) {
    const double R = default_window(base);
    std::size_t accepted = 0, unstable = 0;
    for (const auto& line : sample_lines(base, 60, 11)) {
      const auto a = classify_line(base, line, R, 256, ScanConfig{}.min_pixels);
      if (a.kind == LineOutcome::Kind::unstable) ++unstable;
      if (a.kind != LineOutcome::Kind::clean && a.kind != LineOutcome::Kind::violation) continue;
      ++accepted;
      const auto b = classify_line(base, line, R, 512, ScanConfig{}.min_pixels);
      EXPECT_TRUE(a.report.same_counts(b.report))
          << base.name << ": " << a.report.components << "/" << a.report.holes << " vs " << b.report.components << "/"
          << b.report.holes;
    }
    EXPECT_GT(accepted, 0u) << base.name;
    EXPECT_LE(10 * unstable, accepted) << base.name;
  }
}

TEST(Topology, TightWindowResolvesSmallSections) {
  // a section only a few coarse pixels wide that splits into two pieces
  const auto base = dumbbell_base();
  const double R = default_window(base);
  for (const auto& line : sample_lines(base, 60, 11)) {
    const auto coarse = line_section(base, line, R, 256);
    if (coarse.occupied < 16 || topology(coarse).inconclusive) continue;
    const auto w = tight_window(line, coarse);
    ASSERT_TRUE(w);
    EXPECT_LT(w->R, R);
    const auto zoomed = line_section(base, w->line, w->R, 256);
    EXPECT_GE(zoomed.occupied, coarse.occupied);
    EXPECT_FALSE(zoomed.truncated());
  }
}

TEST(Scan, ConvexBallIsCleanAtSeveralSeeds) {
  for (unsigned long long seed = 0; seed < 5; ++seed) {
    ScanConfig cfg;
    cfg.lines = 200;
    cfg.seed = seed;
    const auto rep = cconvexity_scan(ball_base(), cfg);
    EXPECT_EQ(rep.violations, 0u) << "seed " << seed;
    EXPECT_EQ(rep.lines_examined, 200u);
    EXPECT_GT(rep.clean, 0u);
  }
}

TEST(Scan, DumbbellViolationReverifiedAtFourTimesResolution) {
  ScanConfig cfg;
  cfg.lines = 2000;
  const auto rep = cconvexity_scan(dumbbell_base(), cfg);
  ASSERT_TRUE(rep.first_violation);
  const auto& v = *rep.first_violation;
  EXPECT_TRUE(v.report.violates());
  ASSERT_TRUE(v.zoom);
  const auto fine = topology(line_section(dumbbell_base(), v.zoom->line, v.zoom->R, 4 * rep.resolution));
  EXPECT_TRUE(fine.violates());
  EXPECT_TRUE(fine.same_counts(v.report));
}

TEST(Scan, SlitDiscIsClean) {
  const auto rep = cconvexity_scan(slit_disc_base(), ScanConfig{});
  EXPECT_EQ(rep.violations, 0u);
  EXPECT_EQ(rep.lines_examined, 500u);
}

TEST(Convexity, Examples) {
  EXPECT_TRUE(convexity_check(ball_base()).convex);
  EXPECT_EQ(convexity_check(ball_base()).pairs_tested, 10000u);
  for (const auto& [base, oracle] : {std::pair{slit_disc_base(), slit_oracle}, std::pair{dumbbell_base(), dumbbell_oracle}}) {
    const auto r = convexity_check(base);
    EXPECT_FALSE(r.convex) << base.name;
    ASSERT_TRUE(r.witness);
    const auto& [x, y, mid] = *r.witness;
    EXPECT_TRUE(oracle(x));
    EXPECT_TRUE(oracle(y));
    EXPECT_FALSE(oracle(mid));
    for (std::size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(mid[i], 0.5 * (x[i] + y[i]));
  }
}

TEST(Fiber, Examples) {
  EXPECT_TRUE(fiber_condition_check(ball_base()).holds);
  EXPECT_TRUE(fiber_condition_check(dumbbell_base()).holds);
  const auto slit = fiber_condition_check(slit_disc_base());
  EXPECT_FALSE(slit.holds);
  ASSERT_TRUE(slit.witness);
  // a vertical fiber that never enters the base and touches it nowhere on the far side
  Point x = *slit.witness;
  for (double h : {-100.0, 0.0, 100.0}) {
    x[2] = h;
    EXPECT_FALSE(slit_oracle(x));
  }
}

TEST(Correspondence, Examples) {
  EXPECT_EQ(b_from_alpha({cplx(1, -2), 0.0}), (Point{1, 2}));
  const CVec alpha = alpha_from_b({1, 2}, 2);
  EXPECT_EQ(alpha[0], cplx(1, -2));
  EXPECT_EQ(alpha[1], cplx(0.0));
  EXPECT_EQ(RealAffineSubspace::companion({1, 2, 3, 4}), (Point{-2, 1, -4, 3}));
  EXPECT_THROW(alpha_from_b({0, 0}, 2), ArgumentError);
  EXPECT_THROW(b_from_alpha({0.0, 0.0}), ArgumentError);
  EXPECT_THROW(hyperplane_from_b({0, 0, 0}, {0, 0}, 2), ArgumentError);
  EXPECT_THROW(hyperplane_from_b({0, 0, 0}, {1, 0}, 3), ArgumentError);
}

TEST(Correspondence, RoundTrips) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  for (int s = 0; s < 100; ++s) {
    const Point b{g(rng), g(rng), g(rng), g(rng)};
    EXPECT_EQ(b_from_alpha(alpha_from_b(b, 2)), b);
    EXPECT_EQ(b_from_alpha(alpha_from_b(b, 1)), b);
  }
}

TEST(Correspondence, ProjectionOfComplexHyperplaneIsRealHyperplane) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g;
  for (int s = 0; s < 200; ++s) {
    const Point a{g(rng), g(rng), g(rng)};
    const Point b{g(rng), g(rng)};
    const auto H = hyperplane_from_b(a, b, 1);
    const CVec alpha = alpha_from_b(b, 1);
    const CVec anchor = lift_iota(a);
    // z on L: choose z_1 freely and solve for z_2
    const cplx z1(g(rng), g(rng));
    const CVec z{z1, anchor[1] - alpha[0] * (z1 - anchor[0])};
    EXPECT_TRUE(on_complex_hyperplane(alpha, anchor, z, 1e-12));
    EXPECT_TRUE(H.contains(project_pi(z), 1e-12));
    // x on H lifts into L with the right imaginary part
    Point x{g(rng), g(rng), 0.0};
    x[2] = a[2] - b[0] * (x[0] - a[0]) - b[1] * (x[1] - a[1]);
    ASSERT_TRUE(H.contains(x, 1e-12));
    CVec lift = lift_iota(x);
    lift[1] -= cplx(0.0, (alpha[0] * (lift[0] - anchor[0]) + (lift[1] - anchor[1])).imag());
    EXPECT_TRUE(on_complex_hyperplane(alpha, anchor, lift, 1e-12));
  }
}

TEST(LinearConvexity, BallSucceedsWithSupportingPlanes) {
  const auto rep = linear_convexity_scan(ball_base());
  ASSERT_EQ(rep.points.size(), 50u);
  EXPECT_EQ(rep.successes(), 50u);
  for (const auto& p : rep.points) {
    EXPECT_FALSE(ball_oracle(p.a));
    if (p.codim != 1) continue;
    // distance from the centre to {x3 - a3 + b.(x' - a') = 0}
    const double num = std::abs(-p.a[2] - p.b[0] * p.a[0] - p.b[1] * p.a[1]);
    EXPECT_GE(num / std::sqrt(1.0 + p.b[0] * p.b[0] + p.b[1] * p.b[1]), 1.0 - 1e-9);
  }
}

TEST(LinearConvexity, SlitProbeUsesCodimensionTwo) {
  const Point a{0.5, 0.0, 0.0};
  const auto p = linear_convexity_at(slit_disc_base(), a);
  ASSERT_TRUE(p.success);
  EXPECT_EQ(p.codim, 2);
  const auto H = hyperplane_from_b(a, p.b, 2);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int s = 0; s < 10000; ++s) {
    const Point x{a[0], a[1], u(rng)};
    ASSERT_TRUE(H.contains(x));
    EXPECT_FALSE(slit_oracle(x));
  }
}

TEST(LinearConvexity, DumbbellNeckProbeFails) {
  const Point a{0.0, 0.0, 0.5};
  EXPECT_FALSE(dumbbell_oracle(a));
  EXPECT_FALSE(linear_convexity_at(dumbbell_base(), a).success);
  EXPECT_THROW(linear_convexity_at(dumbbell_base(), {1.6, 0.0, 0.0}), ArgumentError);
}

TEST(Harness, Fixtures) {
  const auto ball = run_harness(ball_base());
  EXPECT_TRUE(ball.applicable);
  EXPECT_TRUE(ball.consistent);
  EXPECT_TRUE(ball.convexity.convex);
  EXPECT_EQ(ball.scan.violations, 0u);

  HarnessConfig cfg;
  cfg.scan.lines = 2000;
  const auto dumbbell = run_harness(dumbbell_base(), cfg);
  EXPECT_TRUE(dumbbell.applicable);
  EXPECT_TRUE(dumbbell.consistent);
  EXPECT_FALSE(dumbbell.convexity.convex);
  EXPECT_GT(dumbbell.scan.violations, 0u);

  const auto slit = run_harness(slit_disc_base());
  EXPECT_FALSE(slit.applicable);
  EXPECT_TRUE(slit.consistent);
  EXPECT_FALSE(slit.convexity.convex);
  EXPECT_EQ(slit.scan.violations, 0u);
  EXPECT_FALSE(slit.note.empty());
}
