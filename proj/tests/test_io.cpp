#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "geolab/io.hpp"

using namespace geolab;
namespace fs = std::filesystem;

namespace {

bool same_h(const HParams& a, const HParams& b) {
  if (a.n != b.n || a.d != b.d || a.free != b.free || a.constrained.size() != b.constrained.size()) return false;
  for (std::size_t i = 0; i < a.constrained.size(); ++i) {
    if (a.constrained[i].index() != b.constrained[i].index()) return false;
    if (const auto* p = std::get_if<PairForm>(&a.constrained[i])) {
      const auto& q = std::get<PairForm>(b.constrained[i]);
      if (p->a != q.a || p->b != q.b) return false;
    } else {
      const auto& p2 = std::get<PositiveForm>(a.constrained[i]);
      const auto& q = std::get<PositiveForm>(b.constrained[i]);
      if (p2.sign != q.sign || p2.c != q.c || p2.d_blaschke != q.d_blaschke) return false;
    }
  }
  return true;
}

}  // namespace

TEST(Json, NumbersUseSeventeenDigits) {
  const io::json j{{"x", 0.1}, {"y", std::nan("")}, {"z", 1}};
  const std::string s = io::dump(j);
  EXPECT_NE(s.find("0.10000000000000001"), std::string::npos);
  EXPECT_NE(s.find("\"y\": null"), std::string::npos);
  EXPECT_EQ(io::json::parse(s).at("x").get<double>(), 0.1);
}

TEST(Json, HParamsRoundTrip) {
  const HParams h{3, 2, {CVec{cplx(0.1, -0.2), 1.0 / 3.0}},
                  {PairForm{cplx(0.7, 0.3), 2.5}, PositiveForm{-1, 1.25, cplx(0.2, -0.4)}}};
  const HParams back = io::hparams_from(io::json::parse(io::dump(io::to_json(h))));
  EXPECT_TRUE(same_h(h, back));
}

TEST(Json, HParamsErrorsNameTheField) {
  try {
    io::hparams_from(io::json::parse(R"({"n": 2, "d": 1, "free": [[[1, 0]]]})"));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("constrained"), std::string::npos);
  }
}

TEST(Json, AtomsAndDomainRoundTrip) {
  const std::vector<Atom> atoms{Atom{0.25, 1.5, {1.0}}, Atom{3.0, kTwoPi, {1.0}}};
  const auto back = io::atoms_from(io::json::parse(io::dump(io::to_json(atoms))));
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back[i].angle, atoms[i].angle);
    EXPECT_EQ(back[i].weight, atoms[i].weight);
    EXPECT_EQ(back[i].direction, atoms[i].direction);
  }
  const auto poly = DomainDescriptor::tube_polygon({{{-1, -1}}, {{2, -1}}, {{0, 1}}});
  const auto dom = io::domain_from(io::json::parse(io::dump(io::to_json(poly))));
  EXPECT_EQ(dom.kind, DomainKind::tube_polygon);
  EXPECT_EQ(dom.vertices, poly.vertices);
  EXPECT_EQ(io::domain_from(io::json("paraboloid")).kind, DomainKind::paraboloid);
}

TEST(Json, CandidateRoundTripPreservesEvaluation) {
  const auto c = reconstruct(DomainDescriptor::paraboloid(), HParams{2, 1, {CVec{0.0}}, {PositiveForm{-1, 1.0, 1.0}}},
                             {Atom{0.0, kTwoPi, {1.0}}}, {0.5}, CircleGrid(64));
  const std::string text = io::dump(io::to_json(c));
  const auto back = io::candidate_from(io::json::parse(text));
  for (cplx l : {cplx(0.0), cplx(0.3, 0.4), cplx(-0.8, 0.1)}) {
    const CVec a = c.rep.eval(l), b = back.rep.eval(l);
    for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(a[j], b[j]);
  }
  EXPECT_EQ(back.boundary.grid().size(), 64u);
  EXPECT_EQ(io::dump(io::to_json(back)), text);
}

TEST(Json, ReportsAreByteIdenticalAcrossRuns) {
  const auto make = [] {
    const auto c = reconstruct(DomainDescriptor::semiball(), HParams{2, 1, {CVec{1.0}}, {PairForm{0.0, 1.0}}}, {}, {0.0});
    return io::dump(io::to_json(certify(c.domain, c, c.h)));
  };
  EXPECT_EQ(make(), make());
}

TEST(Json, AnalyticBaseMatchesBuiltinBall) {
  const auto j = io::json::parse(R"({
    "kind": "analytic", "n": 2, "name": "unit",
    "inequalities": [{"A": [[1,0,0],[0,1,0],[0,0,1]], "c": -1}],
    "bbox": {"lo": [-1,-1,-1], "hi": [1,1,1]}, "interior": [0,0,0]})");
  const auto b = io::base_from(j);
  const auto ref = semitube::ball_base();
  for (double x : {-0.9, -0.3, 0.0, 0.5, 0.99, 1.2})
    for (double y : {-0.5, 0.0, 0.4}) {
      const semitube::Point p{x, y, 0.1};
      EXPECT_EQ(b.contains(p), ref.contains(p));
    }
}

TEST(Json, VoxelBase) {
  // 2 x 1 x 1 grid on [0,2] x [0,1] x [0,1], only the first cell occupied
  const auto j = io::json::parse(R"({
    "kind": "voxel", "n": 2,
    "grid": {"lo": [0,0,0], "hi": [2,1,1], "res": [2,1,1], "occupancy": [1,0]},
    "bbox": {"lo": [0,0,0], "hi": [2,1,1]}, "interior": [0.5,0.5,0.5]})");
  const auto b = io::base_from(j);
  EXPECT_TRUE(b.contains({0.5, 0.5, 0.5}));
  EXPECT_FALSE(b.contains({1.5, 0.5, 0.5}));
  EXPECT_FALSE(b.contains({-0.5, 0.5, 0.5}));
}

TEST(Json, MissingFileIsConfigError) {
  EXPECT_THROW(io::read_json_arg("/nonexistent/geolab.json"), ConfigError);
  EXPECT_THROW(io::read_json_arg("{not json"), ConfigError);
  EXPECT_THROW(io::base_from(io::json::parse(R"({"kind": "mesh"})")), ConfigError);
}

TEST(Csv, HeaderAndRows) {
  const auto s = BoundarySignal::sample(CircleGrid(8), 2, [](cplx l) { return CVec{l, 2.0}; });
  const std::string csv = io::to_csv(s);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "k,theta,re_1,im_1,re_2,im_2");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 9);
}

TEST(Files, WriteAndReadBack) {
  const fs::path p = fs::temp_directory_path() / "geolab_io_test.json";
  io::write_text(p.string(), io::dump(io::json{{"a", 1.5}}));
  EXPECT_EQ(io::read_json_arg(p.string()).at("a").get<double>(), 1.5);
  fs::remove(p);
}
