#pragma once

// JSON and CSV interchange for domains, dual maps, candidates, reports and
// semitube bases. Numbers are written with 17 significant digits.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "geolab/circle.hpp"
#include "geolab/connect.hpp"
#include "geolab/domains.hpp"
#include "geolab/error.hpp"
#include "geolab/geodesic.hpp"
#include "geolab/h_class.hpp"
#include "geolab/semitube.hpp"

namespace geolab::io {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

namespace detail {

inline std::string number(double v) {
  if (!std::isfinite(v)) return "null";
  if (v == 0.0) return "0";  // "-0" would not survive a parse
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write(std::ostringstream& os, const json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << json(it.key()).dump() << ": ";
        write(os, it.value(), indent, depth + 1);
      }
      os << '\n' << close << '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
      if (flat) {
        os << '[';
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          write(os, j[i], indent, depth + 1);
        }
        os << ']';
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        write(os, j[i], indent, depth + 1);
      }
      os << '\n' << close << ']';
      return;
    }
    case json::value_t::number_float:
      os << number(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

}  // namespace detail

/// Deterministic text form; floats use %.17g, non-finite values become null.
inline std::string dump(const json& j) {
  std::ostringstream os;
  detail::write(os, j, 2, 0);
  os << '\n';
  return os.str();
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

/// Accepts inline JSON text or a path to a JSON file.
inline json read_json_arg(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) {
    try {
      return json::parse(arg);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("inline JSON does not parse: ") + e.what());
    }
  }
  return read_json_file(arg);
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
}

inline const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
  return j.at(key);
}

inline double as_double(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  return j.get<double>();
}

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ConfigError(where + ": expected a number or [re, im]");
}

inline json to_json(const CVec& v) {
  json a = json::array();
  for (const auto& z : v) a.push_back(to_json(z));
  return a;
}

inline CVec cvec_from(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array");
  CVec out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(complex_from(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline RVec rvec_from(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>()};
  if (!j.is_array()) throw ConfigError(where + ": expected an array of numbers");
  RVec out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_double(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline json to_json(const RVec& v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

// ---- dual maps ----

inline json to_json(const HParams& h) {
  json free = json::array();
  for (const auto& c : h.free) free.push_back(to_json(c));
  json cons = json::array();
  for (const auto& f : h.constrained) {
    if (const auto* p = std::get_if<PairForm>(&f)) {
      cons.push_back(json{{"kind", "pair"}, {"a", to_json(p->a)}, {"b", p->b.real()}});
    } else {
      const auto& q = std::get<PositiveForm>(f);
      cons.push_back(json{{"kind", "positive"}, {"sign", q.sign}, {"c", q.c}, {"d_blaschke", to_json(q.d_blaschke)}});
    }
  }
  return json{{"n", h.n}, {"d", h.d}, {"free", free}, {"constrained", cons}};
}

inline HParams hparams_from(const json& j) {
  const std::string where = "h";
  HParams h;
  h.n = field(j, "n", where).get<std::size_t>();
  h.d = field(j, "d", where).get<std::size_t>();
  const json& free = field(j, "free", where);
  for (std::size_t i = 0; i < free.size(); ++i) h.free.push_back(cvec_from(free[i], "h.free[" + std::to_string(i) + "]"));
  const json& cons = field(j, "constrained", where);
  for (std::size_t i = 0; i < cons.size(); ++i) {
    const std::string w = "h.constrained[" + std::to_string(i) + "]";
    const std::string kind = field(cons[i], "kind", w).get<std::string>();
    if (kind == "pair") {
      h.constrained.emplace_back(PairForm{complex_from(field(cons[i], "a", w), w + ".a"),
                                          complex_from(field(cons[i], "b", w), w + ".b")});
    } else if (kind == "positive") {
      PositiveForm f;
      f.sign = cons[i].value("sign", 1);
      f.c = as_double(field(cons[i], "c", w), w + ".c");
      f.d_blaschke = cons[i].contains("d_blaschke") ? complex_from(cons[i].at("d_blaschke"), w + ".d_blaschke") : cplx{};
      h.constrained.emplace_back(f);
    } else {
      throw ConfigError(w + ".kind: expected 'pair' or 'positive'");
    }
  }
  require_valid(h);
  return h;
}

// ---- atoms, signals, measures ----

inline json to_json(const Atom& a) {
  return json{{"theta", a.angle}, {"alpha", a.weight}, {"rho", to_json(a.direction)}};
}

inline json to_json(const std::vector<Atom>& atoms) {
  json a = json::array();
  for (const auto& x : atoms) a.push_back(to_json(x));
  return a;
}

inline std::vector<Atom> atoms_from(const json& j) {
  if (!j.is_array()) throw ConfigError("atoms: expected an array");
  std::vector<Atom> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = "atoms[" + std::to_string(i) + "]";
    out.push_back(Atom{as_double(field(j[i], "theta", w), w + ".theta"),
                       as_double(field(j[i], "alpha", w), w + ".alpha"), rvec_from(field(j[i], "rho", w), w + ".rho")});
  }
  return out;
}

inline json to_json(const BoundarySignal& s, const std::vector<Atom>& atoms = {}) {
  json values = json::array();
  for (const auto& comp : s.values()) values.push_back(to_json(comp));
  return json{{"N", s.grid().size()}, {"values", values}, {"atoms", to_json(atoms)}};
}

inline BoundarySignal signal_from(const json& j) {
  const std::size_t N = field(j, "N", "signal").get<std::size_t>();
  const json& values = field(j, "values", "signal");
  std::vector<CVec> comps;
  for (std::size_t i = 0; i < values.size(); ++i) {
    comps.push_back(cvec_from(values[i], "signal.values[" + std::to_string(i) + "]"));
    if (comps.back().size() != N) throw ConfigError("signal.values: component length differs from N");
  }
  return BoundarySignal(CircleGrid(N), std::move(comps));
}

inline json to_json(const BoundaryMeasure& m) {
  json values = json::array();
  for (const auto& comp : m.density) values.push_back(to_json(comp));
  return json{{"N", m.grid.size()}, {"n", m.n}, {"d", m.d}, {"values", values}, {"atoms", to_json(m.atoms)}};
}

inline BoundaryMeasure measure_from(const json& j) {
  BoundaryMeasure m;
  m.grid = CircleGrid(field(j, "N", "measure").get<std::size_t>());
  m.n = field(j, "n", "measure").get<std::size_t>();
  m.d = field(j, "d", "measure").get<std::size_t>();
  const json& values = field(j, "values", "measure");
  for (std::size_t i = 0; i < values.size(); ++i)
    m.density.push_back(rvec_from(values[i], "measure.values[" + std::to_string(i) + "]"));
  if (j.contains("atoms")) m.atoms = atoms_from(j.at("atoms"));
  m.validate();
  return m;
}

// ---- domains ----

inline json to_json(const DomainDescriptor& dom) {
  json params = json::object();
  if (dom.kind == DomainKind::euclidean_ball) params["radius"] = dom.radius;
  if (dom.kind == DomainKind::tube_polygon) {
    json v = json::array();
    for (const auto& p : dom.vertices) v.push_back(json::array({p[0], p[1]}));
    params["vertices"] = v;
  }
  return json{{"kind", to_string(dom.kind)}, {"n", dom.n}, {"d", dom.d}, {"parameters", params}};
}

inline DomainDescriptor domain_from(const json& j) {
  if (j.is_string()) return builtin_domain(j.get<std::string>());
  DomainDescriptor dom;
  dom.kind = domain_kind_from_string(field(j, "kind", "domain").get<std::string>());
  dom.n = j.value("n", std::size_t{2});
  dom.d = j.value("d", dom.kind == DomainKind::euclidean_ball ? std::size_t{0}
                       : dom.kind == DomainKind::tube_polygon ? std::size_t{2}
                                                              : std::size_t{1});
  if (j.contains("parameters")) {
    const json& p = j.at("parameters");
    dom.radius = p.value("radius", 1.0);
    if (p.contains("vertices"))
      for (const auto& v : p.at("vertices")) dom.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
  }
  dom.validate();
  return dom;
}

/// A built-in name or a path to a descriptor file.
inline DomainDescriptor domain_arg(const std::string& arg) {
  try {
    return builtin_domain(arg);
  } catch (const ConfigError&) {
  }
  return domain_from(read_json_arg(arg));
}

// ---- candidates ----

inline json to_json(const GeodesicCandidate& c) {
  json taylor = json::array();
  for (const auto& comp : c.rep.taylor) taylor.push_back(to_json(comp));
  return json{{"schema_version", kSchemaVersion},
              {"domain", to_json(c.domain)},
              {"n", c.rep.n},
              {"d", c.rep.d},
              {"taylor", taylor},
              {"atoms", to_json(c.rep.atoms)},
              {"imconst", to_json(c.rep.imconst)},
              {"h", to_json(c.h)},
              {"boundary", to_json(c.boundary)}};
}

inline GeodesicCandidate candidate_from(const json& j) {
  const std::string w = "candidate";
  HoloRep rep;
  rep.n = field(j, "n", w).get<std::size_t>();
  rep.d = field(j, "d", w).get<std::size_t>();
  const json& taylor = field(j, "taylor", w);
  for (std::size_t i = 0; i < taylor.size(); ++i)
    rep.taylor.push_back(cvec_from(taylor[i], "candidate.taylor[" + std::to_string(i) + "]"));
  if (rep.taylor.size() != rep.n) throw ConfigError("candidate.taylor: expected n components");
  rep.atoms = j.contains("atoms") ? atoms_from(j.at("atoms")) : std::vector<Atom>{};
  rep.imconst = expand_imconst(j.contains("imconst") ? rvec_from(j.at("imconst"), "candidate.imconst") : RVec{},
                               rep.n, rep.d);
  DomainDescriptor dom = domain_from(field(j, "domain", w));
  HParams h = j.contains("h") ? hparams_from(j.at("h")) : HParams{};
  BoundarySignal boundary = j.contains("boundary")
                                ? signal_from(j.at("boundary"))
                                : BoundarySignal::sample(CircleGrid(256), rep.n, [&](cplx l) { return rep.eval_regular(l); });
  return GeodesicCandidate{std::move(rep), std::move(dom), std::move(h), std::move(boundary)};
}

// ---- reports ----

inline json to_json(const Tolerances& t) {
  return json{{"psi", t.psi}, {"nd", t.nd},       {"holo", t.holo},
              {"atom", t.atom}, {"support", t.support}, {"boundary", t.boundary}};
}

inline json to_json(const CertifyConfig& c) {
  return json{{"seed", c.seed},          {"interior_samples", c.interior_samples},
              {"boundary_samples", c.boundary_samples}, {"boundary_band", c.boundary_band},
              {"radii", to_json(c.radii)}, {"angles", c.angles},
              {"tolerances", to_json(c.tol)}};
}

inline json to_json(const CertificationReport& r) {
  return json{{"verdict", r.verdict_string()},
              {"support_residual", r.support_residual},
              {"holo_residuals", to_json(r.holo_residuals)},
              {"psi_max", r.psi_max},
              {"psi_at_zero", r.psi_at_zero},
              {"atom_residual", r.atom_residual},
              {"center_inside", r.center_inside},
              {"center_margin", r.center_margin},
              {"bounded_projection", r.bounded_projection},
              {"z_samples", r.z_samples},
              {"lambda_samples", r.lambda_samples}};
}

inline json to_json(const semitube::TopologyReport& t) {
  json j{{"components", t.components}, {"holes", t.holes},           {"resolution", t.resolution},
         {"margin", t.margin},         {"inconclusive", t.inconclusive}};
  if (t.stable) j["stable"] = *t.stable;
  return j;
}

inline json to_json(const semitube::ComplexLine& l) {
  return json{{"anchor", to_json(l.anchor)}, {"direction", to_json(l.direction)}};
}

inline json to_json(const semitube::ScanReport& r) {
  json j{{"base", r.base},   {"lines_examined", r.lines_examined}, {"empty", r.empty},
         {"tiny", r.tiny},   {"inconclusive", r.inconclusive},     {"clean", r.clean},
         {"unstable", r.unstable}, {"violations", r.violations},  {"window", r.window},
         {"resolution", r.resolution}};
  if (r.first_violation) {
    json v{{"line", to_json(r.first_violation->line)}, {"report", to_json(r.first_violation->report)}};
    if (r.first_violation->doubled) v["doubled"] = to_json(*r.first_violation->doubled);
    if (r.first_violation->zoom)
      v["zoom"] = json{{"line", to_json(r.first_violation->zoom->line)}, {"R", r.first_violation->zoom->R}};
    j["first_violation"] = v;
  } else {
    j["first_violation"] = nullptr;
  }
  return j;
}

inline json to_json(const semitube::ConvexityResult& c) {
  json j{{"convex", c.convex}, {"pairs_tested", c.pairs_tested}};
  if (c.witness) j["witness"] = json{{"x", (*c.witness)[0]}, {"y", (*c.witness)[1]}, {"midpoint", (*c.witness)[2]}};
  return j;
}

inline json to_json(const semitube::FiberResult& f) {
  json j{{"holds", f.holds}, {"points_tested", f.points_tested}};
  if (f.witness) j["witness"] = *f.witness;
  return j;
}

inline json to_json(const semitube::HarnessRecord& r) {
  return json{{"base", r.base},
              {"fiber_condition", to_json(r.fiber)},
              {"convexity", to_json(r.convexity)},
              {"scan", to_json(r.scan)},
              {"applicable", r.applicable},
              {"consistent", r.consistent},
              {"note", r.note}};
}

inline json to_json(const semitube::LinConvexReport& r) {
  json pts = json::array();
  for (const auto& p : r.points)
    pts.push_back(json{{"a", p.a}, {"success", p.success}, {"codim", p.codim}, {"b", p.b}});
  return json{{"points", pts}, {"successes", r.successes()}, {"total", r.points.size()}};
}

// ---- semitube bases ----

inline semitube::Quadric quadric_from(const json& j, std::size_t dim, const std::string& w) {
  semitube::Quadric q;
  if (j.contains("A")) {
    const json& A = j.at("A");
    if (A.size() != dim) throw ConfigError(w + ".A: expected " + std::to_string(dim) + " rows");
    for (const auto& row : A) {
      const RVec r = rvec_from(row, w + ".A");
      if (r.size() != dim) throw ConfigError(w + ".A: row length mismatch");
      q.A.insert(q.A.end(), r.begin(), r.end());
    }
  }
  if (j.contains("b")) {
    q.b = rvec_from(j.at("b"), w + ".b");
    if (q.b.size() != dim) throw ConfigError(w + ".b: length mismatch");
  }
  q.c = j.value("c", 0.0);
  return q;
}

/// {kind: analytic, n, inequalities: [[{A, b, c}, ...], ...] | pieces, bbox: {lo, hi}, interior}
/// or {kind: voxel, n, grid: {lo, hi, res, occupancy}, bbox, interior}.
inline semitube::Base base_from(const json& j) {
  if (j.is_string()) return semitube::builtin_base(j.get<std::string>());
  semitube::Base b;
  b.name = j.value("name", std::string("custom"));
  b.n = j.value("n", std::size_t{2});
  const std::size_t dim = b.dim();
  const std::string kind = field(j, "kind", "base").get<std::string>();
  if (kind == "analytic") {
    const json& ineq = j.contains("pieces") ? j.at("pieces") : field(j, "inequalities", "base");
    std::vector<semitube::Piece> pieces;
    const bool nested = !ineq.empty() && ineq[0].is_array();
    if (nested) {
      for (std::size_t p = 0; p < ineq.size(); ++p) {
        semitube::Piece piece;
        for (std::size_t k = 0; k < ineq[p].size(); ++k)
          piece.all_of.push_back(quadric_from(ineq[p][k], dim, "base.inequalities[" + std::to_string(p) + "]"));
        pieces.push_back(std::move(piece));
      }
    } else {
      semitube::Piece piece;
      for (std::size_t k = 0; k < ineq.size(); ++k)
        piece.all_of.push_back(quadric_from(ineq[k], dim, "base.inequalities[" + std::to_string(k) + "]"));
      pieces.push_back(std::move(piece));
    }
    b.shape = std::move(pieces);
  } else if (kind == "voxel") {
    const json& g = field(j, "grid", "base");
    semitube::VoxelGrid v;
    v.lo = rvec_from(field(g, "lo", "base.grid"), "base.grid.lo");
    v.hi = rvec_from(field(g, "hi", "base.grid"), "base.grid.hi");
    for (const auto& r : field(g, "res", "base.grid")) v.res.push_back(r.get<std::size_t>());
    for (const auto& o : field(g, "occupancy", "base.grid")) v.occupancy.push_back(o.get<int>() != 0 ? 1 : 0);
    b.shape = std::move(v);
  } else {
    throw ConfigError("base.kind: expected 'analytic' or 'voxel'");
  }
  const json& bbox = field(j, "bbox", "base");
  b.bbox_lo = rvec_from(field(bbox, "lo", "base.bbox"), "base.bbox.lo");
  b.bbox_hi = rvec_from(field(bbox, "hi", "base.bbox"), "base.bbox.hi");
  b.interior = rvec_from(field(j, "interior", "base"), "base.interior");
  b.validate();
  return b;
}

inline semitube::Base base_arg(const std::string& arg) {
  try {
    return semitube::builtin_base(arg);
  } catch (const ConfigError&) {
  }
  return base_from(read_json_arg(arg));
}

// ---- CSV ----

/// Columns: k, theta, then re/im per component.
inline std::string to_csv(const BoundarySignal& s) {
  std::ostringstream os;
  os << "k,theta";
  for (std::size_t j = 0; j < s.components(); ++j) os << ",re_" << j + 1 << ",im_" << j + 1;
  os << '\n';
  for (std::size_t k = 0; k < s.grid().size(); ++k) {
    os << k << ',' << detail::number(s.grid().theta(k));
    for (std::size_t j = 0; j < s.components(); ++j)
      os << ',' << detail::number(s.values()[j][k].real()) << ',' << detail::number(s.values()[j][k].imag());
    os << '\n';
  }
  return os.str();
}

}  // namespace geolab::io
