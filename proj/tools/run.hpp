#pragma once

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "geolab/geolab.hpp"

namespace geolab::cli {

enum class Command {
  geodesic_compute,
  geodesic_certify,
  geodesic_connect,
  geodesic_sibling,
  semitube_scan,
  semitube_convexity,
  semitube_harness,
  semitube_linconvex,
  util_roundtrip,
};

inline const char* to_string(Command c) {
  switch (c) {
    case Command::geodesic_compute: return "geodesic compute";
    case Command::geodesic_certify: return "geodesic certify";
    case Command::geodesic_connect: return "geodesic connect";
    case Command::geodesic_sibling: return "geodesic sibling";
    case Command::semitube_scan: return "semitube scan";
    case Command::semitube_convexity: return "semitube convexity";
    case Command::semitube_harness: return "semitube harness";
    case Command::semitube_linconvex: return "semitube linconvex";
    case Command::util_roundtrip: return "util roundtrip-test";
  }
  return "?";
}

enum Exit : int { ok = 0, usage = 1, rejected = 2, degenerate = 3, no_convergence = 4, violations = 5 };

struct ToleranceOverrides {
  std::optional<double> psi, nd, holo, atom, support, boundary;
};

struct RunConfig {
  Command command = Command::geodesic_compute;
  std::string domain = "semiball";
  std::string base = "ball";
  std::string h, atoms, imconst, candidate;
  std::string new_atoms, new_imconst;
  std::string p, q;
  unsigned long long seed = 0;
  std::size_t grid = 256;
  std::size_t interior_samples = 200;
  std::size_t boundary_samples = 50;
  std::size_t starts = 16;
  std::size_t lines = 500;
  std::size_t resolution = 256;
  double window = 0.0;
  std::size_t pairs = 10000;
  std::size_t fiber_points = 200;
  std::size_t exterior = 50;
  std::size_t degree = 32;
  ToleranceOverrides tol;
  std::string out;            // JSON report, stdout when empty
  std::string csv;            // boundary samples
  std::string svg;            // plot file, or directory for semitube scans
  std::string candidate_out;  // candidate JSON
};

namespace detail {

inline void check_tolerance(const char* name, const std::optional<double>& v) {
  if (v && !(*v >= 1e-14 && *v <= 1e-2))
    throw ConfigError(std::string("tolerance --tol-") + name + " must lie in [1e-14, 1e-2]");
}

inline Tolerances resolve(const ToleranceOverrides& o) {
  check_tolerance("psi", o.psi);
  check_tolerance("nd", o.nd);
  check_tolerance("holo", o.holo);
  check_tolerance("atom", o.atom);
  check_tolerance("support", o.support);
  check_tolerance("boundary", o.boundary);
  Tolerances t;
  if (o.psi) t.psi = *o.psi;
  if (o.nd) t.nd = *o.nd;
  if (o.holo) t.holo = *o.holo;
  if (o.atom) t.atom = *o.atom;
  if (o.support) t.support = *o.support;
  if (o.boundary) t.boundary = *o.boundary;
  return t;
}

/// "1,2.5" or a JSON array of numbers.
inline RVec real_list(const std::string& s, const char* name) {
  if (s.empty()) return {};
  if (s.find('[') != std::string::npos) return io::rvec_from(io::read_json_arg(s), name);
  RVec out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(std::string(name) + ": cannot parse '" + item + "' as a number");
    }
  }
  return out;
}

/// JSON array of numbers or [re, im] pairs, or comma-separated reals.
inline CVec point(const std::string& s, const char* name) {
  if (s.empty()) throw ConfigError(std::string(name) + ": missing");
  if (s.find('[') != std::string::npos) return io::cvec_from(io::read_json_arg(s), name);
  CVec out;
  for (double x : real_list(s, name)) out.emplace_back(x);
  return out;
}

inline int verdict_code(Verdict v) {
  switch (v) {
    case Verdict::certified: return Exit::ok;
    case Verdict::boundary_degenerate: return Exit::degenerate;
    case Verdict::rejected: return Exit::rejected;
  }
  return Exit::rejected;
}

inline CertifyConfig certify_config(const RunConfig& cfg) {
  CertifyConfig c;
  c.seed = cfg.seed;
  c.interior_samples = cfg.interior_samples;
  c.boundary_samples = cfg.boundary_samples;
  c.tol = resolve(cfg.tol);
  return c;
}

inline io::json config_json(const RunConfig& cfg) {
  io::json j{{"command", to_string(cfg.command)}, {"seed", cfg.seed}};
  switch (cfg.command) {
    case Command::geodesic_compute:
    case Command::geodesic_certify:
    case Command::geodesic_connect:
    case Command::geodesic_sibling:
      j["domain"] = cfg.domain;
      j["h"] = cfg.h;
      j["atoms"] = cfg.atoms;
      j["imconst"] = cfg.imconst;
      j["candidate"] = cfg.candidate;
      j["new_atoms"] = cfg.new_atoms;
      j["new_imconst"] = cfg.new_imconst;
      j["p"] = cfg.p;
      j["q"] = cfg.q;
      j["grid"] = cfg.grid;
      j["starts"] = cfg.starts;
      j["certify"] = io::to_json(certify_config(cfg));
      break;
    case Command::util_roundtrip:
      j["grid"] = cfg.grid;
      j["degree"] = cfg.degree;
      break;
    default:
      j["base"] = cfg.base;
      j["lines"] = cfg.lines;
      j["resolution"] = cfg.resolution;
      j["window"] = cfg.window;
      j["pairs"] = cfg.pairs;
      j["fiber_points"] = cfg.fiber_points;
      j["exterior"] = cfg.exterior;
  }
  return j;
}

inline void emit(const RunConfig& cfg, io::json report) {
  io::json doc{{"schema_version", io::kSchemaVersion}, {"config", config_json(cfg)}};
  for (auto it = report.begin(); it != report.end(); ++it) doc[it.key()] = it.value();
  const std::string text = io::dump(doc);
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    io::write_text(cfg.out, text);
  }
}

inline void write_candidate_artifacts(const RunConfig& cfg, const GeodesicCandidate& cand) {
  if (!cfg.csv.empty()) io::write_text(cfg.csv, io::to_csv(cand.boundary));
  if (!cfg.svg.empty()) io::write_text(cfg.svg, svg::candidate_plot(cand));
  if (!cfg.candidate_out.empty()) io::write_text(cfg.candidate_out, io::dump(io::to_json(cand)));
}

inline int certify_and_emit(const RunConfig& cfg, const GeodesicCandidate& cand, const HParams& h) {
  const CertificationReport rep = certify(cand.domain, cand, h, certify_config(cfg));
  write_candidate_artifacts(cfg, cand);
  emit(cfg, io::json{{"report", io::to_json(rep)}, {"candidate", io::to_json(cand)}});
  return verdict_code(rep.verdict);
}

inline int compute(const RunConfig& cfg) {
  const DomainDescriptor dom = io::domain_arg(cfg.domain);
  if (cfg.h.empty()) throw ConfigError("--h is required");
  const HParams h = io::hparams_from(io::read_json_arg(cfg.h));
  const std::vector<Atom> atoms = cfg.atoms.empty() ? std::vector<Atom>{} : io::atoms_from(io::read_json_arg(cfg.atoms));
  const RVec imconst = real_list(cfg.imconst, "--imconst");
  std::optional<GeodesicCandidate> cand;
  try {
    cand = reconstruct(dom, h, atoms, imconst, CircleGrid(cfg.grid));
  } catch (const ConfigError&) {
    throw;
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    emit(cfg, io::json{{"report", io::json{{"verdict", "rejected(pipeline)"}, {"error", e.what()}}}});
    return Exit::rejected;
  }
  return certify_and_emit(cfg, *cand, h);
}

inline int certify_cmd(const RunConfig& cfg) {
  if (cfg.candidate.empty()) throw ConfigError("--candidate is required");
  GeodesicCandidate cand = io::candidate_from(io::read_json_arg(cfg.candidate));
  const HParams h = cfg.h.empty() ? cand.h : io::hparams_from(io::read_json_arg(cfg.h));
  if (h.n != cand.rep.n) throw ConfigError("--h: dimension does not match the candidate");
  return certify_and_emit(cfg, cand, h);
}

inline int connect_cmd(const RunConfig& cfg) {
  const DomainDescriptor dom = io::domain_arg(cfg.domain);
  const CVec p = point(cfg.p, "--p");
  const CVec q = point(cfg.q, "--q");
  ConnectConfig cc;
  cc.seed = cfg.seed;
  cc.max_starts = cfg.starts;
  cc.grid_size = cfg.grid;
  cc.certify = certify_config(cfg);
  const ConnectResult r = connect(dom, p, q, cc);
  io::json rep{{"converged", r.converged}, {"degenerate", r.degenerate},  {"sigma", r.sigma},
               {"objective", r.objective}, {"starts_used", r.starts_used}};
  if (r.report) rep["report"] = io::to_json(*r.report);
  if (r.candidate) {
    rep["h"] = io::to_json(r.h);
    rep["candidate"] = io::to_json(*r.candidate);
    write_candidate_artifacts(cfg, *r.candidate);
  }
  emit(cfg, io::json{{"connect", rep}});
  if (r.degenerate) return Exit::degenerate;
  return r.converged ? Exit::ok : Exit::no_convergence;
}

inline int sibling_cmd(const RunConfig& cfg) {
  if (cfg.candidate.empty()) throw ConfigError("--candidate is required");
  const GeodesicCandidate cand = io::candidate_from(io::read_json_arg(cfg.candidate));
  const HParams h = cfg.h.empty() ? cand.h : io::hparams_from(io::read_json_arg(cfg.h));
  const std::vector<Atom> atoms =
      cfg.new_atoms.empty() ? std::vector<Atom>{} : io::atoms_from(io::read_json_arg(cfg.new_atoms));
  const RVec imconst = real_list(cfg.new_imconst, "--new-imconst");
  std::optional<SiblingResult> found;
  try {
    found = sibling_variation(cand, h, atoms, imconst, certify_config(cfg));
  } catch (const PreconditionError& e) {
    emit(cfg, io::json{{"sibling", io::json{{"classification", "rejected(precondition)"}, {"error", e.what()}}}});
    return Exit::rejected;
  }
  const SiblingResult& s = *found;
  io::json rep{{"classification", to_string(s.classification)}, {"tau", io::to_json(s.tau)}};
  if (s.report) rep["report"] = io::to_json(*s.report);
  write_candidate_artifacts(cfg, s.tau);
  emit(cfg, io::json{{"sibling", rep}});
  return verdict_code(s.classification);
}

inline semitube::ScanConfig scan_config(const RunConfig& cfg) {
  semitube::ScanConfig sc;
  sc.lines = cfg.lines;
  sc.seed = cfg.seed;
  sc.resolution = cfg.resolution;
  sc.window = cfg.window;
  return sc;
}

inline void violation_svg(const RunConfig& cfg, const semitube::Base& base, const semitube::ScanReport& rep) {
  if (cfg.svg.empty() || !rep.first_violation) return;
  std::filesystem::create_directories(cfg.svg);
  const auto& v = *rep.first_violation;
  const auto r = v.zoom ? semitube::line_section(base, v.zoom->line, v.zoom->R, rep.resolution)
                        : semitube::line_section(base, v.line, rep.window, rep.resolution);
  io::write_text((std::filesystem::path(cfg.svg) / (base.name + "_violation.svg")).string(), svg::raster_plot(r));
}

inline int semitube_cmd(const RunConfig& cfg) {
  const semitube::Base base = io::base_arg(cfg.base);
  switch (cfg.command) {
    case Command::semitube_scan: {
      const auto rep = semitube::cconvexity_scan(base, scan_config(cfg));
      violation_svg(cfg, base, rep);
      emit(cfg, io::json{{"scan", io::to_json(rep)}});
      return rep.violations > 0 ? Exit::violations : Exit::ok;
    }
    case Command::semitube_convexity: {
      const auto rep = semitube::convexity_check(base, {cfg.pairs, cfg.seed});
      emit(cfg, io::json{{"convexity", io::to_json(rep)}});
      return Exit::ok;
    }
    case Command::semitube_harness: {
      semitube::HarnessConfig hc;
      hc.scan = scan_config(cfg);
      hc.convexity = {cfg.pairs, cfg.seed};
      hc.fiber.boundary_points = cfg.fiber_points;
      hc.fiber.seed = cfg.seed;
      const auto rec = semitube::run_harness(base, hc);
      violation_svg(cfg, base, rec.scan);
      emit(cfg, io::json{{"harness", io::to_json(rec)}});
      return rec.consistent ? Exit::ok : Exit::violations;
    }
    case Command::semitube_linconvex: {
      semitube::LinConvexConfig lc;
      lc.exterior_points = cfg.exterior;
      lc.seed = cfg.seed;
      const auto rep = semitube::linear_convexity_scan(base, lc);
      emit(cfg, io::json{{"linear_convexity", io::to_json(rep)}});
      return rep.successes() == rep.points.size() ? Exit::ok : Exit::violations;
    }
    default: break;
  }
  return Exit::usage;
}

/// Random polynomial p: sample Re p, extend with imconst Im p(0), compare.
inline int roundtrip(const RunConfig& cfg) {
  const CircleGrid grid(cfg.grid);
  if (cfg.degree > grid.size() / 2 - 1) throw ConfigError("--degree exceeds N/2 - 1");
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss;
  CVec p(cfg.degree + 1);
  for (auto& c : p) c = cplx(gauss(rng), gauss(rng)) / std::sqrt(static_cast<double>(cfg.degree + 1));
  BoundaryMeasure m = BoundaryMeasure::zero(grid, 1, 1);
  for (std::size_t k = 0; k < grid.size(); ++k) m.density[0][k] = poly::eval(p, grid.node(k)).real();
  const HoloRep rep = schwarz_rep(m, {p[0].imag()});
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double err = 0.0;
  for (int s = 0; s < 100; ++s) {
    const cplx l = std::polar(0.9 * std::sqrt(unit(rng)), kTwoPi * unit(rng));
    err = std::max(err, std::abs(rep.eval(l)[0] - poly::eval(p, l)));
  }
  const bool pass = err <= 1e-10;
  emit(cfg, io::json{{"roundtrip", io::json{{"max_error", err}, {"points", 100}, {"pass", pass}}}});
  return pass ? Exit::ok : Exit::rejected;
}

}  // namespace detail

/// Runs one pipeline; diagnostics go to stderr.
inline int run(const RunConfig& cfg) {
  try {
    detail::resolve(cfg.tol);
    switch (cfg.command) {
      case Command::geodesic_compute: return detail::compute(cfg);
      case Command::geodesic_certify: return detail::certify_cmd(cfg);
      case Command::geodesic_connect: return detail::connect_cmd(cfg);
      case Command::geodesic_sibling: return detail::sibling_cmd(cfg);
      case Command::util_roundtrip: return detail::roundtrip(cfg);
      default: return detail::semitube_cmd(cfg);
    }
  } catch (const ConfigError& e) {
    std::cerr << "geolab: " << e.what() << '\n';
  } catch (const ValidationError& e) {
    std::cerr << "geolab: " << e.what() << '\n';
  } catch (const ArgumentError& e) {
    std::cerr << "geolab: " << e.what() << '\n';
  } catch (const PreconditionError& e) {
    std::cerr << "geolab: " << e.what() << '\n';
  } catch (const Error& e) {
    std::cerr << "geolab: " << e.what() << '\n';
    return Exit::rejected;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "geolab: malformed input: " << e.what() << '\n';
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "geolab: " << e.what() << '\n';
  }
  return Exit::usage;
}

}  // namespace geolab::cli
