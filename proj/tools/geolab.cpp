#include <CLI11.hpp>

#include "run.hpp"

namespace {

using geolab::cli::Command;
using geolab::cli::RunConfig;

void add_tolerances(CLI::App* app, RunConfig& cfg) {
  app->add_option("--tol-psi", cfg.tol.psi, "psi_max threshold");
  app->add_option("--tol-nd", cfg.tol.nd, "nondegeneracy threshold on psi at zero");
  app->add_option("--tol-holo", cfg.tol.holo, "hardy residual threshold");
  app->add_option("--tol-atom", cfg.tol.atom, "atom compatibility threshold");
  app->add_option("--tol-support", cfg.tol.support, "support residual threshold");
  app->add_option("--tol-boundary", cfg.tol.boundary, "boundary margin threshold");
}

void add_outputs(CLI::App* app, RunConfig& cfg) {
  app->add_option("--out", cfg.out, "JSON report path (stdout when omitted)");
  app->add_option("--csv", cfg.csv, "boundary samples as CSV");
  app->add_option("--svg", cfg.svg, "SVG plot of boundary curve and disc image");
  app->add_option("--candidate-out", cfg.candidate_out, "write the candidate JSON");
}

void add_sampler(CLI::App* app, RunConfig& cfg) {
  app->add_option("--seed", cfg.seed, "sampler seed")->capture_default_str();
  app->add_option("--grid", cfg.grid, "circle grid size N")->capture_default_str();
  app->add_option("--interior-samples", cfg.interior_samples, "z samples inside D")->capture_default_str();
  app->add_option("--boundary-samples", cfg.boundary_samples, "z samples near the boundary")->capture_default_str();
}

void add_base(CLI::App* app, RunConfig& cfg) {
  app->add_option("--base", cfg.base, "built-in base (ball, dumbbell, slit_disc), JSON file or inline JSON")
      ->capture_default_str();
  app->add_option("--seed", cfg.seed, "sampler seed")->capture_default_str();
  app->add_option("--out", cfg.out, "JSON report path (stdout when omitted)");
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"geolab: complex geodesics from dual maps and semitube section scans"};
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);

  auto* geo = app.add_subcommand("geodesic", "reconstruct, certify and connect complex geodesics");
  geo->require_subcommand(1);

  auto* compute = geo->add_subcommand("compute", "reconstruct phi from h and certify it");
  compute->add_option("--domain", cfg.domain, "built-in domain or descriptor JSON")->capture_default_str();
  compute->add_option("--h", cfg.h, "dual map JSON (file or inline)")->required();
  compute->add_option("--atoms", cfg.atoms, "atoms JSON");
  compute->add_option("--imconst", cfg.imconst, "imaginary constants, length d or n");
  add_sampler(compute, cfg);
  add_outputs(compute, cfg);
  add_tolerances(compute, cfg);
  compute->callback([&] { cfg.command = Command::geodesic_compute; });

  auto* cert = geo->add_subcommand("certify", "certify a stored candidate");
  cert->add_option("--candidate", cfg.candidate, "candidate JSON")->required();
  cert->add_option("--h", cfg.h, "dual map JSON (defaults to the one stored in the candidate)");
  add_sampler(cert, cfg);
  add_outputs(cert, cfg);
  add_tolerances(cert, cfg);
  cert->callback([&] { cfg.command = Command::geodesic_certify; });

  auto* conn = geo->add_subcommand("connect", "find a geodesic through two points");
  conn->add_option("--domain", cfg.domain, "built-in domain or descriptor JSON")->capture_default_str();
  conn->add_option("--p", cfg.p, "first point: JSON array or comma-separated reals")->required();
  conn->add_option("--q", cfg.q, "second point")->required();
  conn->add_option("--starts", cfg.starts, "maximum solver starts")->capture_default_str();
  add_sampler(conn, cfg);
  add_outputs(conn, cfg);
  add_tolerances(conn, cfg);
  conn->callback([&] { cfg.command = Command::geodesic_connect; });

  auto* sib = geo->add_subcommand("sibling", "replace the singular part of a candidate");
  sib->add_option("--candidate", cfg.candidate, "candidate JSON")->required();
  sib->add_option("--h", cfg.h, "dual map JSON (defaults to the one stored in the candidate)");
  sib->add_option("--new-atoms", cfg.new_atoms, "replacement atoms JSON (empty list when omitted)");
  sib->add_option("--new-imconst", cfg.new_imconst, "replacement imaginary constants");
  add_sampler(sib, cfg);
  add_outputs(sib, cfg);
  add_tolerances(sib, cfg);
  sib->callback([&] { cfg.command = Command::geodesic_sibling; });

  auto* st = app.add_subcommand("semitube", "complex-line sections of semitube domains");
  st->require_subcommand(1);

  auto* scan = st->add_subcommand("scan", "sample complex lines and test their sections");
  add_base(scan, cfg);
  scan->add_option("--lines", cfg.lines, "number of lines")->capture_default_str();
  scan->add_option("--res", cfg.resolution, "raster resolution m")->capture_default_str();
  scan->add_option("--window", cfg.window, "window half-width R (0 = 8 x base diameter)")->capture_default_str();
  scan->add_option("--svg", cfg.svg, "directory for violation rasters");
  scan->callback([&] { cfg.command = Command::semitube_scan; });

  auto* convex = st->add_subcommand("convexity", "sampled midpoint convexity of the base");
  add_base(convex, cfg);
  convex->add_option("--pairs", cfg.pairs, "point pairs")->capture_default_str();
  convex->callback([&] { cfg.command = Command::semitube_convexity; });

  auto* harness = st->add_subcommand("harness", "fiber condition, convexity and scan together");
  add_base(harness, cfg);
  harness->add_option("--lines", cfg.lines, "number of lines")->capture_default_str();
  harness->add_option("--res", cfg.resolution, "raster resolution m")->capture_default_str();
  harness->add_option("--window", cfg.window, "window half-width R (0 = 8 x base diameter)")->capture_default_str();
  harness->add_option("--pairs", cfg.pairs, "point pairs for convexity")->capture_default_str();
  harness->add_option("--fiber-points", cfg.fiber_points, "boundary points for the fiber check")->capture_default_str();
  harness->add_option("--svg", cfg.svg, "directory for violation rasters");
  harness->callback([&] { cfg.command = Command::semitube_harness; });

  auto* lin = st->add_subcommand("linconvex", "search separating real subspaces at exterior points");
  add_base(lin, cfg);
  lin->add_option("--exterior", cfg.exterior, "exterior probe points")->capture_default_str();
  lin->callback([&] { cfg.command = Command::semitube_linconvex; });

  auto* util = app.add_subcommand("util", "self checks");
  util->require_subcommand(1);
  auto* rt = util->add_subcommand("roundtrip-test", "spectral round trip of a random polynomial");
  rt->add_option("--degree", cfg.degree, "polynomial degree")->capture_default_str();
  rt->add_option("--grid", cfg.grid, "circle grid size N")->capture_default_str();
  rt->add_option("--seed", cfg.seed, "seed")->capture_default_str();
  rt->add_option("--out", cfg.out, "JSON report path (stdout when omitted)");
  rt->callback([&] { cfg.command = Command::util_roundtrip; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : geolab::cli::Exit::usage;
  }
  return geolab::cli::run(cfg);
}
