// Command-line front end: polytope ingestion, extremal solve, Donaldson
// functional / Futaki evaluation, destabilizer search, K-energy and
// Abreu-residual numerics. Reports are JSON on stdout; timing goes to
// stderr unless --emit-timings is given, so reports stay byte-stable.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "tkstab/examples.hpp"
#include "tkstab/json_io.hpp"
#include "tkstab/potential.hpp"
#include "tkstab/quadrature.hpp"
#include "tkstab/stability.hpp"

namespace {

using tkstab::Json;
using tkstab::Rat;

// Exit codes:
//   0  command completed with a verdict (UNSTABLE is a result, not an error)
//   1  internal error
//   2  parse / usage error
//   3  invalid polytope (build failed)
//   4  validate: polytope is not Delzant
//   5  computation rejected a precondition (non-convexity, bad crease, ...)
constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitParse = 2;
constexpr int kExitInvalid = 3;
constexpr int kExitNotDelzant = 4;
constexpr int kExitPrecondition = 5;

struct CommonOpts {
  std::string polytope_file;
  std::string example;
  int threads = 1;
  std::string emit_csv;
  bool emit_timings = false;
};

struct InputEcho {
  tkstab::Polytope polytope;
  Json echo;
};

Json parse_json_file_or_inline(const std::string& arg) {
  std::string text = arg;
  if (!arg.empty() && arg[0] != '{' && arg[0] != '[') {
    std::ifstream in(arg);
    if (!in) throw std::invalid_argument("cannot open file: " + arg);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  return Json::parse(text);
}

InputEcho load_polytope(const CommonOpts& opts) {
  Json echo;
  std::optional<tkstab::Polytope> p;
  if (!opts.example.empty()) {
    p = tkstab::example_polytope(opts.example);
    echo["example"] = opts.example;
  } else if (!opts.polytope_file.empty()) {
    p = tkstab::polytope_from_json(parse_json_file_or_inline(opts.polytope_file));
  } else {
    throw CLI::ValidationError("one of --polytope or --example is required");
  }
  echo["polytope"] = tkstab::polytope_to_json(*p);
  return InputEcho{std::move(*p), std::move(echo)};
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
  auto* pg = cmd->add_option("--polytope", opts.polytope_file,
                             "polytope JSON (file path or inline)");
  auto* eg = cmd->add_option("--example", opts.example,
                             "built-in example: interval, square, simplex, cube, trapezoid(k)");
  pg->excludes(eg);
  cmd->add_option("--threads", opts.threads,
                  "worker threads (affects wall time only, never the report)");
  cmd->add_option("--emit-csv", opts.emit_csv, "write per-item CSV to this path");
  cmd->add_flag("--emit-timings", opts.emit_timings,
                "include wall time in the JSON report (off by default so reports "
                "are byte-identical across runs and thread counts)");
}

int emit_report(const std::string& command, const Json& inputs, const Json& results,
                bool exact, bool emit_timings, double wall_ms) {
  Json report;
  report["command"] = command;
  report["inputs"] = inputs;
  report["results"] = results;
  report["exact_arithmetic"] = exact;
  if (emit_timings) report["wall_ms"] = wall_ms;
  std::cout << report.dump(2) << std::endl;
  std::cerr << "# " << command << " wall_ms=" << wall_ms << std::endl;
  return kExitOk;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

tkstab::Potential build_potential(const tkstab::Polytope& p, const std::string& convention,
                                  const std::string& perturb, Json& echo) {
  tkstab::PotentialConvention conv = tkstab::PotentialConvention::Paper;
  if (convention == "guillemin-half") {
    conv = tkstab::PotentialConvention::GuilleminHalf;
  } else if (convention != "paper") {
    throw CLI::ValidationError("--convention must be 'paper' or 'guillemin-half'");
  }
  echo["convention"] = convention;
  auto u = tkstab::canonical_potential(p, conv);
  if (!perturb.empty()) {
    Json pj = parse_json_file_or_inline(perturb);
    tkstab::Polynomial q(p.dim());
    for (const auto& term : pj.at("terms")) {
      std::vector<int> exp = term.at("exp").get<std::vector<int>>();
      if (static_cast<int>(exp.size()) != p.dim())
        throw std::invalid_argument("perturbation exponent arity mismatch");
      q += tkstab::Polynomial::monomial(p.dim(), exp, tkstab::rational_from_json(term.at("coeff")));
    }
    u = tkstab::with_polynomial(u, q);
    echo["perturb"] = pj;
  }
  return u;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "tkstab: relative K-stability of polarized toric manifolds via Donaldson's\n"
      "functional on the Delzant polytope. Exact rational arithmetic for all\n"
      "verdicts; numeric quadrature for K-energy and Abreu residuals."};
  app.require_subcommand(1);

  CommonOpts opts;

  auto* validate = app.add_subcommand("validate", "build the polytope and run the Delzant check");
  add_common(validate, opts);

  auto* extremal = app.add_subcommand(
      "extremal", "solve for the extremal affine function s = rbar + theta_X");
  add_common(extremal, opts);

  auto* futaki = app.add_subcommand(
      "futaki", "relative Futaki invariant of the toric degeneration of a PL function");
  add_common(futaki, opts);
  std::string pl_arg;
  futaki->add_option("--pl", pl_arg,
                     "PL function JSON (file or inline): {\"pieces\":[{\"A\":[..],\"a\":..},..]} "
                     "or simple {\"a\":[..],\"c\":..}")
      ->required();

  auto* search = app.add_subcommand(
      "search", "sweep simple PL functions max{0,<a,x>+c} for destabilizers");
  add_common(search, opts);
  int height = 3;
  std::string tol_arg = "1/1048576";
  search->add_option("--height", height, "bound on direction components (default 3)");
  search->add_option("--tol", tol_arg, "rational bisection tolerance (default 1/2^20)");

  auto* kenergy_cmd = app.add_subcommand("kenergy", "modified K-energy F(u) of a potential");
  add_common(kenergy_cmd, opts);
  std::string convention = "paper", perturb;
  double quad_tol = 1e-6;
  int quad_depth = 0;
  kenergy_cmd->add_option("--convention", convention, "paper | guillemin-half (default paper)");
  kenergy_cmd->add_option("--perturb", perturb,
                          "polynomial added to the canonical potential, JSON "
                          "{\"terms\":[{\"exp\":[..],\"coeff\":..},..]} (file or inline)");
  kenergy_cmd->add_option("--quad-tol", quad_tol, "quadrature absolute tolerance target");
  kenergy_cmd->add_option("--quad-depth", quad_depth,
                          "max dyadic refinement depth (default by dimension)");

  auto* residual_cmd =
      app.add_subcommand("residual", "Abreu-operator residual field of a potential");
  add_common(residual_cmd, opts);
  std::string r_convention = "paper", r_perturb;
  double grid_h = 1.0 / 64, margin = 0;
  bool use_fd = false;
  residual_cmd->add_option("--grid", grid_h, "lattice spacing h (default 1/64)");
  residual_cmd->add_option("--margin", margin, "interior margin (default 5h)");
  residual_cmd->add_option("--convention", r_convention, "paper | guillemin-half");
  residual_cmd->add_option("--perturb", r_perturb, "polynomial perturbation JSON");
  residual_cmd->add_flag("--fd", use_fd,
                         "sample values on the grid and difference them instead of "
                         "using the analytic Hessian");

  CLI11_PARSE(app, argc, argv);
  auto t0 = std::chrono::steady_clock::now();

  try {
    if (*validate) {
      InputEcho in = load_polytope(opts);
      auto rep = tkstab::check_delzant(in.polytope);
      Json res;
      res["delzant"] = rep.is_delzant;
      Json bad = Json::array();
      for (int vi : rep.offending_vertices)
        bad.push_back(tkstab::ratvec_to_json(in.polytope.vertices()[vi]));
      res["offending_vertices"] = bad;
      res["dimension"] = in.polytope.dim();
      res["num_facets"] = in.polytope.facets().size();
      res["num_vertices"] = in.polytope.vertices().size();
      Json verts = Json::array();
      for (const auto& v : in.polytope.vertices()) verts.push_back(tkstab::ratvec_to_json(v));
      res["vertices"] = verts;
      emit_report("validate", in.echo, res, true, opts.emit_timings, ms_since(t0));
      return rep.is_delzant ? kExitOk : kExitNotDelzant;
    }

    if (*extremal) {
      InputEcho in = load_polytope(opts);
      auto ext = tkstab::solve_extremal_affine(in.polytope);
      Json res = tkstab::extremal_to_json(ext, tkstab::check_positivity(ext, in.polytope));
      return emit_report("extremal", in.echo, res, true, opts.emit_timings, ms_since(t0));
    }

    if (*futaki) {
      InputEcho in = load_polytope(opts);
      tkstab::PLFunc f = tkstab::plfunc_from_json(parse_json_file_or_inline(pl_arg));
      in.echo["pl"] = tkstab::plfunc_to_json(f);
      auto ext = tkstab::solve_extremal_affine(in.polytope);
      auto bd = tkstab::L_and_boundary_of_pl(in.polytope, ext, f);
      Json res;
      res["L"] = tkstab::rational_to_json(bd.l);
      res["futaki"] = tkstab::rational_to_json(-bd.l / (2 * ext.vol));
      res["boundary_integral"] = tkstab::rational_to_json(bd.boundary);
      res["vol"] = tkstab::rational_to_json(ext.vol);
      return emit_report("futaki", in.echo, res, true, opts.emit_timings, ms_since(t0));
    }

    if (*search) {
      InputEcho in = load_polytope(opts);
      in.echo["height"] = height;
      auto ext = tkstab::solve_extremal_affine(in.polytope);
      tkstab::SearchConfig cfg;
      cfg.height = height;
      cfg.tol = tkstab::parse_rational(tol_arg);
      cfg.threads = opts.threads;
      auto rep = tkstab::search_destabilizer(in.polytope, ext, cfg);
      Json res = tkstab::stability_to_json(rep, in.polytope, ext);
      if (!opts.emit_csv.empty()) {
        std::ofstream csv(opts.emit_csv);
        csv << "direction,best_offset,best_L,best_ratio\n";
        for (const auto& d : rep.per_direction) {
          std::string dir;
          for (size_t i = 0; i < d.a.size(); ++i) dir += (i ? " " : "") + d.a[i].str();
          csv << '"' << dir << '"' << ',';
          if (d.min_l) {
            csv << tkstab::format_rational(d.min_l->v.c) << ','
                << tkstab::format_rational(d.min_l->l) << ','
                << tkstab::format_rational(d.min_ratio->ratio) << "\n";
          } else {
            csv << ",,\n";
          }
        }
        res["csv"] = opts.emit_csv;
      }
      return emit_report("search", in.echo, res, true, opts.emit_timings, ms_since(t0));
    }

    if (*kenergy_cmd) {
      InputEcho in = load_polytope(opts);
      auto ext = tkstab::solve_extremal_affine(in.polytope);
      auto u = build_potential(in.polytope, convention, perturb, in.echo);
      tkstab::QuadConfig qc;
      qc.abs_tol = quad_tol;
      qc.max_depth = quad_depth > 0 ? quad_depth
                     : in.polytope.dim() == 1 ? 30
                     : in.polytope.dim() == 2 ? 13
                                              : 8;
      auto res = tkstab::kenergy(in.polytope, ext, u, qc);
      Json out;
      out["value"] = res.value;
      out["log_det_term"] = res.log_det_term;
      out["boundary_term"] = res.boundary_term;
      out["interior_term"] = res.interior_term;
      Json quad;
      quad["abs_tol"] = qc.abs_tol;
      quad["max_depth"] = qc.max_depth;
      quad["gauss_order"] = qc.gauss_order;
      out["quad"] = quad;
      return emit_report("kenergy", in.echo, out, false, opts.emit_timings, ms_since(t0));
    }

    if (*residual_cmd) {
      InputEcho in = load_polytope(opts);
      auto ext = tkstab::solve_extremal_affine(in.polytope);
      auto u = build_potential(in.polytope, r_convention, r_perturb, in.echo);
      if (margin <= 0) margin = 5 * grid_h;
      tkstab::ResidualField field;
      if (use_fd) {
        auto grid = tkstab::PotentialGrid::sample(in.polytope, u, grid_h, 1e-12);
        field = tkstab::abreu_residual(in.polytope, ext, grid, margin);
      } else {
        field = tkstab::abreu_residual(in.polytope, ext, u, grid_h, margin);
      }
      Json out;
      out["sup_norm"] = field.sup_norm;
      out["points"] = field.values.size();
      out["masked_points"] = field.masked_points;
      out["stencil_skipped"] = field.stencil_skipped;
      out["h"] = grid_h;
      out["margin"] = margin;
      out["mode"] = use_fd ? "values" : "analytic";
      if (!opts.emit_csv.empty()) {
        std::ofstream csv(opts.emit_csv);
        for (int i = 0; i < in.polytope.dim(); ++i) csv << "x" << (i + 1) << ",";
        csv << "residual\n";
        csv.precision(17);
        for (size_t i = 0; i < field.values.size(); ++i) {
          for (double c : field.points[i]) csv << c << ",";
          csv << field.values[i] << "\n";
        }
        out["csv"] = opts.emit_csv;
      }
      return emit_report("residual", in.echo, out, false, opts.emit_timings, ms_since(t0));
    }
  } catch (const tkstab::PolytopeError& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitInvalid;
  } catch (const Json::exception& e) {
    std::cerr << "parse error: " << e.what() << std::endl;
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "parse error: " << e.what() << std::endl;
    return kExitParse;
  } catch (const std::domain_error& e) {
    std::cerr << "rejected: " << e.what() << std::endl;
    return kExitPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << std::endl;
    return kExitInternal;
  }
  return kExitInternal;
}
