#include "hypsweep/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <ostream>

#include "hypsweep/bounds.hpp"
#include "hypsweep/error.hpp"
#include "hypsweep/flip_graph.hpp"
#include "hypsweep/io.hpp"
#include "hypsweep/parallel.hpp"

namespace hypsweep::cli {

namespace {

using io::json;
constexpr double kPi = std::numbers::pi;

void emit(std::ostream& out, const std::string& path, const std::string& text) {
  if (path.empty()) {
    out << text;
  } else {
    io::write_text_file(path, text);
  }
}

tri::Mode parse_mode(const std::string& s) { return s == "iso" ? tri::Mode::iso : tri::Mode::labeled; }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"hypsweep: sweepouts, flip graphs and isoperimetric profiles in hyperbolic space"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP threads (default: HYPSWEEP_THREADS or all)")->check(CLI::PositiveNumber);

  std::function<void()> action;

  // ---------------------------------------------------------------- bounds
  auto* bounds = app.add_subcommand("bounds", "closed-form genus, radius and volume bounds");
  bounds->require_subcommand(1);
  double r_in = 0.0;
  bool prh = false;
  auto* gfr = bounds->add_subcommand("genus-from-radius", "least genus admitting an embedded ball of radius r");
  gfr->add_option("--r", r_in)->required();
  gfr->add_flag("--prh", prh, "assume a bounding minimal surface of genus at most g");
  gfr->callback([&] {
    action = [&] {
      const auto b = bounds::min_genus_from_radius(r_in, prh);
      out << io::dump({{"input", {{"r", r_in}, {"prh", prh}}},
                       {"bound", {{"min_genus", b.min_genus}, {"raw", b.raw}}},
                       {"formula", b.formula}});
    };
  });
  std::int64_t g_in = 1;
  auto* rfg = bounds->add_subcommand("radius-from-genus", "largest embedded ball radius for genus g");
  rfg->add_option("--g", g_in)->required();
  rfg->add_flag("--prh", prh, "assume a bounding minimal surface of genus at most g");
  rfg->callback([&] {
    action = [&] {
      const double r = bounds::max_radius_from_genus(g_in, prh);
      out << io::dump({{"input", {{"g", g_in}, {"prh", prh}}},
                       {"bound", {{"max_radius", r}}},
                       {"formula", prh ? "r <= arccosh(2g - 1)" : "r <= arccosh(2g)"}});
    };
  });
  std::int64_t flips = 0;
  auto* vol = bounds->add_subcommand("volume", "volume bound from the number of flips in a sweepout");
  vol->add_option("--flips", flips)->required();
  vol->callback([&] {
    action = [&] {
      const auto b = bounds::volume_upper_bound(flips);
      out << io::dump({{"input", {{"flips", flips}}},
                       {"bound", {{"volume", b.bound}, {"v3", b.v3}}},
                       {"formula", "vol <= n v3, v3 = 3 Lambda(pi/3)"}});
    };
  });

  // ------------------------------------------------------------------- tri
  auto* tri_cmd = app.add_subcommand("tri", "one-vertex triangulations and flips");
  tri_cmd->require_subcommand(1);
  int genus = 2;
  std::string out_path, file_a, file_b, mode = "labeled";
  auto* tnew = tri_cmd->add_subcommand("new", "standard triangulation of genus g");
  tnew->add_option("--genus", genus)->required();
  tnew->add_option("-o", out_path);
  tnew->callback([&] { action = [&] { emit(out, out_path, io::dump(io::to_json(tri::standard_genus_g(genus)))); }; });

  auto* tver = tri_cmd->add_subcommand("verify", "check a triangulation file");
  tver->add_option("file", file_a)->required();
  tver->callback([&] {
    action = [&] {
      const json j = io::read_json_file(file_a);
      const auto rep = tri::verify(io::comb_map_from_json(j));
      json checks = json::array();
      for (const auto& c : rep.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}});
      out << io::dump({{"ok", rep.ok},
                       {"first_violation", rep.first_violation},
                       {"vertices", rep.vertices},
                       {"euler_characteristic", rep.euler_characteristic},
                       {"genus", rep.genus},
                       {"checks", checks}});
      if (!rep.ok) throw Error(Errc::InvalidInput, "verify failed: " + rep.first_violation);
      io::triangulation_from_json(j);  // the marking, if any, must be valid too
    };
  });

  int edge = 0;
  auto* tflip = tri_cmd->add_subcommand("flip", "flip one edge");
  tflip->add_option("file", file_a)->required();
  tflip->add_option("--edge", edge)->required();
  tflip->add_option("-o", out_path);
  tflip->callback([&] {
    action = [&] {
      const auto t = io::triangulation_from_json(io::read_json_file(file_a));
      emit(out, out_path, io::dump(io::to_json(tri::flip(t, {edge}))));
    };
  });

  std::int64_t budget = 2'000'000;
  auto* tdist = tri_cmd->add_subcommand("distance", "flip distance by bidirectional search");
  tdist->add_option("a", file_a)->required();
  tdist->add_option("b", file_b)->required();
  tdist->add_option("--mode", mode)->check(CLI::IsMember({"labeled", "iso"}));
  tdist->add_option("--budget", budget)->check(CLI::PositiveNumber);
  tdist->callback([&] {
    action = [&] {
      const auto a = io::triangulation_from_json(io::read_json_file(file_a));
      const auto b = io::triangulation_from_json(io::read_json_file(file_b));
      tri::SearchOptions opt;
      opt.mode = parse_mode(mode);
      opt.budget = static_cast<std::size_t>(budget);
      const int d = tri::flip_distance(a, b, opt);
      json j{{"mode", mode}, {"distance", d}, {"budget", budget}};
      if (opt.mode == tri::Mode::iso) j["lower_bound_of_labeled"] = true;
      out << io::dump(j);
    };
  });

  int depth = 2;
  auto* tball = tri_cmd->add_subcommand("ball", "flip-graph ball around a triangulation");
  tball->add_option("file", file_a)->required();
  tball->add_option("--depth", depth)->required()->check(CLI::NonNegativeNumber);
  tball->add_option("--mode", mode)->check(CLI::IsMember({"labeled", "iso"}));
  tball->add_option("--budget", budget)->check(CLI::PositiveNumber);
  tball->callback([&] {
    action = [&] {
      const auto t = io::triangulation_from_json(io::read_json_file(file_a));
      tri::SearchOptions opt;
      opt.mode = parse_mode(mode);
      opt.budget = static_cast<std::size_t>(budget);
      const auto ball = tri::flip_ball(t, depth, opt);
      json nodes = json::array();
      for (const auto& n : ball.nodes) nodes.push_back({{"code", n.code.hex()}, {"depth", n.depth}});
      json edges = json::array();
      for (const auto& [a, b] : ball.edges) edges.push_back({a, b});
      out << io::dump({{"mode", mode},
                       {"depth", depth},
                       {"layer_sizes", ball.layer_sizes},
                       {"node_count", ball.nodes.size()},
                       {"edge_count", ball.edges.size()},
                       {"loops", ball.loops},
                       {"nodes", nodes},
                       {"edges", edges}});
    };
  });

  // --------------------------------------------------------------- surface
  auto* surface = app.add_subcommand("surface", "coned surfaces and sweepout area profiles");
  surface->require_subcommand(1);
  auto* sreal = surface->add_subcommand("realize", "realize and report area and angle sums");
  sreal->add_option("file", file_a)->required();
  sreal->callback([&] {
    action = [&] {
      const std::filesystem::path p(file_a);
      const auto r = io::realization_from_json(io::read_json_file(p), p.parent_path());
      const auto s = r.realize();
      double residual = 0.0;
      for (int t = 0; t < s.tri().face_count(); ++t) residual = std::max(residual, s.relation_residual(t));
      const double area = surf::total_area(s);
      const double theta = surf::vertex_angle_sum(s);
      const double faces = s.tri().face_count();
      out << io::dump({{"genus", s.tri().genus()},
                       {"triangles", s.tri().face_count()},
                       {"total_area", area},
                       {"angle_sum", theta},
                       {"gauss_bonnet_residual", std::abs(area - (faces * kPi - theta))},
                       {"area_bound", kPi * faces},
                       {"max_relation_residual", residual}});
    };
  });

  int samples = 1000;
  auto* sprof = surface->add_subcommand("profile", "area along the interpolating sweepout of a flip path");
  sprof->add_option("real", file_a)->required();
  sprof->add_option("path", file_b)->required();
  sprof->add_option("--samples", samples)->check(CLI::Range(2, 1000000));
  sprof->add_option("-o", out_path);
  sprof->callback([&] {
    action = [&] {
      const std::filesystem::path p(file_a);
      const auto r = io::realization_from_json(io::read_json_file(p), p.parent_path());
      const auto path = io::flip_path_from_json(io::read_json_file(file_b));
      if (!(path.start.map() == r.tri.map())) {
        throw Error(Errc::InvalidInput, "flip path does not start at the realized triangulation");
      }
      const auto prof = surf::sweepout_profile(path, r.base, r.hol, std::nullopt, samples);
      json summary = io::to_json(prof);
      summary.erase("samples");
      summary["moves"] = path.moves.size();
      summary["sample_count"] = prof.samples.size();
      summary["area_bound"] = kPi * path.start.face_count();
      summary["triangle_bound"] = path.start.face_count() + 2;
      if (out_path.empty()) {
        out << io::to_csv(prof);
      } else {
        io::write_text_file(out_path, io::to_csv(prof));
        out << io::dump(summary);
      }
    };
  });

  // ------------------------------------------------------------------- iso
  auto* iso_cmd = app.add_subcommand("iso", "half-volume surfaces of revolution in a ball");
  iso_cmd->require_subcommand(1);
  iso::IsoperimetricProblem prob;
  iso::OptimizerConfig cfg;
  std::string config_path, trace_path;
  std::uint64_t seed = cfg.seed;
  auto* solve = iso_cmd->add_subcommand("solve", "minimize area under the volume constraint");
  auto* r_opt = solve->add_option("--r", prob.ball.r);
  auto* f_opt = solve->add_option("--fraction", prob.volume_fraction);
  auto* n_opt = solve->add_option("--nodes", cfg.n_nodes);
  auto* s_opt = solve->add_option("--seed", seed);
  solve->add_option("--config", config_path, "JSON solver config; flags override it");
  solve->add_option("-o", out_path, "profile CSV (rho,z)");
  solve->add_option("--trace", trace_path, "iteration trace CSV");
  solve->callback([&] {
    action = [&] {
      if (!config_path.empty()) {
        const double r = prob.ball.r, f = prob.volume_fraction;
        const int n = cfg.n_nodes;
        io::apply_config_json(io::read_json_file(config_path), prob, cfg);
        if (r_opt->count()) prob.ball.r = r;
        if (f_opt->count()) prob.volume_fraction = f;
        if (n_opt->count()) cfg.n_nodes = n;
      }
      if (s_opt->count() || config_path.empty()) cfg.seed = seed;
      const auto res = iso::minimize(prob, cfg);
      const double disc = 2.0 * kPi * (std::cosh(prob.ball.r) - 1.0);
      json profile = json::array();
      for (const auto& n : res.curve.nodes) profile.push_back({n.rho, n.z});
      const auto& rep = res.report;
      out << io::dump({{"input",
                        {{"r", prob.ball.r},
                         {"fraction", prob.volume_fraction},
                         {"nodes", cfg.n_nodes},
                         {"seed", cfg.seed}}},
                       {"area", res.area},
                       {"volume", res.volume},
                       {"target_volume", prob.volume_fraction * prob.ball.volume()},
                       {"equatorial_disc_area", disc},
                       {"relative_gap", (res.area - disc) / disc},
                       {"within_one_percent", std::abs(res.area - disc) <= 0.01 * disc},
                       {"iterations", rep.iterations},
                       {"outer_iterations", rep.outer_iterations},
                       {"converged", rep.converged},
                       {"volume_error", rep.volume_error},
                       {"kkt_residual", rep.kkt_residual},
                       {"lambda", rep.lambda},
                       {"max_plane_distance", rep.max_plane_distance},
                       {"boundary_angle", rep.boundary_angle},
                       {"profile", profile}});
      if (!out_path.empty()) io::write_text_file(out_path, io::profile_csv(res.curve));
      if (!trace_path.empty()) io::write_text_file(trace_path, io::trace_csv(rep.trace));
    };
  });

  int rows_n = 11;
  auto* planes = iso_cmd->add_subcommand("scan-planes", "plane sections at distance d from the center");
  planes->add_option("--r", prob.ball.r)->required();
  planes->add_option("-n", rows_n)->required();
  planes->add_option("-o", out_path, "CSV d,area,volume");
  planes->callback([&] {
    action = [&] {
      const auto rows = iso::plane_family_scan(prob.ball, rows_n);
      if (!out_path.empty()) {
        io::write_text_file(out_path, io::to_csv(rows));
        return;
      }
      json j = json::array();
      for (const auto& r : rows) j.push_back({{"d", r.d}, {"area", r.area}, {"volume", r.volume}});
      out << io::dump({{"r", prob.ball.r}, {"ball_volume", prob.ball.volume()}, {"rows", j}});
    };
  });

  auto* caps = iso_cmd->add_subcommand("scan-caps", "ball and umbilic competitors");
  caps->add_option("--r", prob.ball.r)->required();
  caps->add_option("-n", rows_n)->required();
  caps->add_option("-o", out_path, "CSV of every row");
  caps->callback([&] {
    action = [&] {
      const auto rows = iso::sphere_cap_family_scan(prob.ball, rows_n);
      if (!out_path.empty()) {
        io::write_text_file(out_path, io::to_csv(rows));
        return;
      }
      json j = json::array();
      const iso::CapRow* best = nullptr;
      for (const auto& r : rows) {
        j.push_back({{"family", r.family},
                     {"kappa", r.kappa},
                     {"offset", r.offset},
                     {"radius", r.radius},
                     {"area", r.area},
                     {"volume", r.volume},
                     {"half_volume", r.half_volume}});
        if (r.half_volume && (!best || r.area < best->area)) best = &r;
      }
      json summary{{"r", prob.ball.r},
                   {"ball_volume", prob.ball.volume()},
                   {"equatorial_disc_area", 2.0 * kPi * (std::cosh(prob.ball.r) - 1.0)},
                   {"rows", j}};
      if (best) summary["min_half_volume"] = {{"family", best->family}, {"kappa", best->kappa}, {"area", best->area}};
      out << io::dump(summary);
    };
  });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  if (threads == 0) {
    if (const char* env = std::getenv("HYPSWEEP_THREADS")) threads = std::atoi(env);
  }
  set_threads(threads);

  try {
    if (action) action();
    return 0;
  } catch (const Error& e) {
    err << json{{"error", std::string(errc_name(e.code()))}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
}

}  // namespace hypsweep::cli
