#include <algorithm>
#include <memory>

#include "cli_util.hpp"
#include "phigeo/flatcone.hpp"
#include "phigeo/geodesic.hpp"

namespace phigeo::cli {

namespace {

Json path_json(const GeodesicPath& p) {
  Json j;
  j["kind"] = p.kind == PathKind::RadiusPair ? "radius-pair" : "regular-arc";
  j["length"] = p.length;
  j["tie"] = p.tie;
  if (p.kind == PathKind::RegularArc) {
    j["phase"] = p.phase;
  } else {
    j["ray_angles"] = {p.ray_angle_1, p.ray_angle_2};
    j["flat_radii"] = {p.flat_radius_1, p.flat_radius_2};
  }
  j["points"] = p.points.size();
  return j;
}

void cmd_trace(CLI::App& app, Context& ctx) {
  struct Opts {
    PhiOpts phi;
    std::string from;
    double slope = 0.0;
    double step = 1e-3;
    double max_arclen = 0.0;
    std::string orientation = "both";
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand(
      "trace", "integrate one slope-t trajectory of the differential");
  add_phi_options(*cmd, o->phi);
  cmd->add_option("--from", o->from, "start point \"x,y\"")->required();
  cmd->add_option("--slope", o->slope, "foliation slope t (phase = 2t)");
  cmd->add_option("--step", o->step, "chart-space step cap (default 1e-3)");
  cmd->add_option("--max-arclen", o->max_arclen,
                  "chart arclength budget per direction (default 6 radii)");
  cmd->add_option("--orientation", o->orientation, "forward | backward | both")
      ->check(CLI::IsMember({"forward", "backward", "both"}));
  cmd->callback([o, &ctx] {
    QuadraticDifferential qd = o->phi.load();
    Complex start = parse_point(o->from);
    double theta = wrap_to_pi(2.0 * o->slope);
    double budget =
        o->max_arclen > 0 ? o->max_arclen : 6.0 * qd.chart_radius();

    std::vector<Complex> pts;
    if (o->orientation != "forward") {
      pts = trace_trajectory(qd, start, theta, o->step, budget, -1);
      std::reverse(pts.begin(), pts.end());
    }
    if (o->orientation != "backward") {
      auto fwd = trace_trajectory(qd, start, theta, o->step, budget, +1);
      if (pts.empty())
        pts = std::move(fwd);
      else
        pts.insert(pts.end(), fwd.begin() + 1, fwd.end());
    }

    double chart_len = 0.0;
    for (size_t i = 1; i < pts.size(); ++i)
      chart_len += std::abs(pts[i] - pts[i - 1]);

    Json j;
    j["schema"] = "phigeo.trace.v1";
    j["phi"] = qd_json(qd);
    j["start"] = {start.real(), start.imag()};
    j["slope"] = o->slope;
    j["orientation"] = o->orientation;
    j["points"] = pts.size();
    j["chart_arclen"] = chart_len;
    j["flat_length"] = phi_length(qd, pts);
    ctx.write("trace.json", dump(j));
    ctx.write("trace.csv", csv_text("phigeo.trace-points.v1", {"u", "v", "arclen"},
                                    polyline_rows(pts)));
    ctx.echo() << "traced " << pts.size() << " points, chart arclen "
               << format_double(chart_len) << "\n";
  });
}

void cmd_connect(CLI::App& app, Context& ctx) {
  struct Opts {
    PhiOpts phi;
    std::string from, to;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand(
      "connect", "shortest flat-metric path between two chart points");
  add_phi_options(*cmd, o->phi);
  cmd->add_option("--from", o->from, "first point \"x,y\"")->required();
  cmd->add_option("--to", o->to, "second point \"x,y\"")->required();
  cmd->callback([o, &ctx] {
    QuadraticDifferential qd = o->phi.load();
    GeodesicPath p = connect(qd, parse_point(o->from), parse_point(o->to));

    Json j;
    j["schema"] = "phigeo.connect.v1";
    j["phi"] = qd_json(qd);
    j["path"] = path_json(p);
    ctx.write("connect.json", dump(j));
    ctx.write("connect.csv", csv_text("phigeo.connect-points.v1",
                                      {"u", "v", "arclen"}, polyline_rows(p.points)));
    ctx.echo() << (p.kind == PathKind::RadiusPair ? "radius-pair" : "regular-arc")
               << " length " << format_double(p.length)
               << (p.tie ? " (tie)" : "") << "\n";
  });
}

void cmd_oracle(CLI::App& app, Context& ctx) {
  struct Opts {
    PhiOpts phi;
    std::string from, to;
    std::string res = "256,512";
    int level = 2;
    bool dump_edges = false;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand(
      "oracle", "shortest path on the flat-cone metric graph (grid Dijkstra)");
  add_phi_options(*cmd, o->phi);
  cmd->add_option("--from", o->from, "first point \"x,y\"")->required();
  cmd->add_option("--to", o->to, "second point \"x,y\"")->required();
  cmd->add_option("--res", o->res, "grid resolution \"n_r,n_theta\" (default 256,512)");
  cmd->add_option("--level", o->level, "stencil level 1..3 (default 2)");
  cmd->add_flag("--dump-edges", o->dump_edges, "also write the weighted edge list");
  cmd->callback([o, &ctx] {
    QuadraticDifferential qd = o->phi.load();
    auto res = parse_ints(o->res);
    if (res.size() != 2)
      throw Error(Errc::parameter, "--res wants \"n_r,n_theta\"");
    MetricGraph g = build_grid(qd, res[0], res[1], o->level);
    Complex z1 = parse_point(o->from), z2 = parse_point(o->to);
    PathResult path = shortest_path(g, z1, z2);

    Json j;
    j["schema"] = "phigeo.oracle.v1";
    j["phi"] = qd_json(qd);
    j["n_r"] = res[0];
    j["n_theta"] = res[1];
    j["stencil_level"] = o->level;
    j["length"] = path.length;
    j["path_nodes"] = path.nodes.size();
    bool through_center =
        std::find(path.nodes.begin(), path.nodes.end(), 0) != path.nodes.end();
    j["through_singularity"] = through_center;
    if (qd.is_monomial()) {
      double bound = bound_for_pair(g, z1, z2);
      // compare against the exact length between the snapped endpoints
      GeodesicPath exact = connect(qd, path.points.front(), path.points.back());
      double rel = path.length / exact.length - 1.0;
      j["error_bound"] = bound;
      j["analytic_length"] = exact.length;
      j["relative_error"] = rel;
      ctx.write("oracle.json", dump(j));
      ctx.write("oracle-path.csv", csv_text("phigeo.oracle-path.v1",
                                            {"u", "v", "arclen"},
                                            polyline_rows(path.points)));
      if (o->dump_edges) {
        std::ostringstream os;
        g.export_edge_list(os);
        ctx.write("oracle-edges.txt", os.str());
      }
      ctx.echo() << "oracle length " << format_double(path.length)
                 << ", analytic " << format_double(exact.length)
                 << ", relative error " << format_double(rel) << " (bound "
                 << format_double(bound) << ")"
                 << (through_center ? ", through the singularity" : "") << "\n";
      if (!(rel <= bound && rel >= -1e-9))
        throw CheckFailure("oracle error " + format_double(rel) +
                           " outside its reported bound " + format_double(bound));
    } else {
      ctx.write("oracle.json", dump(j));
      ctx.write("oracle-path.csv", csv_text("phigeo.oracle-path.v1",
                                            {"u", "v", "arclen"},
                                            polyline_rows(path.points)));
      if (o->dump_edges) {
        std::ostringstream os;
        g.export_edge_list(os);
        ctx.write("oracle-edges.txt", os.str());
      }
      ctx.echo() << "oracle length " << format_double(path.length)
                 << (through_center ? ", through the singularity" : "") << "\n";
    }
  });
}

void cmd_converge(CLI::App& app, Context& ctx) {
  struct Opts {
    PhiOpts phi;
    std::string from, to;
    std::string sizes = "32,64,128,256";
    int aspect = 2;
    int level = 2;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand(
      "converge", "oracle length for one pair across grid refinements");
  add_phi_options(*cmd, o->phi);
  cmd->add_option("--from", o->from, "first point \"x,y\"")->required();
  cmd->add_option("--to", o->to, "second point \"x,y\"")->required();
  cmd->add_option("--sizes", o->sizes, "radial resolutions, e.g. \"32,64,128\"");
  cmd->add_option("--aspect", o->aspect, "n_theta = aspect * n_r (default 2)");
  cmd->add_option("--level", o->level, "stencil level 1..3 (default 2)");
  cmd->callback([o, &ctx] {
    QuadraticDifferential qd = o->phi.load();
    std::vector<GridSize> sizes;
    for (int n : parse_ints(o->sizes)) sizes.push_back({n, o->aspect * n});
    auto rows = convergence_study(qd, parse_point(o->from), parse_point(o->to),
                                  sizes, o->level);

    Json table = Json::array();
    std::vector<std::vector<std::string>> csv;
    for (const auto& r : rows) {
      Json e;
      e["n_r"] = r.size.n_r;
      e["n_theta"] = r.size.n_theta;
      e["oracle_length"] = r.oracle_length;
      if (r.analytic_length) e["analytic_length"] = *r.analytic_length;
      if (r.relative_error) e["relative_error"] = *r.relative_error;
      table.push_back(e);
      csv.push_back({std::to_string(r.size.n_r), std::to_string(r.size.n_theta),
                     format_double(r.oracle_length),
                     r.analytic_length ? format_double(*r.analytic_length) : "",
                     r.relative_error ? format_double(*r.relative_error) : ""});
      ctx.echo() << r.size.n_r << "x" << r.size.n_theta << "  "
                 << format_double(r.oracle_length);
      if (r.relative_error)
        ctx.echo() << "  rel " << format_double(*r.relative_error);
      ctx.echo() << "\n";
    }
    Json j;
    j["schema"] = "phigeo.converge.v1";
    j["phi"] = qd_json(qd);
    j["stencil_level"] = o->level;
    j["rows"] = table;
    ctx.write("converge.json", dump(j));
    ctx.write("converge.csv",
              csv_text("phigeo.converge.v1",
                       {"n_r", "n_theta", "oracle_length", "analytic_length",
                        "relative_error"},
                       csv));
  });
}

}  // namespace

void register_flat(CLI::App& app, Context& ctx) {
  cmd_trace(app, ctx);
  cmd_connect(app, ctx);
  cmd_oracle(app, ctx);
  cmd_converge(app, ctx);
}

}  // namespace phigeo::cli
