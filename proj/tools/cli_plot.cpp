#include <cmath>
#include <memory>

#include "cli_util.hpp"
#include "phigeo/geodesic.hpp"
#include "phigeo/flatcone.hpp"
#include "phigeo/sector.hpp"
#include "phigeo/svg.hpp"

namespace phigeo::cli {

namespace {

constexpr const char* kBlue = "#1f77b4";
constexpr const char* kRed = "#d62728";
constexpr const char* kGreen = "#2ca02c";
constexpr const char* kGrey = "#9a9a9a";

void cmd_plot_foliation(CLI::App& plot, Context& ctx) {
  struct Opts {
    PhiOpts phi;
    double slope = 0.0;
    int curves = 24;
    double seed_r = 0.0;
    double step = 2e-3;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = plot.add_subcommand(
      "foliation", "trajectory portrait of the slope-t foliation");
  add_phi_options(*cmd, o->phi);
  cmd->add_option("--slope", o->slope, "foliation slope t");
  cmd->add_option("--curves", o->curves, "seed curves (default 24)");
  cmd->add_option("--seed-r", o->seed_r, "seed circle radius (default 0.55 R)");
  cmd->add_option("--step", o->step, "trace step (default 2e-3)");
  cmd->callback([o, &ctx] {
    QuadraticDifferential qd = o->phi.load();
    double R = qd.chart_radius();
    double sr = o->seed_r > 0 ? o->seed_r : 0.55 * R;
    double theta = wrap_to_pi(2.0 * o->slope);

    SvgCanvas svg(720, 720, -1.05 * R, 1.05 * R, -1.05 * R, 1.05 * R);
    svg.circle(Complex(0, 0), R, kGrey);
    svg.dot(Complex(0, 0), 3.0, kRed);

    std::vector<std::vector<std::string>> rows;
    for (int k = 0; k < o->curves; ++k) {
      Complex seed = std::polar(sr, kTwoPi * k / o->curves + 0.13);
      auto back = trace_trajectory(qd, seed, theta, o->step, 4.0 * R, -1);
      std::reverse(back.begin(), back.end());
      auto fwd = trace_trajectory(qd, seed, theta, o->step, 4.0 * R, +1);
      back.insert(back.end(), fwd.begin() + 1, fwd.end());
      svg.polyline(back, kBlue);
      double arclen = 0.0;
      for (size_t i = 0; i < back.size(); ++i) {
        if (i > 0) arclen += std::abs(back[i] - back[i - 1]);
        rows.push_back({std::to_string(k), format_double(back[i].real()),
                        format_double(back[i].imag()), format_double(arclen)});
      }
    }
    Json j;
    j["schema"] = "phigeo.plot-foliation.v1";
    j["phi"] = qd_json(qd);
    j["slope"] = o->slope;
    j["curves"] = o->curves;
    ctx.write("plot-foliation.json", dump(j));
    ctx.write("plot-foliation.csv",
              csv_text("phigeo.plot-foliation.v1",
                       {"curve", "u", "v", "arclen"}, rows));
    ctx.write("plot-foliation.svg", svg.str());
  });
}

void cmd_plot_sectors(CLI::App& plot, Context& ctx) {
  struct Opts {
    PhiOpts phi;
    double slope = 0.0;
    int ticks = 48;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = plot.add_subcommand(
      "sectors", "direction-field ticks with the detected sector word");
  add_phi_options(*cmd, o->phi);
  cmd->add_option("--slope", o->slope, "foliation slope t");
  cmd->add_option("--ticks", o->ticks, "ticks per circle (default 48)");
  cmd->callback([o, &ctx] {
    QuadraticDifferential qd = o->phi.load();
    double R = qd.chart_radius();
    LineField field =
        sample_foliation(qd, o->slope, 0.1 * R, 0.9 * R, 9, 1024);
    SectorWord word = canonical_form(detect_sectors(field));

    SvgCanvas svg(720, 760, -1.05 * R, 1.05 * R, -1.05 * R, 1.2 * R);
    svg.circle(Complex(0, 0), R, kGrey);
    svg.dot(Complex(0, 0), 3.0, kRed);
    std::vector<std::vector<std::string>> rows;
    for (double r : field.radii) {
      for (int k = 0; k < o->ticks; ++k) {
        double angle = kTwoPi * k / o->ticks;
        double dir = field_direction(field, r, angle);
        Complex at = std::polar(r, angle);
        Complex half = std::polar(0.035 * R, dir);
        svg.line(at - half, at + half, kBlue);
        rows.push_back({format_double(r), format_double(angle),
                        format_double(dir)});
      }
    }
    // mark radial alignment on the outer circle: candidates for separatrices
    // and parabolic arcs
    const int fine = 2048;
    for (int k = 0; k < fine; ++k) {
      double angle = kTwoPi * k / fine;
      double dir = field_direction(field, field.r_out, angle);
      if (std::abs(line_angle_diff(dir, angle)) < 2e-3)
        svg.dot(std::polar(field.r_out, angle), 2.0, kGreen);
    }
    svg.text(Complex(-1.0 * R, 1.1 * R), word_to_string(word), 15);

    Json j;
    j["schema"] = "phigeo.plot-sectors.v1";
    j["phi"] = qd_json(qd);
    j["slope"] = o->slope;
    j["word"] = word_json(word);
    if (is_normalized(word)) j["index"] = half_json(index(word));
    ctx.write("plot-sectors.json", dump(j));
    ctx.write("plot-sectors.csv",
              csv_text("phigeo.plot-sectors.v1", {"radius", "angle", "direction"},
                       rows));
    ctx.write("plot-sectors.svg", svg.str());
    ctx.echo() << word_to_string(word) << "\n";
  });
}

void cmd_plot_umbilics(CLI::App& plot, Context& ctx) {
  struct Opts {
    SurfaceOpts surface;
    int grid = 36;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = plot.add_subcommand(
      "umbilics", "principal-direction map of the chart atlas with umbilics "
                  "marked");
  add_surface_options(*cmd, o->surface);
  cmd->add_option("--grid", o->grid, "tick rows per chart (default 36)");
  cmd->callback([o, &ctx] {
    SampledImmersion s = o->surface.build();
    IndexSumReport rep = index_sum_check(s);

    // one canvas, three panels: the band rectangle below, the two cap disks
    // above it
    const double capy = SampledImmersion::kBandMaxV + 0.62;
    const Complex north_c(-0.62, capy), south_c(0.62, capy);
    SvgCanvas svg(1040, 560, -kPi - 0.08, kPi + 0.08, -1.04,
                  capy + 0.53);
    auto panel = [&](ChartId chart, Complex p) {
      if (chart == ChartId::band) return p;
      return (chart == ChartId::north ? north_c : south_c) + p;
    };

    // chart outlines
    svg.line(Complex(-kPi, -SampledImmersion::kBandMaxV),
             Complex(kPi, -SampledImmersion::kBandMaxV), kGrey);
    svg.line(Complex(-kPi, SampledImmersion::kBandMaxV),
             Complex(kPi, SampledImmersion::kBandMaxV), kGrey);
    svg.line(Complex(-kPi, -SampledImmersion::kBandMaxV),
             Complex(-kPi, SampledImmersion::kBandMaxV), kGrey);
    svg.line(Complex(kPi, -SampledImmersion::kBandMaxV),
             Complex(kPi, SampledImmersion::kBandMaxV), kGrey);
    svg.circle(north_c, SampledImmersion::kCapMaxR, kGrey);
    svg.circle(south_c, SampledImmersion::kCapMaxR, kGrey);
    svg.text(north_c + Complex(-0.13, 0.47), "north", 12);
    svg.text(south_c + Complex(-0.13, 0.47), "south", 12);

    std::vector<std::vector<std::string>> rows;
    auto draw_chart = [&](ChartId chart, double u0, double u1, double v0,
                          double v1, bool disk) {
      int nv = o->grid;
      int nu = std::max(nv, static_cast<int>(std::lround(
                                nv * (u1 - u0) / (v1 - v0))));
      double tick = disk ? 0.028 : 0.05;
      for (int i = 0; i <= nu; ++i)
        for (int j = 0; j <= nv; ++j) {
          double u = u0 + (u1 - u0) * i / nu;
          double v = v0 + (v1 - v0) * j / nv;
          if (disk && u * u + v * v > 0.42 * 0.42) continue;
          double angle = 0.0;
          try {
            angle = principal_angle(s, {chart, u, v});
          } catch (const Error&) {
            continue;  // at or too close to an umbilic: no direction to draw
          }
          Complex at(u, v);
          Complex half = std::polar(tick, angle);
          svg.line(panel(chart, at - half), panel(chart, at + half), kBlue);
          rows.push_back({chart_name(chart), format_double(u), format_double(v),
                          format_double(angle)});
        }
    };
    draw_chart(ChartId::band, -kPi, kPi, -0.9, 0.9, false);
    draw_chart(ChartId::north, -0.42, 0.42, -0.42, 0.42, true);
    draw_chart(ChartId::south, -0.42, 0.42, -0.42, 0.42, true);

    std::vector<std::vector<std::string>> urows;
    for (const auto& u : rep.umbilics) {
      Complex at = panel(u.at.chart, Complex(u.at.u, u.at.v));
      svg.dot(at, 5.0, kRed);
      svg.text(at + Complex(0.05, 0.05), u.index.str(), 13, kRed);
      urows.push_back({chart_name(u.at.chart), format_double(u.at.u),
                       format_double(u.at.v), format_double(u.position.x),
                       format_double(u.position.y), format_double(u.position.z),
                       u.index.str(), format_double(u.residual)});
    }
    svg.text(Complex(-kPi + 0.05, capy + 0.4), s.description(), 14);

    Json j;
    j["schema"] = "phigeo.plot-umbilics.v1";
    j["surface"] = s.description();
    Json umb = Json::array();
    for (const auto& u : rep.umbilics) umb.push_back(umbilic_json(u));
    j["umbilics"] = umb;
    j["index_sum"] = half_json(rep.total);
    j["matched"] = rep.matched;
    ctx.write("plot-umbilics.json", dump(j));
    ctx.write("plot-umbilics-field.csv",
              csv_text("phigeo.plot-umbilics-field.v1",
                       {"chart", "u", "v", "angle"}, rows));
    ctx.write("plot-umbilics-points.csv",
              csv_text("phigeo.surface-umbilics.v1",
                       {"chart", "u", "v", "x", "y", "z", "index", "residual"},
                       urows));
    ctx.write("plot-umbilics.svg", svg.str());
  });
}

void cmd_plot_oracle(CLI::App& plot, Context& ctx) {
  struct Opts {
    PhiOpts phi;
    std::string from, to;
    std::string res = "128,256";
    int level = 2;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = plot.add_subcommand(
      "oracle", "grid shortest path against the analytic geodesic");
  add_phi_options(*cmd, o->phi);
  cmd->add_option("--from", o->from, "first point \"x,y\"")->required();
  cmd->add_option("--to", o->to, "second point \"x,y\"")->required();
  cmd->add_option("--res", o->res, "grid resolution \"n_r,n_theta\"");
  cmd->add_option("--level", o->level, "stencil level 1..3");
  cmd->callback([o, &ctx] {
    QuadraticDifferential qd = o->phi.load();
    auto res = parse_ints(o->res);
    if (res.size() != 2)
      throw Error(Errc::parameter, "--res wants \"n_r,n_theta\"");
    MetricGraph g = build_grid(qd, res[0], res[1], o->level);
    PathResult grid_path =
        shortest_path(g, parse_point(o->from), parse_point(o->to));

    double R = qd.chart_radius();
    SvgCanvas svg(720, 720, -1.05 * R, 1.05 * R, -1.05 * R, 1.05 * R);
    svg.circle(Complex(0, 0), R, kGrey);
    svg.dot(Complex(0, 0), 3.0, kGrey);
    svg.polyline(grid_path.points, kBlue, 1.6);
    Json j;
    j["schema"] = "phigeo.plot-oracle.v1";
    j["phi"] = qd_json(qd);
    j["grid_length"] = grid_path.length;
    if (qd.is_monomial()) {
      GeodesicPath exact =
          connect(qd, grid_path.points.front(), grid_path.points.back());
      svg.polyline(exact.points, kRed, 1.2);
      j["analytic_length"] = exact.length;
      ctx.write("plot-oracle-analytic.csv",
                csv_text("phigeo.oracle-path.v1", {"u", "v", "arclen"},
                         polyline_rows(exact.points)));
    }
    svg.dot(grid_path.points.front(), 4.0, kGreen);
    svg.dot(grid_path.points.back(), 4.0, kGreen);

    ctx.write("plot-oracle.json", dump(j));
    ctx.write("plot-oracle-grid.csv",
              csv_text("phigeo.oracle-path.v1", {"u", "v", "arclen"},
                       polyline_rows(grid_path.points)));
    ctx.write("plot-oracle.svg", svg.str());
  });
}

}  // namespace

void register_plot(CLI::App& app, Context& ctx) {
  CLI::App* plot = app.add_subcommand(
      "plot", "SVG figures (each with its numeric CSV/JSON twin)");
  plot->require_subcommand(1);
  cmd_plot_foliation(*plot, ctx);
  cmd_plot_sectors(*plot, ctx);
  cmd_plot_umbilics(*plot, ctx);
  cmd_plot_oracle(*plot, ctx);
}

}  // namespace phigeo::cli
