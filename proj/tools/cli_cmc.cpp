#include <cmath>
#include <memory>

#include "cli_util.hpp"
#include "phigeo/cmc.hpp"

namespace phigeo::cli {

namespace {

struct SolveOpts {
  PhiOpts phi;
  double H = 1.0;
  double boundary = 0.0;
  double radius = 0.0;  // 0: use the chart radius
  int n = 65;
  int max_iterations = 50;

  double disk_radius(const QuadraticDifferential& qd) const {
    return radius > 0 ? radius : qd.chart_radius();
  }
};

void add_solve_options(CLI::App& cmd, SolveOpts& o) {
  add_phi_options(cmd, o.phi);
  cmd.add_option("--H", o.H, "constant mean curvature (default 1)");
  cmd.add_option("--boundary", o.boundary,
                 "Dirichlet value of lambda on the circle (default 0)");
  cmd.add_option("--disk-radius", o.radius,
                 "solve disk radius (default: chart radius)");
  cmd.add_option("--grid", o.n, "grid nodes per side (default 65)");
  cmd.add_option("--max-iter", o.max_iterations, "Newton iteration cap");
}

Json residual_history_json(const GaussSolveResult& res) {
  Json j = Json::array();
  for (double r : res.residual_history) j.push_back(r);
  return j;
}

std::string lambda_csv(const ConformalMetric& m) {
  std::vector<std::vector<std::string>> rows;
  for (int i = 0; i < m.grid.n; ++i)
    for (int j = 0; j < m.grid.n; ++j)
      if (m.grid.inside(i, j))
        rows.push_back({format_double(m.grid.x(i)), format_double(m.grid.y(j)),
                        format_double(m.lambda[m.grid.id(i, j)])});
  return csv_text("phigeo.metric-lambda.v1", {"x", "y", "lambda"}, rows);
}

void cmd_gauss_solve(CLI::App& app, Context& ctx) {
  struct Opts {
    SolveOpts solve;
    double tol = 1e-8;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand(
      "gauss-solve", "solve the curvature compatibility equation for lambda");
  add_solve_options(*cmd, o->solve);
  cmd->add_option("--tol", o->tol,
                  "acceptable curvature residual sup-norm (default 1e-8)");
  cmd->callback([o, &ctx] {
    QuadraticDifferential qd = o->solve.phi.load();
    GaussSolveResult res =
        solve_gauss(qd, o->solve.H, o->solve.boundary,
                    o->solve.disk_radius(qd), o->solve.n, o->solve.max_iterations);
    ResidualField gr = gauss_residual(res.metric, qd);

    Json j;
    j["schema"] = "phigeo.gauss-solve.v1";
    j["phi"] = qd_json(qd);
    j["H"] = o->solve.H;
    j["boundary"] = o->solve.boundary;
    j["disk_radius"] = o->solve.disk_radius(qd);
    j["grid"] = o->solve.n;
    j["converged"] = res.converged;
    j["iterations"] = res.iterations;
    j["residual_history"] = residual_history_json(res);
    j["curvature_residual"] = gr.max_abs;
    ctx.write("gauss-solve.json", dump(j));
    ctx.write("gauss-lambda.csv", lambda_csv(res.metric));
    ctx.echo() << "converged=" << (res.converged ? "yes" : "no") << " after "
               << res.iterations << " iterations, curvature residual "
               << format_double(gr.max_abs) << "\n";
    if (!res.converged)
      throw CheckFailure("the nonlinear solve did not converge");
    if (!(gr.max_abs < o->tol))
      throw CheckFailure("curvature residual " + format_double(gr.max_abs) +
                         " above tolerance " + format_double(o->tol));
  });
}

void cmd_bonnet(CLI::App& app, Context& ctx) {
  struct Opts {
    SolveOpts solve;
    double t = 0.0;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand(
      "bonnet", "second fundamental forms of the deformation family member t");
  add_solve_options(*cmd, o->solve);
  cmd->add_option("--t", o->t, "deformation parameter (radians)")->required();
  cmd->callback([o, &ctx] {
    QuadraticDifferential qd = o->solve.phi.load();
    GaussSolveResult res =
        solve_gauss(qd, o->solve.H, o->solve.boundary,
                    o->solve.disk_radius(qd), o->solve.n, o->solve.max_iterations);
    if (!res.converged)
      throw CheckFailure("the nonlinear solve did not converge");
    BonnetForms forms = bonnet_forms(res.metric, qd, o->t);
    ComplexField hc = hopf_coefficient(forms);

    // recombination must reproduce e^{-2it} phi identically
    double hopf_dev = 0.0;
    const DiskGrid& g = forms.grid;
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j)
        if (g.inside(i, j)) {
          Complex expect =
              std::polar(1.0, -2.0 * o->t) * evaluate(qd, g.point(i, j));
          hopf_dev = std::max(hopf_dev, std::abs(hc[g.id(i, j)] - expect));
        }

    std::vector<std::vector<std::string>> rows;
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j)
        if (g.inside(i, j)) {
          int id = g.id(i, j);
          rows.push_back({format_double(g.x(i)), format_double(g.y(j)),
                          format_double(forms.l[id]), format_double(forms.m[id]),
                          format_double(forms.nn[id])});
        }

    Json j;
    j["schema"] = "phigeo.bonnet.v1";
    j["phi"] = qd_json(qd);
    j["H"] = o->solve.H;
    j["t"] = o->t;
    j["grid"] = o->solve.n;
    j["iterations"] = res.iterations;
    j["hopf_recombination_deviation"] = hopf_dev;
    ctx.write("bonnet.json", dump(j));
    ctx.write("bonnet-forms.csv",
              csv_text("phigeo.bonnet-forms.v1", {"x", "y", "l", "m", "n"}, rows));
    ctx.echo() << "forms on " << rows.size()
               << " nodes, recombination deviation " << format_double(hopf_dev)
               << "\n";
  });
}

void cmd_codazzi(CLI::App& app, Context& ctx) {
  struct Opts {
    SolveOpts solve;
    double t = 0.0;
    std::string grids = "33,65,129";
    double min_order = 1.8;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand(
      "codazzi", "antiholomorphicity residual of the recombined coefficient "
                 "across grid refinements");
  add_solve_options(*cmd, o->solve);
  cmd->add_option("--t", o->t, "deformation parameter (default 0)");
  cmd->add_option("--grids", o->grids, "grid sizes, e.g. \"33,65,129\"");
  cmd->add_option("--min-order", o->min_order,
                  "required observed convergence order (default 1.8)");
  cmd->callback([o, &ctx] {
    QuadraticDifferential qd = o->solve.phi.load();
    auto ns = parse_ints(o->grids);
    if (ns.size() < 2)
      throw Error(Errc::parameter, "--grids wants at least two sizes");

    Json table = Json::array();
    std::vector<std::vector<std::string>> rows;
    std::vector<double> hs, errs;
    for (int n : ns) {
      GaussSolveResult res =
          solve_gauss(qd, o->solve.H, o->solve.boundary,
                      o->solve.disk_radius(qd), n, o->solve.max_iterations);
      if (!res.converged)
        throw CheckFailure("the nonlinear solve did not converge at grid " +
                           std::to_string(n));
      BonnetForms forms = bonnet_forms(res.metric, qd, o->t);
      ResidualField cz = codazzi_residual(forms, res.metric);
      hs.push_back(res.metric.grid.h);
      errs.push_back(cz.max_abs);
      Json e;
      e["grid"] = n;
      e["h"] = res.metric.grid.h;
      e["residual"] = cz.max_abs;
      table.push_back(e);
      rows.push_back({std::to_string(n), format_double(res.metric.grid.h),
                      format_double(cz.max_abs)});
      ctx.echo() << "grid " << n << "  h " << format_double(res.metric.grid.h)
                 << "  residual " << format_double(cz.max_abs) << "\n";
    }

    double worst_order = 1e300;
    for (size_t k = 1; k < errs.size(); ++k) {
      double order =
          std::log(errs[k - 1] / errs[k]) / std::log(hs[k - 1] / hs[k]);
      worst_order = std::min(worst_order, order);
      ctx.echo() << "observed order " << format_double(order) << "\n";
    }

    Json j;
    j["schema"] = "phigeo.codazzi.v1";
    j["phi"] = qd_json(qd);
    j["H"] = o->solve.H;
    j["t"] = o->t;
    j["rows"] = table;
    j["worst_observed_order"] = worst_order;
    ctx.write("codazzi.json", dump(j));
    ctx.write("codazzi.csv",
              csv_text("phigeo.codazzi.v1", {"grid", "h", "residual"}, rows));
    if (!(worst_order >= o->min_order))
      throw CheckFailure("observed order " + format_double(worst_order) +
                         " below required " + format_double(o->min_order));
  });
}

void cmd_curvature_lines(CLI::App& app, Context& ctx) {
  struct Opts {
    SolveOpts solve;
    double t = 0.0;
    double r_lo = 0.0, r_hi = 0.0;
    int curves = 6;
    double step = 1e-3;
    double max_dev = 1e-10;
    double max_hausdorff = 1e-4;
  };
  auto o = std::make_shared<Opts>();
  o->solve.n = 257;  // curve comparison wants the finer default grid
  CLI::App* cmd = app.add_subcommand(
      "curvature-lines",
      "check that principal curvature lines of the deformed immersion follow "
      "the slope-t trajectories");
  add_solve_options(*cmd, o->solve);
  cmd->add_option("--t", o->t, "deformation parameter / trajectory slope")
      ->required();
  cmd->add_option("--r-lo", o->r_lo, "annulus inner radius (default 0.25 R)");
  cmd->add_option("--r-hi", o->r_hi, "annulus outer radius (default 0.7 R)");
  cmd->add_option("--curves", o->curves, "integrated seed curves (default 6)");
  cmd->add_option("--step", o->step, "integration step (default 1e-3)");
  cmd->add_option("--max-dev", o->max_dev,
                  "pointwise direction tolerance (default 1e-10)");
  cmd->add_option("--max-hausdorff", o->max_hausdorff,
                  "curve Hausdorff tolerance (default 1e-4)");
  cmd->callback([o, &ctx] {
    QuadraticDifferential qd = o->solve.phi.load();
    double R = o->solve.disk_radius(qd);
    double lo = o->r_lo > 0 ? o->r_lo : 0.25 * R;
    double hi = o->r_hi > 0 ? o->r_hi : 0.7 * R;
    GaussSolveResult res = solve_gauss(qd, o->solve.H, o->solve.boundary, R,
                                       o->solve.n, o->solve.max_iterations);
    if (!res.converged)
      throw CheckFailure("the nonlinear solve did not converge");
    CurvatureLineReport rep = verify_curvature_lines(res.metric, qd, o->t, lo,
                                                     hi, o->curves, o->step);

    Json j;
    j["schema"] = "phigeo.curvature-lines.v1";
    j["phi"] = qd_json(qd);
    j["H"] = o->solve.H;
    j["t"] = o->t;
    j["grid"] = o->solve.n;
    j["annulus"] = {lo, hi};
    j["max_direction_deviation"] = rep.max_direction_deviation;
    j["max_hausdorff"] = rep.max_hausdorff;
    j["nodes_compared"] = rep.nodes_compared;
    j["curves_compared"] = rep.curves_compared;
    ctx.write("curvature-lines.json", dump(j));
    ctx.echo() << "direction deviation " << format_double(rep.max_direction_deviation)
               << " over " << rep.nodes_compared << " nodes, Hausdorff "
               << format_double(rep.max_hausdorff) << " over "
               << rep.curves_compared << " curves\n";
    if (!(rep.max_direction_deviation < o->max_dev))
      throw CheckFailure("direction deviation above " +
                         format_double(o->max_dev));
    if (!(rep.max_hausdorff < o->max_hausdorff))
      throw CheckFailure("curve Hausdorff distance above " +
                         format_double(o->max_hausdorff));
  });
}

}  // namespace

void register_cmc(CLI::App& app, Context& ctx) {
  cmd_gauss_solve(app, ctx);
  cmd_bonnet(app, ctx);
  cmd_codazzi(app, ctx);
  cmd_curvature_lines(app, ctx);
}

}  // namespace phigeo::cli
