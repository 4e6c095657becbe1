#include <memory>

#include "cli_util.hpp"

namespace phigeo::cli {

namespace {

void cmd_surface_scan(CLI::App& app, Context& ctx) {
  struct Opts {
    SurfaceOpts surface;
    bool force_scan = false;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand(
      "surface-scan", "find the umbilics of one closed surface and check the "
                      "index sum against the sphere Euler characteristic");
  add_surface_options(*cmd, o->surface);
  cmd->add_flag("--force-scan", o->force_scan,
                "scan even when the surface fails the convexity gate");
  cmd->callback([o, &ctx] {
    SampledImmersion s = o->surface.build();
    ConvexityCheck cx = check_convexity(s);

    Json j;
    j["schema"] = "phigeo.surface-scan.v1";
    j["surface"] = s.description();
    j["min_gauss_curvature"] = cx.min_K;
    j["strictly_convex"] = cx.strictly_convex;
    ctx.echo() << s.description() << "\n";
    ctx.echo() << "min Gauss curvature " << format_double(cx.min_K)
               << (cx.strictly_convex ? " (strictly convex)"
                                      : " (NOT strictly convex)")
               << "\n";

    if (!cx.strictly_convex && !o->force_scan) {
      j["scanned"] = false;
      ctx.write("surface-scan.json", dump(j));
      ctx.echo() << "umbilic scan skipped (pass --force-scan to override)\n";
      return;
    }

    IndexSumReport rep = index_sum_check(s);
    Json umb = Json::array();
    for (const auto& u : rep.umbilics) umb.push_back(umbilic_json(u));
    j["scanned"] = true;
    j["umbilics"] = umb;
    j["index_sum"] = half_json(rep.total);
    j["resolution_used"] = rep.resolution_used;
    j["rescans"] = rep.rescans;
    j["matched"] = rep.matched;
    ctx.write("surface-scan.json", dump(j));

    std::vector<std::vector<std::string>> rows;
    for (const auto& u : rep.umbilics)
      rows.push_back({chart_name(u.at.chart), format_double(u.at.u),
                      format_double(u.at.v), format_double(u.position.x),
                      format_double(u.position.y), format_double(u.position.z),
                      u.index.str(), format_double(u.residual)});
    ctx.write("surface-umbilics.csv",
              csv_text("phigeo.surface-umbilics.v1",
                       {"chart", "u", "v", "x", "y", "z", "index", "residual"},
                       rows));

    ctx.echo() << rep.umbilics.size() << " umbilics, indices [";
    for (size_t k = 0; k < rep.umbilics.size(); ++k)
      ctx.echo() << (k ? ", " : "") << rep.umbilics[k].index.str();
    ctx.echo() << "], sum " << rep.total.str() << "\n";
    if (cx.strictly_convex && !rep.matched)
      throw CheckFailure("index sum " + rep.total.str() +
                         " does not match the sphere Euler characteristic");
  });
}

void cmd_caratheodory(CLI::App& app, Context& ctx) {
  struct Opts {
    std::uint64_t seed = 1;
    int count = 25;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand(
      "caratheodory", "audit a seeded corpus of convex surfaces: umbilic "
                      "count, index bound, and index sum per member");
  cmd->add_option("--seed", o->seed, "corpus RNG seed (default 1)");
  cmd->add_option("--count", o->count, "corpus size (default 25)");
  cmd->callback([o, &ctx] {
    auto corpus = make_convex_corpus(o->seed, o->count);

    Json defs = Json::array();
    for (const auto& e : corpus) {
      Json d;
      d["name"] = e.name;
      d["surface"] = e.surface.description();
      defs.push_back(d);
    }
    Json cj;
    cj["schema"] = "phigeo.corpus.v1";
    cj["seed"] = o->seed;
    cj["count"] = o->count;
    cj["surfaces"] = defs;
    ctx.write("caratheodory-corpus.json", dump(cj));

    SurfaceAuditReport report = audit_corpus(corpus);
    Json entries = Json::array();
    for (const auto& e : report.entries) {
      Json r;
      r["name"] = e.name;
      r["convex"] = e.convex;
      r["scanned"] = e.scanned;
      r["umbilics"] = e.umbilic_count;
      r["index_sum"] = half_json(e.index_sum);
      r["max_index"] = half_json(e.max_index);
      r["resolution_used"] = e.resolution_used;
      r["findings"] = e.findings;
      entries.push_back(r);
      ctx.echo() << e.name << ": " << e.umbilic_count << " umbilics, sum "
                 << e.index_sum.str() << ", max " << e.max_index.str();
      for (const auto& f : e.findings) ctx.echo() << "  [" << f << "]";
      ctx.echo() << "\n";
    }
    Json j;
    j["schema"] = "phigeo.caratheodory.v1";
    j["seed"] = o->seed;
    j["all_pass"] = report.all_pass;
    j["entries"] = entries;
    ctx.write("caratheodory-report.json", dump(j));
    ctx.echo() << (report.all_pass ? "all surfaces pass" : "FAILURES present")
               << "\n";
    if (!report.all_pass)
      throw CheckFailure("at least one corpus surface failed the audit");
  });
}

}  // namespace

void register_surface(CLI::App& app, Context& ctx) {
  cmd_surface_scan(app, ctx);
  cmd_caratheodory(app, ctx);
}

}  // namespace phigeo::cli
