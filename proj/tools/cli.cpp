#include "cli.hpp"

#include <algorithm>
#include <cstdlib>

#include "cli_util.hpp"

namespace phigeo::cli {

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  Context ctx;
  ctx.out = &out;
  ctx.err = &err;
  const char* env_root = std::getenv("PHIGEO_OUT");
  ctx.out_dir = env_root && *env_root ? env_root : "phigeo-out";

  CLI::App app{"flat-metric geodesics, sector words, deformation families, "
               "and umbilic audits of quadratic differentials"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "print help for every command");
  app.add_option("--out", ctx.out_dir,
                 "artifact directory (default: $PHIGEO_OUT or ./phigeo-out)");

  register_flat(app, ctx);
  register_word(app, ctx);
  register_cmc(app, ctx);
  register_surface(app, ctx);
  register_plot(app, ctx);

  // let --out (defined on the root) appear after the subcommand name
  auto enable_fallthrough = [](CLI::App* a, auto&& self) -> void {
    for (CLI::App* s : a->get_subcommands({})) {
      s->fallthrough();
      self(s, self);
    }
  };
  enable_fallthrough(&app, enable_fallthrough);

  // distinct unknown-command diagnostic ahead of general flag parsing
  auto is_known = [&](const std::string& name) {
    auto subs = app.get_subcommands({});
    return std::any_of(subs.begin(), subs.end(), [&](const CLI::App* s) {
      return s->get_name() == name;
    });
  };
  for (const std::string& a : args) {
    if (!a.empty() && a[0] == '-') continue;
    if (!is_known(a)) {
      err << "unknown command: '" << a << "' (see --help)\n";
      return 2;
    }
    break;
  }

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
    return 0;
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const CheckFailure& e) {
    err << "check failed: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace phigeo::cli
