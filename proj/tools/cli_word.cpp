#include <cmath>
#include <memory>

#include "cli_util.hpp"
#include "phigeo/sector.hpp"

namespace phigeo::cli {

namespace {

struct WordOpts {
  std::string pattern;
  int order = 1;
  std::string weights;

  SectorWord build() const {
    return SectorWord(pattern, order, parse_reals(weights));
  }
};

void add_word_options(CLI::App& cmd, WordOpts& o, bool required = true) {
  auto* w = cmd.add_option("--word", o.pattern, "symbol pattern, e.g. \"hph\"");
  auto* n = cmd.add_option("--n", o.order, "singularity order n >= 1");
  if (required) {
    w->required();
    n->required();
  }
  cmd.add_option("--weights", o.weights,
                 "comma-separated p-weights in radians, one per 'p'");
}

void cmd_word(CLI::App& app, Context& ctx) {
  CLI::App* word = app.add_subcommand("word", "sector-word calculus");
  word->require_subcommand(1);

  {
    auto o = std::make_shared<WordOpts>();
    CLI::App* c = word->add_subcommand("weight", "total angular measure");
    add_word_options(*c, *o);
    c->callback([o, &ctx] {
      ctx.echo() << format_double(weight(o->build())) << "\n";
    });
  }
  {
    auto o = std::make_shared<WordOpts>();
    CLI::App* c = word->add_subcommand(
        "normalize", "canonical cyclic representative and weight status");
    add_word_options(*c, *o);
    c->callback([o, &ctx] {
      SectorWord w = o->build();
      SectorWord canon = canonical_form(w);
      ctx.echo() << word_to_string(canon) << "\n";
      ctx.echo() << (is_normalized(canon) ? "normalized (weight 2*pi)"
                                          : "not normalized")
                 << "\n";
    });
  }
  {
    struct Opts {
      WordOpts a;
      std::string pattern2, weights2;
    };
    auto o = std::make_shared<Opts>();
    CLI::App* c = word->add_subcommand("equiv", "cyclic equivalence of two words");
    add_word_options(*c, o->a);
    c->add_option("--word2", o->pattern2, "second pattern")->required();
    c->add_option("--weights2", o->weights2, "second word's p-weights");
    c->callback([o, &ctx] {
      SectorWord a = o->a.build();
      SectorWord b(o->pattern2, o->a.order, parse_reals(o->weights2));
      ctx.echo() << (equivalent(a, b) ? "equivalent" : "not equivalent") << "\n";
    });
  }
  {
    auto o = std::make_shared<WordOpts>();
    CLI::App* c = word->add_subcommand(
        "index", "singularity index of a normalized word");
    add_word_options(*c, *o);
    c->callback([o, &ctx] {
      ctx.echo() << index(o->build()).str() << "\n";
    });
  }
  {
    struct Opts {
      WordOpts w;
      int order = 0;
    };
    auto o = std::make_shared<Opts>();
    CLI::App* c = word->add_subcommand(
        "realize", "angular sector layout realizing the word");
    add_word_options(*c, o->w);
    c->add_option("--order", o->order,
                  "realization order (default: smallest admissible)");
    c->callback([o, &ctx] {
      SectorWord w = o->w.build();
      int n = o->order > 0 ? o->order : min_order_realizing(w);
      SectorLayout layout = realize(w, n);

      Json sectors = Json::array();
      for (const auto& s : layout.sectors) {
        Json e;
        e["type"] = s.type == Symbol::H ? "h" : "p";
        e["start_angle"] = s.start_angle;
        e["sweep"] = s.sweep;
        sectors.push_back(e);
        ctx.echo() << (s.type == Symbol::H ? "h" : "p") << "  start "
                   << format_double(s.start_angle) << "  sweep "
                   << format_double(s.sweep) << "\n";
      }
      Json j;
      j["schema"] = "phigeo.word-layout.v1";
      j["word"] = word_json(w);
      j["order"] = layout.order;
      j["sectors"] = sectors;
      ctx.write("word-layout.json", dump(j));
    });
  }
}

// Shared field construction for `sectors` and `winding`: a slope-t foliation
// of a differential, or the model field of a realized word.
struct FieldOpts {
  PhiOpts phi;
  double slope = 0.0;
  WordOpts word;
  int order = 0;
  double r_in = 0.0, r_out = 0.0;
  int circles = 9;
  int samples = 1024;

  LineField build(Json* meta) const {
    if ((!phi.expr.empty() || !phi.json_path.empty()) && !word.pattern.empty())
      throw Error(Errc::parameter,
                  "ambiguous field source: pass either a differential "
                  "(--phi/--phi-json) or a word (--word), not both");
    if (!phi.expr.empty() || !phi.json_path.empty()) {
      QuadraticDifferential qd = phi.load();
      double a = r_in > 0 ? r_in : 0.1 * qd.chart_radius();
      double b = r_out > 0 ? r_out : 0.9 * qd.chart_radius();
      (*meta)["phi"] = qd_json(qd);
      (*meta)["slope"] = slope;
      return sample_foliation(qd, slope, a, b, circles, samples);
    }
    if (word.pattern.empty())
      throw Error(Errc::parameter,
                  "missing field source: pass --phi/--phi-json or --word/--n");
    SectorWord w = word.build();
    int n = order > 0 ? order : w.order();
    SectorLayout layout = realize(w, n);
    double a = r_in > 0 ? r_in : 0.1;
    double b = r_out > 0 ? r_out : 0.9;
    (*meta)["word"] = word_json(w);
    (*meta)["realized_order"] = n;
    return sample_layout(layout, a, b, circles, samples);
  }
};

void add_field_options(CLI::App& cmd, FieldOpts& o) {
  add_phi_options(cmd, o.phi);
  cmd.add_option("--slope", o.slope, "foliation slope t (with --phi)");
  add_word_options(cmd, o.word, /*required=*/false);
  cmd.add_option("--order", o.order, "realization order (with --word)");
  cmd.add_option("--r-in", o.r_in, "inner sampling radius");
  cmd.add_option("--r-out", o.r_out, "outer sampling radius");
  cmd.add_option("--circles", o.circles, "sampled circles (default 9)");
  cmd.add_option("--samples", o.samples, "samples per circle (default 1024)");
}

std::string field_csv(const LineField& f) {
  std::vector<std::vector<std::string>> rows;
  for (size_t c = 0; c < f.radii.size(); ++c)
    for (int k = 0; k < f.samples; ++k)
      rows.push_back({format_double(f.radii[c]),
                      format_double(kTwoPi * k / f.samples),
                      format_double(f.direction[c][k])});
  return csv_text("phigeo.line-field.v1", {"radius", "angle", "direction"}, rows);
}

void cmd_sectors(CLI::App& app, Context& ctx) {
  auto o = std::make_shared<FieldOpts>();
  CLI::App* cmd = app.add_subcommand(
      "sectors", "read off the sector word of a line field around 0");
  add_field_options(*cmd, *o);
  cmd->callback([o, &ctx] {
    Json j;
    j["schema"] = "phigeo.sectors.v1";
    LineField field = o->build(&j);
    SectorWord w = detect_sectors(field);
    SectorWord canon = canonical_form(w);

    j["detected"] = word_json(canon);
    j["h_count"] = canon.h_count();
    j["p_count"] = canon.p_count();
    if (is_normalized(canon)) j["index"] = half_json(index(canon));
    ctx.write("sectors.json", dump(j));
    ctx.write("sectors.csv", field_csv(field));
    ctx.echo() << word_to_string(canon) << "\n";
  });
}

void cmd_winding(CLI::App& app, Context& ctx) {
  struct Opts {
    FieldOpts field;
    double r = 0.0;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand(
      "winding", "index of the field singularity from one circle's winding");
  add_field_options(*cmd, o->field);
  cmd->add_option("--r", o->r, "circle radius (default: middle of the annulus)");
  cmd->callback([o, &ctx] {
    Json j;
    j["schema"] = "phigeo.winding.v1";
    LineField field = o->field.build(&j);
    double r = o->r > 0 ? o->r : std::sqrt(field.r_in * field.r_out);
    HalfInteger idx = winding_index(field, r);
    j["radius"] = r;
    j["index"] = half_json(idx);
    ctx.write("winding.json", dump(j));
    ctx.echo() << idx.str() << "\n";
  });
}

}  // namespace

void register_word(CLI::App& app, Context& ctx) {
  cmd_word(app, ctx);
  cmd_sectors(app, ctx);
  cmd_winding(app, ctx);
}

}  // namespace phigeo::cli
