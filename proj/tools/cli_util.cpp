#include "cli_util.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "phigeo/io.hpp"

namespace phigeo::cli {

std::filesystem::path Context::write(const std::string& filename,
                                     std::string_view bytes) const {
  std::filesystem::path path = out_dir / filename;
  write_text_file(path, bytes);
  echo() << "wrote " << path.string() << "\n";
  return path;
}

namespace {

double parse_real(std::string_view s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw Error(Errc::parameter, "malformed number: '" + std::string(s) + "'");
  return v;
}

}  // namespace

Complex parse_point(const std::string& text) {
  auto comma = text.find(',');
  if (comma == std::string::npos)
    throw Error(Errc::parameter, "malformed point (want \"x,y\"): '" + text + "'");
  return {parse_real(std::string_view(text).substr(0, comma)),
          parse_real(std::string_view(text).substr(comma + 1))};
}

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  if (text.empty()) return out;
  size_t pos = 0;
  while (true) {
    size_t comma = text.find(',', pos);
    out.push_back(parse_real(std::string_view(text).substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_reals(text)) {
    int k = static_cast<int>(std::lround(v));
    if (v != k)
      throw Error(Errc::parameter, "expected an integer list: '" + text + "'");
    out.push_back(k);
  }
  return out;
}

QuadraticDifferential parse_phi(const std::string& expr, double chart_radius) {
  std::string s;
  for (char c : expr)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw Error(Errc::parameter, "empty differential expression");

  // split on top-level '+' (outside parentheses, not an exponent sign)
  std::vector<std::string> terms;
  size_t start = 0;
  int depth = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    bool exponent_sign =
        i > 0 && (s[i - 1] == 'e' || s[i - 1] == 'E') && i >= 2 &&
        (std::isdigit(static_cast<unsigned char>(s[i - 2])) || s[i - 2] == '.');
    if (c == '+' && depth == 0 && i > start && !exponent_sign) {
      terms.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  terms.push_back(s.substr(start));

  std::vector<PolyTerm> parsed;
  for (const std::string& term : terms) {
    if (term.empty())
      throw Error(Errc::parameter, "malformed differential: '" + expr + "'");
    Complex coeff(1.0, 0.0);
    size_t pos = 0;
    if (term[0] == '(') {
      size_t close = term.find(')');
      if (close == std::string::npos)
        throw Error(Errc::parameter, "unbalanced '(' in: '" + expr + "'");
      Complex c = parse_point(term.substr(1, close - 1));
      coeff = c;
      pos = close + 1;
    } else if (term[0] != 'z') {
      size_t z = term.find('z');
      size_t end = z == std::string::npos ? term.size() : z;
      coeff = Complex(parse_real(std::string_view(term).substr(0, end)), 0.0);
      pos = end;
    }
    if (pos < term.size() && term[pos] == '*') ++pos;
    int degree = 0;
    if (pos < term.size()) {
      if (term[pos] != 'z')
        throw Error(Errc::parameter, "malformed term: '" + term + "'");
      ++pos;
      degree = 1;
      if (pos < term.size()) {
        if (term[pos] != '^')
          throw Error(Errc::parameter, "malformed term: '" + term + "'");
        double d = parse_real(std::string_view(term).substr(pos + 1));
        degree = static_cast<int>(std::lround(d));
        if (d != degree || degree < 0)
          throw Error(Errc::parameter,
                      "exponent must be a nonnegative integer: '" + term + "'");
        pos = term.size();
      }
    }
    parsed.push_back({degree, coeff});
  }

  std::sort(parsed.begin(), parsed.end(),
            [](const PolyTerm& a, const PolyTerm& b) { return a.degree < b.degree; });
  for (size_t i = 1; i < parsed.size(); ++i)
    if (parsed[i].degree == parsed[i - 1].degree)
      throw Error(Errc::parameter,
                  "repeated degree " + std::to_string(parsed[i].degree) +
                      " in: '" + expr + "'");
  Complex leading = parsed.front().coeff;
  int order = parsed.front().degree;
  parsed.erase(parsed.begin());
  return QuadraticDifferential(leading, order, std::move(parsed), chart_radius);
}

QuadraticDifferential PhiOpts::load() const {
  if (!json_path.empty()) {
    if (!expr.empty())
      throw Error(Errc::parameter, "give either --phi or --phi-json, not both");
    return qdiff_from_json(read_text_file(json_path));
  }
  if (expr.empty())
    throw Error(Errc::parameter, "missing differential: pass --phi or --phi-json");
  return parse_phi(expr, chart_radius);
}

void add_phi_options(CLI::App& cmd, PhiOpts& o) {
  cmd.add_option("--phi", o.expr,
                 "differential coefficient, e.g. \"z^2\" or \"(0,1)z^3+0.2z^5\"");
  cmd.add_option("--phi-json", o.json_path, "differential as a JSON file");
  cmd.add_option("--chart-radius", o.chart_radius,
                 "chart disk radius for --phi (default 1)");
}

SampledImmersion SurfaceOpts::build() const {
  SampledImmersion s = [&] {
    if (family == "ellipsoid") return SampledImmersion::ellipsoid(a, b, c);
    if (family == "perturbed-sphere") {
      std::array<double, 20> cubic{};
      auto vals = parse_reals(coeffs);
      if (vals.size() > cubic.size())
        throw Error(Errc::parameter, "--coeffs takes at most 20 values");
      std::copy(vals.begin(), vals.end(), cubic.begin());
      return SampledImmersion::perturbed_sphere(eps, cubic);
    }
    if (family == "superellipsoid")
      return SampledImmersion::superellipsoid(exponent);
    throw Error(Errc::parameter, "unknown family: '" + family + "'");
  }();
  if (!rotate.empty()) {
    auto vals = parse_reals(rotate);
    if (vals.size() != 4)
      throw Error(Errc::parameter, "--rotate wants \"x,y,z,angle\"");
    s = s.rotated(Mat3::rotation({vals[0], vals[1], vals[2]}, vals[3]));
  }
  return s;
}

void add_surface_options(CLI::App& cmd, SurfaceOpts& o) {
  cmd.add_option("--family", o.family,
                 "ellipsoid | perturbed-sphere | superellipsoid")
      ->required()
      ->check(CLI::IsMember({"ellipsoid", "perturbed-sphere", "superellipsoid"}));
  cmd.add_option("--a", o.a, "ellipsoid semi-axis a (default 3)");
  cmd.add_option("--b", o.b, "ellipsoid semi-axis b (default 2)");
  cmd.add_option("--c", o.c, "ellipsoid semi-axis c (default 1)");
  cmd.add_option("--eps", o.eps, "perturbation amplitude (default 0.04)");
  cmd.add_option("--coeffs", o.coeffs,
                 "up to 20 cubic coefficients, comma-separated");
  cmd.add_option("--exponent", o.exponent, "superellipsoid exponent (default 4)");
  cmd.add_option("--rotate", o.rotate, "rotate by axis-angle \"x,y,z,angle\"");
}

const char* chart_name(ChartId id) {
  switch (id) {
    case ChartId::band: return "band";
    case ChartId::north: return "north";
    default: return "south";
  }
}

Json umbilic_json(const Umbilic& u) {
  Json j;
  j["chart"] = chart_name(u.at.chart);
  j["u"] = u.at.u;
  j["v"] = u.at.v;
  j["position"] = {u.position.x, u.position.y, u.position.z};
  j["index"] = half_json(u.index);
  j["residual"] = u.residual;
  return j;
}

Json qd_json(const QuadraticDifferential& qd) {
  Json j = Json::parse(to_json(qd));
  j["describe"] = describe(qd);
  return j;
}

Json word_json(const SectorWord& w) {
  Json j;
  j["order"] = w.order();
  j["pattern"] = w.pattern();
  j["p_weights"] = w.p_weights();
  j["text"] = word_to_string(w);
  return j;
}

Json half_json(HalfInteger h) {
  Json j;
  j["twice"] = h.twice;
  j["text"] = h.str();
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string csv_text(const std::string& schema,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream os;
  os << "# schema: " << schema << "\n";
  write_csv(os, header, rows);
  return os.str();
}

std::vector<std::vector<std::string>> polyline_rows(
    const std::vector<Complex>& pts) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(pts.size());
  double arclen = 0.0;
  for (size_t i = 0; i < pts.size(); ++i) {
    if (i > 0) arclen += std::abs(pts[i] - pts[i - 1]);
    rows.push_back({format_double(pts[i].real()), format_double(pts[i].imag()),
                    format_double(arclen)});
  }
  return rows;
}

}  // namespace phigeo::cli
