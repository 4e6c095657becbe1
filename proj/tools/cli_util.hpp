#pragma once

#include <filesystem>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "phigeo/qdiff.hpp"
#include "phigeo/surface.hpp"
#include "phigeo/types.hpp"
#include "phigeo/word.hpp"

namespace phigeo::cli {

// Insertion-ordered so artifacts read top-down; dumping is deterministic.
using Json = nlohmann::ordered_json;

// Thrown by command bodies whose numeric check failed: maps to exit 1,
// distinct from usage/input errors (exit 2).
struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shared per-invocation state: artifact root and output streams.
struct Context {
  std::filesystem::path out_dir;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;

  std::ostream& echo() const { return *out; }

  // Write an artifact under out_dir and echo its path; returns the path.
  std::filesystem::path write(const std::string& filename,
                              std::string_view bytes) const;
};

// "x,y" -> complex chart point.
Complex parse_point(const std::string& text);

// comma-separated lists
std::vector<double> parse_reals(const std::string& text);
std::vector<int> parse_ints(const std::string& text);

// Inline coefficient expression: '+'-joined monomial terms "c z^k" with c a
// real literal or "(re,im)", e.g. "z^2", "2z^3", "(0,1)z^2+0.25z^4", "1".
// The lowest degree is the leading term; degrees must be distinct.
QuadraticDifferential parse_phi(const std::string& expr, double chart_radius);

// The shared --phi / --phi-json / --chart-radius option group.
struct PhiOpts {
  std::string expr;
  std::string json_path;
  double chart_radius = 1.0;

  QuadraticDifferential load() const;
};
void add_phi_options(CLI::App& cmd, PhiOpts& o);

// The shared --family option group for surface commands.
struct SurfaceOpts {
  std::string family;
  double a = 3.0, b = 2.0, c = 1.0;
  double eps = 0.04;
  std::string coeffs;
  double exponent = 4.0;
  std::string rotate;  // "x,y,z,angle" axis-angle

  SampledImmersion build() const;
};
void add_surface_options(CLI::App& cmd, SurfaceOpts& o);

const char* chart_name(ChartId id);

Json qd_json(const QuadraticDifferential& qd);
Json word_json(const SectorWord& w);
Json half_json(HalfInteger h);
Json umbilic_json(const Umbilic& u);

// dump with 2-space indent and trailing newline
std::string dump(const Json& j);

// CSV bytes: schema comment line, header row, then data rows.
std::string csv_text(const std::string& schema,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows);

// polyline rows (u, v, cumulative chart arclen)
std::vector<std::vector<std::string>> polyline_rows(
    const std::vector<Complex>& pts);

// command registrations (one translation unit each)
void register_flat(CLI::App& app, Context& ctx);
void register_word(CLI::App& app, Context& ctx);
void register_cmc(CLI::App& app, Context& ctx);
void register_surface(CLI::App& app, Context& ctx);
void register_plot(CLI::App& app, Context& ctx);

}  // namespace phigeo::cli
