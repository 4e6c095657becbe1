#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "phigeo/sector.hpp"
#include "phigeo/types.hpp"

namespace phigeo {

// ---------------------------------------------------------------------------
// Closed convex surfaces sampled through a three-chart atlas of the sphere:
// an equatorial band (u = longitude, v = latitude, |v| <= 0.96) and two polar
// caps in stereographic coordinates (|(u,v)| <= 0.45), overlapping by about
// ten degrees of polar angle.
// ---------------------------------------------------------------------------

enum class ChartId { band = 0, north = 1, south = 2 };

struct ChartPoint {
  ChartId chart = ChartId::band;
  double u = 0.0, v = 0.0;
};

class SampledImmersion {
 public:
  // x^2/a^2 + y^2/b^2 + z^2/c^2 = 1 (a spheroid when two axes agree)
  static SampledImmersion ellipsoid(double a, double b, double c);

  // unit sphere moved radially: x -> x (1 + eps P(x)) with P a cubic
  // polynomial; coefficients follow the monomial order
  // 1, x, y, z, x^2, xy, xz, y^2, yz, z^2, x^3, x^2y, x^2z, xy^2, xyz,
  // xz^2, y^3, y^2z, yz^2, z^3.
  static SampledImmersion perturbed_sphere(double eps,
                                           const std::array<double, 20>& cubic);

  // |x/a|^p + |y/a|^p + |z/a|^p = 1 with a = 1; smooth for even integer
  // exponents but with vanishing curvature along the coordinate planes when
  // p > 2 (it then fails the strict-convexity gate by design).
  static SampledImmersion superellipsoid(double exponent);

  SampledImmersion rotated(const Mat3& rot) const;

  std::string description() const;

  struct Jet2 {
    Vec3 P, Pu, Pv, Puu, Puv, Pvv;
  };
  Jet2 jet(ChartPoint p) const;
  Vec3 position(ChartPoint p) const { return jet(p).P; }
  double diameter_estimate() const;

  // largest chart coordinates considered valid (scan regions stay inside)
  static constexpr double kBandMaxV = 0.96;
  static constexpr double kCapMaxR = 0.45;

 private:
  enum class Family { ellipsoid, perturbed_sphere, superellipsoid };
  SampledImmersion() = default;

  Family family_ = Family::ellipsoid;
  double a_ = 1, b_ = 1, c_ = 1;
  double eps_ = 0;
  std::array<double, 20> cubic_{};
  double exponent_ = 2;
  Mat3 rot_ = Mat3::identity();
};

struct FundamentalForms {
  double E = 0, F = 0, G = 0;  // first form
  double l = 0, m = 0, n = 0;  // second form, oriented so that H > 0
  Vec3 normal;                 // the orientation used
  double H = 0, K = 0;
};

// Throws Errc::chart_seam when the parameterization degenerates at p
// (outside the designed chart domains).
FundamentalForms fundamental_forms(const SampledImmersion& s, ChartPoint p);

// Traceless part of the shape operator in an orthonormal tangent frame,
// packed as psi = (k_max - k_min)/2 * exp(2 i <angle of max direction>);
// zeros of psi are the umbilics.
Complex umbilic_deviation(const SampledImmersion& s, ChartPoint p);

// Parameter-plane angle (mod pi) of the maximal-curvature line at p.
// Throws Errc::umbilic when the curvatures coincide to working precision.
double principal_angle(const SampledImmersion& s, ChartPoint p);

struct Umbilic {
  ChartPoint at;
  Vec3 position;
  HalfInteger index;
  double residual = 0.0;  // |psi| at the refined point
};

struct ScanOptions {
  int resolution = 96;      // cells along the short side of each chart region
  int index_samples = 256;  // directions sampled when reading off the index
};

// Scan all charts for zeros of the umbilic deviation (cell winding with edge
// subdivision, then recursive cell refinement), deduplicate across chart
// overlaps by 3D position, and read off each index from the winding of the
// principal-direction field on a small surrounding circle.  Chart scans run
// concurrently; the merged result is deterministic.
// Throws Errc::precondition when the surface is totally umbilic.
std::vector<Umbilic> find_umbilics(const SampledImmersion& s,
                                   const ScanOptions& opts = {});

struct ConvexityCheck {
  double min_K = 0.0;
  ChartPoint argmin;
  bool strictly_convex = false;
};

ConvexityCheck check_convexity(const SampledImmersion& s);

struct IndexSumReport {
  std::vector<Umbilic> umbilics;
  HalfInteger total;
  int resolution_used = 0;
  int rescans = 0;
  bool matched = false;  // total == 2 (sphere Euler characteristic)
};

// Umbilic scan with automatic rescans at higher resolution until the index
// sum matches the Euler characteristic of the sphere (or the ladder is
// exhausted; `matched` reports the outcome).
IndexSumReport index_sum_check(const SampledImmersion& s);

struct SurfaceAuditEntry {
  std::string name;
  bool convex = false;
  bool scanned = false;
  int umbilic_count = 0;
  HalfInteger index_sum;
  HalfInteger max_index;
  int resolution_used = 0;
  std::vector<std::string> findings;  // empty means the surface passes
};

struct SurfaceAuditReport {
  std::vector<SurfaceAuditEntry> entries;
  bool all_pass = false;
};

struct CorpusEntry {
  std::string name;
  SampledImmersion surface;
};

// Deterministic 25-member corpus: reference ellipsoids and spheroids plus
// seeded random perturbed spheres (some in random orientations).
std::vector<CorpusEntry> make_convex_corpus(std::uint64_t seed,
                                            int count = 25);

// Desk audit over a corpus: every strictly convex member must show at least
// two umbilics, no index above +1, and index sum 2.  Violations and rejected
// (non-convex) members are reported as findings, never thrown.
SurfaceAuditReport audit_corpus(const std::vector<CorpusEntry>& corpus);

}  // namespace phigeo
