#pragma once

#include <optional>
#include <vector>

#include "phigeo/qdiff.hpp"
#include "phigeo/types.hpp"

namespace phigeo {

// A length-minimizing path of the singular-flat metric between two chart
// points.  Regular arcs keep Arg(phi dz^2) constant; paths through the
// singularity are a pair of radial segments meeting at the origin.
enum class PathKind { RegularArc, RadiusPair };

struct GeodesicPath {
  PathKind kind = PathKind::RegularArc;

  // Sampled chart geometry from the first endpoint to the second.  For a
  // RadiusPair the polyline passes through the exact origin.
  std::vector<Complex> points;

  // Flat-metric length of the path.
  double length = 0.0;

  // RegularArc only: the constant phase Arg(phi dz^2) along the arc, in
  // (-pi, pi].  Radial segments are regular arcs too; a RadiusPair is broken
  // at the origin and carries no single phase (the field stays 0 here).
  double phase = 0.0;

  // RadiusPair only: ray angles and flat radii of the two segments.
  double ray_angle_1 = 0.0, ray_angle_2 = 0.0;
  double flat_radius_1 = 0.0, flat_radius_2 = 0.0;

  // Set when the two endpoints sit exactly at the dichotomy threshold
  // (developed separation pi within 1e-9): both representations tie and the
  // radius pair is returned.
  bool tie = false;
};

// Flat-metric length of a chart polyline, by adaptive quadrature of the
// length density along each chord.
double phi_length(const QuadraticDifferential& qd,
                  const std::vector<Complex>& polyline);

// Integral curve of the constant-phase direction field
//   Arg(phi(z)) + 2 Arg(dz) = theta  (mod 2 pi)
// starting at `start` (which must be a regular point inside the chart).
// Of the two antipodal field directions the principal one (argument in
// (-pi/2, pi/2]) is taken at the start when orientation = +1, its opposite
// when orientation = -1; the choice is then continued by continuity.
//
// `step` caps the chart-space step size; steps additionally shrink near the
// singularity so every stored chord satisfies the phase equation at its
// midpoint within 1e-6.  Tracing stops at the chart boundary, after
// `max_arclen` of chart arc length, or on falling inside the capture radius
// 1e-4 * chart_radius, in which case the path is terminated with an exact 0.
std::vector<Complex> trace_trajectory(const QuadraticDifferential& qd,
                                      Complex start, double theta, double step,
                                      double max_arclen, int orientation = +1);

// Shortest flat-metric path between two chart points of a monomial
// differential.  Decided by developing to the flat cone: with Delta the cone
// angle between the developed endpoints (chart separation times (n+2)/2),
// Delta < pi gives the straight regular arc, Delta >= pi the radius pair
// through the singularity; Delta = pi within 1e-9 returns the radius pair
// with the tie flag set.
GeodesicPath connect(const QuadraticDifferential& qd, Complex z1, Complex z2);

// First integrals of the two trajectory families of a monomial order-2
// differential at phase 0, evaluated in the normalized frame zeta = a^{1/4} z
// (so that phi dz^2 = zeta^2 dzeta^2): straight-line family v = C u and
// hyperbola family v = C / u, with zeta = u + i v.  A component is absent
// where undefined (v/u on the axis u = 0, both at the origin).
struct LiouvilleInvariants {
  std::optional<double> node_constant;    // v / u
  std::optional<double> saddle_constant;  // v * u
};

LiouvilleInvariants liouville_invariants(const QuadraticDifferential& qd,
                                         Complex z);

}  // namespace phigeo
