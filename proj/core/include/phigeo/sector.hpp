#pragma once

#include <optional>
#include <vector>

#include "phigeo/qdiff.hpp"
#include "phigeo/types.hpp"
#include "phigeo/word.hpp"

namespace phigeo {

// Where the line field came from; detection needs an analytic payload to
// evaluate directions off the sampled circles and to shoot test trajectories.
enum class FieldSource { differential, layout, immersion };

// A line field (directions mod pi) sampled on concentric circles of an
// annulus around a singular point.  Directions are stored in [0, pi) and must
// vary by less than pi/4 between neighbouring samples (Errc::resolution
// otherwise): that keeps the mod-pi unwrapping unambiguous.
struct LineField {
  FieldSource source = FieldSource::immersion;
  double r_in = 0.0, r_out = 0.0;
  std::vector<double> radii;                    // sampled circle radii
  int samples = 0;                              // per circle
  std::vector<std::vector<double>> direction;   // [circle][sample], in [0, pi)

  // payloads for detection
  std::optional<QuadraticDifferential> qd;  // differential source
  double slope = 0.0;                       // its trajectory slope t
  std::optional<SectorLayout> layout;       // layout source
};

// Directions of the slope-t trajectory foliation Arg(phi dz^2) = 2t:
// direction(z) = (2 t - Arg phi(z)) / 2 mod pi.
LineField sample_foliation(const QuadraticDifferential& qd, double t,
                           double r_in, double r_out, int circles,
                           int samples_per_circle);

// Directions of the model field of a sector layout: parabolic sectors are
// radial, hyperbolic sectors interpolate one half-turn of relative rotation
// across their sweep.
LineField sample_layout(const SectorLayout& layout, double r_in, double r_out,
                        int circles, int samples_per_circle);

// Wrap caller-supplied samples (e.g. principal-direction fields measured on
// a surface chart).  Validates the continuity requirement.
LineField make_line_field(std::vector<double> radii, int samples_per_circle,
                          std::vector<std::vector<double>> directions);

// Direction of the field payload at angle `angle` on a circle of radius r
// (analytic; not interpolated from samples).
double field_direction(const LineField& field, double r, double angle);

// Index of the singularity from the stored circle nearest r: the total
// mod-pi-unwrapped direction change around the circle divided by 2*pi,
// snapped to a half-integer.  A snap deviation above 0.05 raises
// Errc::resolution.
HalfInteger winding_index(const LineField& field, double r);

// Read off the sector word around the singularity: radial-alignment arcs
// give parabolic sectors, isolated radial crossings give separatrices, and
// the arcs in between are classified by shooting both orientations of the
// field (both escape outward for hyperbolic sectors).  Requires a
// differential or layout payload.
SectorWord detect_sectors(const LineField& field);

}  // namespace phigeo
