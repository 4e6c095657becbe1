#include "phigeo/sector.hpp"

#include <algorithm>
#include <cmath>

#include "phigeo/geodesic.hpp"

namespace phigeo {

namespace {

constexpr double kAlignTol = 1e-9;   // |relative angle| below this is radial
constexpr double kSnapTol = 0.05;    // max winding deviation from a half-integer
constexpr double kJumpTol = kPi / 4; // continuity requirement between samples

void validate_continuity(const LineField& f) {
  for (const auto& circle : f.direction) {
    const size_t m = circle.size();
    for (size_t k = 0; k < m; ++k) {
      double d = line_angle_diff(circle[(k + 1) % m], circle[k]);
      if (std::abs(d) >= kJumpTol)
        throw Error(Errc::resolution,
                    "direction jump between neighbouring samples exceeds pi/4; "
                    "increase samples_per_circle");
    }
  }
}

double layout_direction(const SectorLayout& lay, double angle) {
  const double th = wrap_two_pi(angle);
  const SectorDescriptor* best = nullptr;
  double best_excess = 1e300;
  for (const auto& s : lay.sectors) {
    double off = wrap_two_pi(th - s.start_angle);
    if (off < s.sweep) {
      if (s.type == Symbol::P) return wrap_line(th);
      // hyperbolic: one half-turn of relative rotation across the sweep
      return wrap_line(th - kPi * off / s.sweep);
    }
    double excess = off - s.sweep;
    if (excess < best_excess) {
      best_excess = excess;
      best = &s;
    }
  }
  // floating-point dust at a shared boundary: use the closest sector
  if (best) {
    if (best->type == Symbol::P) return wrap_line(th);
    return wrap_line(th - kPi);
  }
  throw Error(Errc::parameter, "layout has no sectors");
}

double differential_direction(const QuadraticDifferential& qd, double t,
                              Complex z) {
  return wrap_line(0.5 * (2.0 * t - std::arg(evaluate_raw(qd, z))));
}

std::vector<double> circle_radii(double r_in, double r_out, int circles) {
  std::vector<double> radii;
  if (circles == 1) {
    radii.push_back(r_in);
    return radii;
  }
  // geometric spacing: resolution follows the scale of the singularity
  double q = std::pow(r_out / r_in, 1.0 / (circles - 1));
  double r = r_in;
  for (int i = 0; i < circles; ++i, r *= q) radii.push_back(r);
  radii.back() = r_out;
  return radii;
}

void validate_annulus(double r_in, double r_out, int circles, int samples) {
  if (!(r_in > 0.0) || !(r_out > r_in))
    throw Error(Errc::parameter, "need 0 < r_in < r_out");
  if (circles < 1 || samples < 16)
    throw Error(Errc::parameter, "need circles >= 1 and samples >= 16");
}

}  // namespace

LineField sample_foliation(const QuadraticDifferential& qd, double t,
                           double r_in, double r_out, int circles,
                           int samples_per_circle) {
  validate_annulus(r_in, r_out, circles, samples_per_circle);
  if (r_out > qd.chart_radius() * (1 + 1e-12))
    throw Error(Errc::domain, "annulus leaves the chart disk");
  LineField f;
  f.source = FieldSource::differential;
  f.qd = qd;
  f.slope = t;
  f.r_in = r_in;
  f.r_out = r_out;
  f.samples = samples_per_circle;
  f.radii = circle_radii(r_in, r_out, circles);
  for (double r : f.radii) {
    std::vector<double> row(samples_per_circle);
    for (int k = 0; k < samples_per_circle; ++k) {
      double th = kTwoPi * k / samples_per_circle;
      row[k] = differential_direction(qd, t, std::polar(r, th));
    }
    f.direction.push_back(std::move(row));
  }
  validate_continuity(f);
  return f;
}

LineField sample_layout(const SectorLayout& layout, double r_in, double r_out,
                        int circles, int samples_per_circle) {
  validate_annulus(r_in, r_out, circles, samples_per_circle);
  LineField f;
  f.source = FieldSource::layout;
  f.layout = layout;
  f.r_in = r_in;
  f.r_out = r_out;
  f.samples = samples_per_circle;
  f.radii = circle_radii(r_in, r_out, circles);
  for (size_t i = 0; i < f.radii.size(); ++i) {
    std::vector<double> row(samples_per_circle);
    for (int k = 0; k < samples_per_circle; ++k)
      row[k] = layout_direction(layout, kTwoPi * k / samples_per_circle);
    f.direction.push_back(std::move(row));
  }
  validate_continuity(f);
  return f;
}

LineField make_line_field(std::vector<double> radii, int samples_per_circle,
                          std::vector<std::vector<double>> directions) {
  if (radii.empty() || directions.size() != radii.size())
    throw Error(Errc::parameter, "one direction row per radius required");
  for (auto& row : directions) {
    if (static_cast<int>(row.size()) != samples_per_circle)
      throw Error(Errc::parameter, "direction row size mismatch");
    for (double& d : row) d = wrap_line(d);
  }
  LineField f;
  f.source = FieldSource::immersion;
  f.radii = radii;
  f.r_in = radii.front();
  f.r_out = radii.back();
  f.samples = samples_per_circle;
  f.direction = std::move(directions);
  validate_continuity(f);
  return f;
}

double field_direction(const LineField& field, double r, double angle) {
  switch (field.source) {
    case FieldSource::differential:
      return differential_direction(*field.qd, field.slope,
                                    std::polar(r, angle));
    case FieldSource::layout:
      return layout_direction(*field.layout, angle);
    case FieldSource::immersion:
      throw Error(Errc::precondition,
                  "sampled immersion fields have no analytic direction");
  }
  throw Error(Errc::parameter, "bad field source");
}

HalfInteger winding_index(const LineField& field, double r) {
  if (field.radii.empty()) throw Error(Errc::parameter, "empty field");
  size_t best = 0;
  for (size_t i = 1; i < field.radii.size(); ++i)
    if (std::abs(field.radii[i] - r) < std::abs(field.radii[best] - r))
      best = i;
  const auto& circle = field.direction[best];
  const size_t m = circle.size();
  double total = 0.0;
  for (size_t k = 0; k < m; ++k)
    total += line_angle_diff(circle[(k + 1) % m], circle[k]);
  double dev = 0.0;
  HalfInteger idx = HalfInteger::nearest(total / kTwoPi, &dev);
  if (dev > kSnapTol)
    throw Error(Errc::resolution,
                "winding " + format_double(total / kTwoPi) +
                    " does not snap to a half-integer");
  return idx;
}

namespace {

enum class ShotOutcome { captured, exited, inconclusive };

// Shoot the slope-t trajectory of a differential from (r, theta).
ShotOutcome shoot_differential(const QuadraticDifferential& qd, double t,
                               double r, double theta, int orientation) {
  const double R = qd.chart_radius();
  try {
    auto pts = trace_trajectory(qd, std::polar(r, theta), wrap_to_pi(2.0 * t),
                                R / 64.0, 8.0 * R, orientation);
    if (pts.back() == Complex(0, 0)) return ShotOutcome::captured;
    if (std::abs(pts.back()) >= R * (1.0 - 1e-9)) return ShotOutcome::exited;
  } catch (const Error&) {
    return ShotOutcome::inconclusive;
  }
  return ShotOutcome::inconclusive;
}

// Shoot the model field of a layout (scale-invariant: directions depend on
// the angle only).
ShotOutcome shoot_layout(const SectorLayout& lay, double r0, double theta,
                         double r_exit, int orientation) {
  Complex z = std::polar(r0, theta);
  const double r_cap = 1e-3 * r0;
  Complex ref = std::polar(1.0, layout_direction(lay, theta));
  if (orientation < 0) ref = -ref;
  auto dir_at = [&](Complex p, Complex prev) {
    Complex d = std::polar(1.0, layout_direction(lay, std::arg(p)));
    if (d.real() * prev.real() + d.imag() * prev.imag() < 0) d = -d;
    return d;
  };
  for (int step = 0; step < 400000; ++step) {
    double h = std::clamp(0.02 * std::abs(z), 1e-7 * r0, 0.05 * r_exit);
    Complex k1 = dir_at(z, ref);
    Complex k2 = dir_at(z + 0.5 * h * k1, k1);
    Complex k3 = dir_at(z + 0.5 * h * k2, k2);
    Complex k4 = dir_at(z + h * k3, k3);
    z += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    ref = dir_at(z, k4);
    if (std::abs(z) <= r_cap) return ShotOutcome::captured;
    if (std::abs(z) >= r_exit) return ShotOutcome::exited;
  }
  return ShotOutcome::inconclusive;
}

}  // namespace

SectorWord detect_sectors(const LineField& field) {
  if (field.source == FieldSource::immersion)
    throw Error(Errc::precondition,
                "detection needs a differential or layout payload");
  const int n = field.qd ? field.qd->order() : field.layout->order;

  auto g = [&](double th) {
    return line_angle_diff(field_direction(field, field.r_in, th), th);
  };

  const int M = 8192;
  std::vector<double> gv(M);
  std::vector<char> aligned(M);
  int aligned_count = 0;
  for (int k = 0; k < M; ++k) {
    gv[k] = g(kTwoPi * k / M);
    aligned[k] = std::abs(gv[k]) < kAlignTol;
    aligned_count += aligned[k];
  }

  if (aligned_count == M)  // the whole circle is radial: one parabolic sector
    return SectorWord({Symbol::P}, n, {kTwoPi});

  // --- locate boundaries -------------------------------------------------
  struct PArc {
    double lo, hi;
  };
  std::vector<PArc> parcs;
  std::vector<double> separatrices;

  auto angle_of = [&](int k) { return kTwoPi * ((k % M + M) % M) / M; };

  // bisection of the alignment edge between an unaligned and an aligned angle
  auto refine_edge = [&](double th_un, double th_al) {
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (th_un + th_al);
      if (std::abs(g(mid)) < kAlignTol)
        th_al = mid;
      else
        th_un = mid;
    }
    return th_al;
  };
  // bisection of a +/- sign change of g
  auto refine_crossing = [&](double ta, double tb) {
    double ga = g(ta);
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (ta + tb);
      double gm = g(mid);
      if ((gm > 0) == (ga > 0)) {
        ta = mid;
        ga = gm;
      } else {
        tb = mid;
      }
    }
    return 0.5 * (ta + tb);
  };

  if (aligned_count > 0) {
    // maximal cyclic runs of aligned samples
    int start = 0;
    while (aligned[start]) ++start;  // start on an unaligned sample
    int k = start;
    do {
      if (aligned[k % M]) {
        int run_begin = k;
        while (aligned[k % M]) ++k;
        int run_len = k - run_begin;
        double lo_un = angle_of(run_begin - 1);
        double lo_al = lo_un + kTwoPi / M;
        double hi_al = lo_un + run_len * kTwoPi / M;
        double hi_un = hi_al + kTwoPi / M;
        if (run_len >= 3) {
          parcs.push_back({refine_edge(lo_un, lo_al), refine_edge(hi_un, hi_al)});
        } else {
          // grazing contact with 0: treat as a separatrix crossing
          double ga = gv[(run_begin - 1 + M) % M];
          double gb = gv[k % M];
          if (ga > 0 && gb < 0)
            separatrices.push_back(refine_crossing(lo_un, hi_un));
          else
            throw Error(Errc::resolution,
                        "unresolved radial contact; sector too small for the "
                        "scan resolution");
        }
      } else {
        ++k;
      }
    } while (k % M != start);
  }

  // sign changes of g between consecutive unaligned samples (away from the
  // mod-pi wrap at |g| ~ pi/2)
  for (int k = 0; k < M; ++k) {
    int k2 = (k + 1) % M;
    if (aligned[k] || aligned[k2]) continue;
    if (gv[k] > 0 && gv[k2] < 0 && std::abs(gv[k]) < kJumpTol &&
        std::abs(gv[k2]) < kJumpTol)
      separatrices.push_back(
          wrap_two_pi(refine_crossing(angle_of(k), angle_of(k2))));
  }

  // --- assemble the cyclic sector list ------------------------------------
  struct Boundary {
    double angle;
    int parc = -1;  // index of the parc this angle opens, if any
  };
  std::vector<Boundary> bounds;
  for (size_t i = 0; i < parcs.size(); ++i) {
    parcs[i].lo = wrap_two_pi(parcs[i].lo);
    parcs[i].hi = wrap_two_pi(parcs[i].hi);
    bounds.push_back({parcs[i].lo, static_cast<int>(i)});
    bounds.push_back({parcs[i].hi, -1});
  }
  for (double s : separatrices) bounds.push_back({wrap_two_pi(s), -1});
  if (bounds.empty())
    throw Error(Errc::resolution, "no sector boundaries found");
  std::sort(bounds.begin(), bounds.end(),
            [](const Boundary& a, const Boundary& b) { return a.angle < b.angle; });

  const double h_sweep = kTwoPi / (n + 2);
  std::vector<Symbol> ccw_symbols;
  std::vector<double> ccw_weights;

  const double r_shoot = std::sqrt(field.r_in * field.r_out);
  auto classify_h = [&](double th_mid) {
    ShotOutcome a, b;
    if (field.qd) {
      a = shoot_differential(*field.qd, field.slope, r_shoot, th_mid, +1);
      b = shoot_differential(*field.qd, field.slope, r_shoot, th_mid, -1);
    } else {
      a = shoot_layout(*field.layout, r_shoot, th_mid, 4.0 * field.r_out, +1);
      b = shoot_layout(*field.layout, r_shoot, th_mid, 4.0 * field.r_out, -1);
    }
    if (a == ShotOutcome::exited && b == ShotOutcome::exited) return;
    throw Error(Errc::resolution,
                "sector at angle " + format_double(th_mid) +
                    " is neither radial nor doubly escaping");
  };

  for (size_t i = 0; i < bounds.size(); ++i) {
    const Boundary& cur = bounds[i];
    const Boundary& nxt = bounds[(i + 1) % bounds.size()];
    double sweep = wrap_two_pi(nxt.angle - cur.angle);
    if (sweep == 0.0) sweep = (bounds.size() == 1) ? kTwoPi : 0.0;
    if (sweep <= 1e-12) continue;  // coincident boundaries
    if (cur.parc >= 0) {
      ccw_symbols.push_back(Symbol::P);
      ccw_weights.push_back(sweep);
    } else {
      classify_h(cur.angle + 0.5 * sweep);
      if (std::abs(sweep - h_sweep) > 0.05 * h_sweep)
        throw Error(Errc::resolution,
                    "hyperbolic sweep " + format_double(sweep) +
                        " deviates from the order-" + std::to_string(n) +
                        " quantum " + format_double(h_sweep));
      ccw_symbols.push_back(Symbol::H);
    }
  }

  // words are read clockwise: reverse the geometric (counterclockwise) order
  std::reverse(ccw_symbols.begin(), ccw_symbols.end());
  std::reverse(ccw_weights.begin(), ccw_weights.end());
  return SectorWord(std::move(ccw_symbols), n, std::move(ccw_weights));
}

}  // namespace phigeo
