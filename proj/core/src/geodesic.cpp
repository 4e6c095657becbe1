#include "phigeo/geodesic.hpp"

#include <algorithm>
#include <cmath>

namespace phigeo {

namespace {

double re_dot(Complex a, Complex b) {
  return a.real() * b.real() + a.imag() * b.imag();
}

// Adaptive Simpson quadrature of the length density along a straight chord.
double simpson_rec(const QuadraticDifferential& qd, Complex a, Complex b,
                   double fa, double fm, double fb, double whole, double eps,
                   int depth) {
  Complex m = 0.5 * (a + b);
  Complex lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = metric_density(qd, lm), frm = metric_density(qd, rm);
  double hl = std::abs(m - a), hr = std::abs(b - m);
  double left = hl / 6.0 * (fa + 4.0 * flm + fm);
  double right = hr / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps)
    return left + right + delta / 15.0;
  return simpson_rec(qd, a, m, fa, flm, fm, left, eps * 0.5, depth - 1) +
         simpson_rec(qd, m, b, fm, frm, fb, right, eps * 0.5, depth - 1);
}

double chord_phi_length(const QuadraticDifferential& qd, Complex a, Complex b) {
  if (a == b) return 0.0;
  double fa = metric_density(qd, a);
  double fb = metric_density(qd, b);
  Complex m = 0.5 * (a + b);
  double fm = metric_density(qd, m);
  double whole = std::abs(b - a) / 6.0 * (fa + 4.0 * fm + fb);
  double eps = 1e-13 * whole + 1e-300;
  return simpson_rec(qd, a, b, fa, fm, fb, whole, eps, 42);
}

// Flat radius of |z| = r: distance from the singularity in the developed cone.
double flat_radius(const QuadraticDifferential& qd, double r) {
  int n = qd.order();
  return 2.0 / (n + 2) * std::sqrt(std::abs(qd.leading_coefficient())) *
         std::pow(r, 0.5 * (n + 2));
}

// Midpoint phase deviation of a chord against the target phase.
double chord_phase_dev(const QuadraticDifferential& qd, Complex a, Complex b,
                       double theta) {
  Complex mid = 0.5 * (a + b);
  return std::abs(wrap_to_pi(std::arg(evaluate_raw(qd, mid)) +
                             2.0 * std::arg(b - a) - theta));
}

constexpr double kPhaseTol = 1e-6;
constexpr double kCaptureFactor = 1e-4;

}  // namespace

double phi_length(const QuadraticDifferential& qd,
                  const std::vector<Complex>& polyline) {
  double total = 0.0;
  for (size_t i = 1; i < polyline.size(); ++i)
    total += chord_phi_length(qd, polyline[i - 1], polyline[i]);
  return total;
}

std::vector<Complex> trace_trajectory(const QuadraticDifferential& qd,
                                      Complex start, double theta, double step,
                                      double max_arclen, int orientation) {
  const double R = qd.chart_radius();
  const double r_cap = kCaptureFactor * R;
  if (std::abs(start) <= r_cap)
    throw Error(Errc::singular_point,
                "trace must start outside the capture radius of the singularity");
  if (std::abs(start) > R * (1.0 + 1e-12))
    throw Error(Errc::domain, "start point outside the chart disk");
  if (!(step > 0.0) || !(max_arclen > 0.0))
    throw Error(Errc::parameter, "step and max_arclen must be positive");
  if (orientation != 1 && orientation != -1)
    throw Error(Errc::parameter, "orientation must be +1 or -1");

  const double theta_w = wrap_to_pi(theta);

  auto dir_principal = [&](Complex z) {
    return std::polar(1.0, 0.5 * wrap_to_pi(theta_w - std::arg(evaluate_raw(qd, z))));
  };
  auto dir_at = [&](Complex z, Complex ref) {
    Complex d = dir_principal(z);
    return re_dot(d, ref) < 0.0 ? -d : d;
  };
  // One classical RK4 step of z' = (unit field direction).
  auto rk4 = [&](Complex z, Complex ref, double h) {
    Complex k1 = dir_at(z, ref);
    Complex k2 = dir_at(z + 0.5 * h * k1, k1);
    Complex k3 = dir_at(z + 0.5 * h * k2, k2);
    Complex k4 = dir_at(z + h * k3, k3);
    Complex zn = z + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    return std::pair<Complex, Complex>(zn, dir_at(zn, k4));
  };
  // Direction-field rotation rate |d(arg phi)/dz| / 2; bounds the chord size
  // needed to hold the midpoint phase deviation under kPhaseTol.
  auto curvature_bound = [&](Complex z) {
    double mag = std::abs(evaluate_raw(qd, z));
    if (mag <= 0.0) return 1e300;
    return 0.5 * std::abs(derivative(qd, z)) / mag;
  };

  // `shrink` tightens sampling on verify-and-refine retries.
  auto run = [&](double shrink) {
    std::vector<Complex> pts{start};
    Complex z = start;
    Complex d = orientation > 0 ? dir_principal(start) : -dir_principal(start);
    double arclen = 0.0;
    size_t guard = 0;
    while (arclen < max_arclen * (1.0 - 1e-15)) {
      if (++guard > 4'000'000)
        throw Error(Errc::accuracy, "step budget exhausted during trace");
      double h = std::min(step, max_arclen - arclen);
      h = std::min(h, shrink * 1e-3 / std::max(curvature_bound(z), 1e-12 / R));
      h = std::max(h, 1e-14 * R);
      // step-doubling error control
      Complex zn, dn;
      int halvings = 0;
      for (;; ++halvings) {
        auto full = rk4(z, d, h);
        auto half = rk4(z, d, 0.5 * h);
        auto two = rk4(half.first, half.second, 0.5 * h);
        double err = std::abs(full.first - two.first) / 15.0;
        if (err <= 1e-12 * R + 1e-10 * h || halvings >= 40) {
          zn = two.first + (two.first - full.first) / 15.0;
          dn = dir_at(zn, two.second);
          if (halvings >= 40)
            throw Error(Errc::accuracy, "step size collapsed during trace");
          break;
        }
        h *= 0.5;
      }
      if (std::abs(zn) >= R) {
        // clip the final step to the chart boundary by bisection on step size
        double lo = 0.0, hi = h;
        Complex zb = zn;
        for (int it = 0; it < 80 && hi - lo > 1e-16 * R; ++it) {
          double mid = 0.5 * (lo + hi);
          Complex zm = rk4(z, d, mid).first;
          if (std::abs(zm) >= R) {
            hi = mid;
            zb = zm;
          } else {
            lo = mid;
          }
        }
        pts.push_back(zb);
        break;
      }
      if (std::abs(zn) <= r_cap) {
        pts.push_back(Complex(0, 0));  // captured by the singularity
        break;
      }
      arclen += std::abs(zn - z);
      pts.push_back(zn);
      z = zn;
      d = dn;
    }
    return pts;
  };

  double shrink = 1.0;
  for (int attempt = 0; attempt < 4; ++attempt) {
    auto pts = run(shrink);
    bool ok = true;
    for (size_t i = 1; i + 0 < pts.size() && ok; ++i) {
      Complex a = pts[i - 1], b = pts[i];
      if (a == Complex(0, 0) || b == Complex(0, 0)) continue;  // snapped end
      if (chord_phase_dev(qd, a, b, theta_w) >= kPhaseTol) ok = false;
    }
    if (ok) return pts;
    shrink *= 0.25;
  }
  throw Error(Errc::accuracy,
              "could not hold the phase tolerance along the trace");
}

namespace {

// Sample one straight radius from za to zb (collinear with the origin),
// endpoints exact.
void append_radius(std::vector<Complex>& out, Complex za, Complex zb, int m) {
  for (int k = 1; k < m; ++k) {
    double t = static_cast<double>(k) / m;
    out.push_back(za + t * (zb - za));
  }
  out.push_back(zb);
}

}  // namespace

GeodesicPath connect(const QuadraticDifferential& qd, Complex z1, Complex z2) {
  if (!qd.is_monomial())
    throw Error(Errc::unsupported_form, "connect requires a monomial coefficient");
  const double R = qd.chart_radius();
  if (std::abs(z1) > R * (1 + 1e-12) || std::abs(z2) > R * (1 + 1e-12))
    throw Error(Errc::domain, "endpoint outside the chart disk");
  const int n = qd.order();
  const Complex a = qd.leading_coefficient();

  GeodesicPath path;
  if (z1 == z2) {  // degenerate zero-length path
    path.kind = PathKind::RegularArc;
    path.points = {z1};
    path.length = 0.0;
    return path;
  }

  auto radial_phase = [&](double ray_angle) {
    return wrap_to_pi(std::arg(a) + (n + 2) * ray_angle);
  };

  if (z1 == Complex(0, 0) || z2 == Complex(0, 0)) {
    // single radius: itself a regular arc
    Complex zn = (z1 == Complex(0, 0)) ? z2 : z1;
    path.kind = PathKind::RegularArc;
    path.points.push_back(z1);
    append_radius(path.points, z1, z2, 32);
    path.length = flat_radius(qd, std::abs(zn));
    path.phase = radial_phase(std::arg(zn));
    return path;
  }

  const double th1 = std::arg(z1), th2 = std::arg(z2);
  const double d_ccw = wrap_two_pi(th2 - th1);
  const double d_cw = kTwoPi - d_ccw;
  const double sigma = (d_ccw <= d_cw) ? +1.0 : -1.0;
  const double d_min = std::min(d_ccw, d_cw);
  const double delta = 0.5 * (n + 2) * d_min;  // separation in the cone

  const double rho1 = flat_radius(qd, std::abs(z1));
  const double rho2 = flat_radius(qd, std::abs(z2));

  if (delta >= kPi - 1e-9) {
    // the straight development would leave the cone sector: go through 0
    path.kind = PathKind::RadiusPair;
    path.tie = std::abs(delta - kPi) <= 1e-9;
    path.ray_angle_1 = th1;
    path.ray_angle_2 = th2;
    path.flat_radius_1 = rho1;
    path.flat_radius_2 = rho2;
    path.length = rho1 + rho2;
    path.points.push_back(z1);
    append_radius(path.points, z1, Complex(0, 0), 32);
    append_radius(path.points, Complex(0, 0), z2, 32);
    return path;
  }

  // Develop to the cone: local frame with the image of z1 on the positive
  // real axis and the image of z2 at angle sigma * delta.
  path.kind = PathKind::RegularArc;
  const Complex q1(rho1, 0.0);
  const Complex q2 = std::polar(rho2, sigma * delta);
  path.length = std::abs(q2 - q1);
  // natural-frame direction of the segment fixes the constant phase
  const double chi1 = std::arg(std::sqrt(a)) + 0.5 * (n + 2) * th1;
  path.phase = wrap_to_pi(2.0 * (chi1 + std::arg(q2 - q1)));

  const double scale = 2.0 / (n + 2) * std::sqrt(std::abs(a));
  auto pull_back = [&](double tau) {
    Complex q = q1 + tau * (q2 - q1);
    double psi = std::arg(q);  // stays within sigma * [0, delta]
    double theta = th1 + 2.0 / (n + 2) * psi;
    double r = std::pow(std::abs(q) / scale, 2.0 / (n + 2));
    return std::polar(r, theta);
  };

  // Adaptive subdivision: chords stay short relative to the local distance
  // from the singularity so the phase equation holds at chord midpoints.
  auto build = [&](double cfac) {
    std::vector<Complex> pts;
    pts.push_back(z1);
    struct Seg {
      double ta, tb;
      Complex za, zb;
    };
    std::vector<Seg> stack;
    const int kInitial = 32;
    for (int k = kInitial; k >= 1; --k) {
      double ta = (k - 1) / static_cast<double>(kInitial);
      double tb = k / static_cast<double>(kInitial);
      Complex za = (k == 1) ? z1 : pull_back(ta);
      Complex zb = (k == kInitial) ? z2 : pull_back(tb);
      stack.push_back({ta, tb, za, zb});
    }
    while (!stack.empty()) {
      Seg s = stack.back();
      stack.pop_back();
      double limit = cfac * std::min(std::abs(s.za), std::abs(s.zb));
      if (std::abs(s.zb - s.za) > limit && s.tb - s.ta > 1e-13) {
        double tm = 0.5 * (s.ta + s.tb);
        Complex zm = pull_back(tm);
        stack.push_back({tm, s.tb, zm, s.zb});
        stack.push_back({s.ta, tm, s.za, zm});
        continue;
      }
      pts.push_back(s.zb);
      if (pts.size() > 3'000'000)
        throw Error(Errc::accuracy, "sampling budget exhausted in connect");
    }
    return pts;
  };

  double cfac = 2e-4 / std::sqrt(static_cast<double>(n + 2));
  for (int attempt = 0; attempt < 4; ++attempt) {
    auto pts = build(cfac);
    bool ok = true;
    for (size_t i = 1; i < pts.size() && ok; ++i)
      if (chord_phase_dev(qd, pts[i - 1], pts[i], path.phase) >= kPhaseTol)
        ok = false;
    if (ok) {
      path.points = std::move(pts);
      return path;
    }
    cfac *= 0.25;
  }
  throw Error(Errc::accuracy, "could not hold the phase tolerance in connect");
}

LiouvilleInvariants liouville_invariants(const QuadraticDifferential& qd,
                                         Complex z) {
  if (!qd.is_monomial() || qd.order() != 2)
    throw Error(Errc::unsupported_form,
                "invariants are defined for monomial order-2 coefficients");
  if (std::abs(z) > qd.chart_radius() * (1 + 1e-12))
    throw Error(Errc::domain, "point outside the chart disk");

  LiouvilleInvariants out;
  if (z == Complex(0, 0)) return out;  // both families degenerate at 0

  const Complex a = qd.leading_coefficient();
  const Complex c = std::polar(std::pow(std::abs(a), 0.25), std::arg(a) / 4.0);
  const Complex zeta = c * z;
  const double u = zeta.real(), v = zeta.imag();
  if (std::abs(u) > 1e-14 * std::abs(zeta)) out.node_constant = v / u;
  out.saddle_constant = u * v;
  return out;
}

}  // namespace phigeo
