#include <doctest.h>

#include <algorithm>
#include <random>

#include "phigeo/geodesic.hpp"
#include "test_support.hpp"

using namespace phigeo;

TEST_CASE("flat length of reference segments") {
  QuadraticDifferential flat(1.0, 0);
  CHECK(phi_length(flat, {Complex(0, 0), Complex(1, 0)}) ==
        doctest::Approx(1.0).epsilon(1e-10));

  QuadraticDifferential q2(1.0, 2);
  CHECK(phi_length(q2, {Complex(0, 0), Complex(1, 0)}) ==
        doctest::Approx(0.5).epsilon(1e-10));

  QuadraticDifferential q1(1.0, 1);
  CHECK(phi_length(q1, {Complex(0, 0), Complex(1, 0)}) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("trivial-chart trajectories are straight lines") {
  QuadraticDifferential flat(1.0, 0, {}, 2.0);
  auto pts = trace_trajectory(flat, Complex(0, 1), 0.0, 1e-3, 10.0);
  REQUIRE(pts.size() > 10);
  for (const Complex& z : pts) CHECK(std::abs(z.imag() - 1.0) < 1e-9);
  CHECK(pts.back().real() > pts.front().real());
  // stopped at the chart circle
  CHECK(std::abs(std::abs(pts.back()) - 2.0) < 2e-3);
}

TEST_CASE("order-two trajectories are the rectangular-hyperbola family") {
  QuadraticDifferential q2(1.0, 2, {}, 3.0);
  auto pts = trace_trajectory(q2, Complex(1, 1), 0.0, 1e-3, 8.0);
  REQUIRE(pts.size() > 100);
  double arclen = 0;
  for (size_t i = 1; i < pts.size(); ++i) arclen += std::abs(pts[i] - pts[i - 1]);
  CHECK(arclen > 1.0);
  for (const Complex& z : pts) CHECK(std::abs(z.real() * z.imag() - 1.0) < 1e-6);
}

TEST_CASE("radially started trajectories stay on their ray") {
  QuadraticDifferential q2(1.0, 2, {}, 3.0);
  Complex z0(0.3, 0.6);
  double theta = phase(q2, z0, z0 / std::abs(z0));
  auto pts = trace_trajectory(q2, z0, theta, 1e-3, 5.0);
  REQUIRE(pts.size() > 10);
  const double slope = z0.imag() / z0.real();
  for (const Complex& z : pts) {
    if (std::abs(z) < 1e-3) continue;  // terminal capture point
    CHECK(std::abs(z.imag() / z.real() - slope) < 1e-6);
  }
}

TEST_CASE("first integrals separate the two order-two families") {
  QuadraticDifferential q2(1.0, 2, {}, 3.0);

  auto hyper = trace_trajectory(q2, Complex(1, 1), 0.0, 1e-3, 6.0);
  double lo = 1e300, hi = -1e300;
  for (const Complex& z : hyper) {
    auto inv = liouville_invariants(q2, z);
    REQUIRE(inv.saddle_constant.has_value());
    lo = std::min(lo, *inv.saddle_constant);
    hi = std::max(hi, *inv.saddle_constant);
  }
  CHECK(hi - lo < 1e-6);

  Complex z0(0.3, 0.6);
  auto radial = trace_trajectory(q2, z0, phase(q2, z0, z0 / std::abs(z0)),
                                 1e-3, 5.0);
  lo = 1e300, hi = -1e300;
  for (const Complex& z : radial) {
    if (std::abs(z) < 1e-9) continue;
    auto inv = liouville_invariants(q2, z);
    REQUIRE(inv.node_constant.has_value());
    lo = std::min(lo, *inv.node_constant);
    hi = std::max(hi, *inv.node_constant);
  }
  CHECK(hi - lo < 1e-6);

  // a scaled leading coefficient only rescales the normalized frame
  QuadraticDifferential q4(4.0, 2, {}, 3.0);
  auto pts = trace_trajectory(q4, Complex(1, 1), 0.0, 1e-3, 6.0);
  lo = 1e300, hi = -1e300;
  for (const Complex& z : pts) {
    auto inv = liouville_invariants(q4, z);
    REQUIRE(inv.saddle_constant.has_value());
    lo = std::min(lo, *inv.saddle_constant);
    hi = std::max(hi, *inv.saddle_constant);
  }
  CHECK(hi - lo < 1e-6);

  auto origin = liouville_invariants(q2, Complex(0, 0));
  CHECK_FALSE(origin.node_constant.has_value());
  CHECK_FALSE(origin.saddle_constant.has_value());
  auto axis = liouville_invariants(q2, Complex(0, 0.5));
  CHECK_FALSE(axis.node_constant.has_value());
  CHECK(axis.saddle_constant.has_value());
}

TEST_CASE("phase is conserved along traced chords") {
  QuadraticDifferential q3(1.0, 3, {}, 1.5);
  const double theta = 0.7;
  auto pts = trace_trajectory(q3, Complex(0.6, 0.3), theta, 1e-3, 3.0);
  REQUIRE(pts.size() > 50);
  for (size_t i = 1; i < pts.size(); i += 7) {
    Complex mid = 0.5 * (pts[i] + pts[i - 1]);
    Complex dir = pts[i] - pts[i - 1];
    if (std::abs(dir) == 0.0 || std::abs(mid) < 1e-3) continue;
    double ph = phase(q3, mid, dir / std::abs(dir));
    CHECK(std::abs(wrap_to_pi(ph - theta)) < 1e-6);
  }
}

TEST_CASE("capture near the singularity terminates with an exact origin") {
  QuadraticDifferential q2(1.0, 2, {}, 1.0);
  // radial trajectory pointing at the zero
  auto pts = trace_trajectory(q2, Complex(0.5, 0), 0.0, 1e-3, 3.0, -1);
  REQUIRE(pts.size() > 2);
  CHECK(pts.back() == Complex(0, 0));
}

TEST_CASE("trace rejects starts at or outside its domain") {
  QuadraticDifferential q2(1.0, 2, {}, 1.0);
  CHECK_THROWS_AS(trace_trajectory(q2, Complex(0, 0), 0.0, 1e-3, 1.0), Error);
  CHECK_THROWS_AS(trace_trajectory(q2, Complex(2, 0), 0.0, 1e-3, 1.0), Error);
}

TEST_CASE("connection below the angular threshold is the straight arc") {
  QuadraticDifferential q2(1.0, 2, {}, 1.0);
  const double r = 0.8;
  GeodesicPath p = connect(q2, r, std::polar(r, kPi / 4));
  CHECK(p.kind == PathKind::RegularArc);
  CHECK_FALSE(p.tie);
  // developed endpoints r^2/2 and (r^2/2) i
  const double w = r * r / 2;
  CHECK(p.length == doctest::Approx(w * std::sqrt(2.0)).epsilon(1e-9));
  REQUIRE(p.points.size() >= 2);
  CHECK(std::abs(p.points.front() - Complex(r, 0)) < 1e-12);
  CHECK(std::abs(p.points.back() - std::polar(r, kPi / 4)) < 1e-12);
}

TEST_CASE("connection above the angular threshold breaks at the singularity") {
  QuadraticDifferential q2(1.0, 2, {}, 1.0);
  const double r = 0.8;
  GeodesicPath p = connect(q2, r, -r);
  CHECK(p.kind == PathKind::RadiusPair);
  CHECK(p.length == doctest::Approx(r * r).epsilon(1e-12));
  CHECK(p.flat_radius_1 == doctest::Approx(r * r / 2));
  CHECK(p.flat_radius_2 == doctest::Approx(r * r / 2));
  CHECK(std::abs(wrap_to_pi(p.ray_angle_1)) < 1e-12);
  CHECK(std::abs(wrap_to_pi(p.ray_angle_2 - kPi)) < 1e-12);
  bool has_origin = std::any_of(p.points.begin(), p.points.end(),
                                [](Complex z) { return z == Complex(0, 0); });
  CHECK(has_origin);
}

TEST_CASE("the threshold itself ties and is flagged") {
  QuadraticDifferential q2(1.0, 2, {}, 1.0);
  const double r = 0.7;
  GeodesicPath p = connect(q2, r, std::polar(r, kPi / 2));
  CHECK(p.kind == PathKind::RadiusPair);
  CHECK(p.tie);
  // both representations have the same length at the tie
  CHECK(p.length == doctest::Approx(r * r).epsilon(1e-12));
}

TEST_CASE("degenerate connection is a zero-length path") {
  QuadraticDifferential q1(1.0, 1, {}, 1.0);
  GeodesicPath p = connect(q1, Complex(0.3, 0.1), Complex(0.3, 0.1));
  CHECK(p.length == 0.0);
  REQUIRE(!p.points.empty());
  CHECK(p.points.front() == Complex(0.3, 0.1));
}

TEST_CASE("the arc/pair decision flips exactly at the developed half-turn") {
  std::mt19937_64 rng(42);
  for (int n : {1, 2, 3}) {
    QuadraticDifferential q(1.0, n, {}, 1.0);
    const double threshold = kTwoPi / (n + 2);
    for (int k = 0; k < 300; ++k) {
      Complex z1 = testutil::rand_point(rng, 0.05, 0.95);
      Complex z2 = testutil::rand_point(rng, 0.05, 0.95);
      double delta = std::abs(wrap_to_pi(std::arg(z2) - std::arg(z1)));
      if (std::abs(delta - threshold) < 1e-9) continue;  // tie band
      GeodesicPath p = connect(q, z1, z2);
      if (delta < threshold) {
        CHECK(p.kind == PathKind::RegularArc);
      } else {
        CHECK(p.kind == PathKind::RadiusPair);
      }
      // length agrees with the developed picture
      Complex w1 = natural_parameter(q, z1), w2 = natural_parameter(q, z2);
      double a = std::abs(w1), b = std::abs(w2);
      if (p.kind == PathKind::RadiusPair) {
        CHECK(p.length == doctest::Approx(a + b).epsilon(1e-12));
      } else {
        // straight developed segment: law of cosines at the developed angle
        double ang = delta * (n + 2) / 2.0;
        double seg =
            std::sqrt(std::max(0.0, a * a + b * b - 2 * a * b * std::cos(ang)));
        CHECK(p.length == doctest::Approx(seg).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("connection validates its inputs") {
  QuadraticDifferential s(1.0, 2, {{3, 0.05}}, 0.9);
  CHECK_THROWS_AS(connect(s, Complex(0.1, 0), Complex(0.2, 0)), Error);
  QuadraticDifferential q(1.0, 2, {}, 1.0);
  CHECK_THROWS_AS(connect(q, Complex(1.5, 0), Complex(0.2, 0)), Error);
}
