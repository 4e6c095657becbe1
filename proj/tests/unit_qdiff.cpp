#include <doctest.h>

#include <random>
#include <sstream>

#include "phigeo/qdiff.hpp"
#include "test_support.hpp"

using namespace phigeo;

TEST_CASE("construction validates its parameters") {
  CHECK_THROWS_AS(QuadraticDifferential(0.0, 2), Error);
  CHECK_THROWS_AS(QuadraticDifferential(1.0, -1), Error);
  CHECK_THROWS_AS(QuadraticDifferential(1.0, 1, {}, 0.0), Error);
  CHECK_THROWS_AS(QuadraticDifferential(1.0, 1, {}, -2.0), Error);
  // higher-term degrees must strictly exceed the zero order
  CHECK_THROWS_AS(QuadraticDifferential(1.0, 2, {{2, 0.5}}), Error);
  CHECK_THROWS_AS(QuadraticDifferential(1.0, 2, {{3, 0.5}, {3, 0.1}}), Error);
  try {
    QuadraticDifferential(0.0, 2);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parameter);
  }
}

TEST_CASE("construction rejects coefficients that vanish inside the chart") {
  // -1/2 + z has its zero at z = 1/2, inside the unit chart
  CHECK_THROWS_AS(QuadraticDifferential(-0.5, 0, {{1, 1.0}}, 1.0), Error);
  // 1 + z vanishes exactly on the chart boundary
  CHECK_THROWS_AS(QuadraticDifferential(1.0, 0, {{1, 1.0}}, 1.0), Error);
  // the same zero is harmless once the chart stays clear of it
  CHECK_NOTHROW(QuadraticDifferential(1.0, 0, {{1, 1.0}}, 0.5));
  // z^2 + 0.05 z^3 vanishes only at z = -20
  CHECK_NOTHROW(QuadraticDifferential(1.0, 2, {{3, 0.05}}, 1.0));
}

TEST_CASE("evaluation matches the coefficient polynomial") {
  CHECK(evaluate(QuadraticDifferential(1.0, 2), 1.0) == Complex(1.0, 0.0));
  CHECK(evaluate(QuadraticDifferential(1.0, 1), Complex(0, 1)) ==
        Complex(0.0, 1.0));
  QuadraticDifferential q(Complex(0, 2), 3, {}, 2.5);
  Complex v = evaluate(q, 2.0);
  CHECK(v.real() == doctest::Approx(0.0));
  CHECK(v.imag() == doctest::Approx(16.0));

  QuadraticDifferential s(1.0, 2, {{3, Complex(0, 0.05)}, {5, -0.01}}, 0.9);
  Complex z(0.3, -0.2);
  Complex want = z * z + Complex(0, 0.05) * z * z * z -
                 0.01 * z * z * z * z * z;
  CHECK(std::abs(evaluate(s, z) - want) < 1e-15);
}

TEST_CASE("evaluation is chart-limited but the raw form is not") {
  QuadraticDifferential q(1.0, 2, {}, 1.0);
  CHECK_THROWS_AS(evaluate(q, Complex(1.5, 0)), Error);
  try {
    evaluate(q, Complex(1.5, 0));
  } catch (const Error& e) {
    CHECK(e.code() == Errc::domain);
  }
  CHECK(std::abs(evaluate_raw(q, Complex(1.5, 0)) - Complex(2.25, 0)) < 1e-15);
}

TEST_CASE("derivative matches central differences") {
  QuadraticDifferential q(Complex(1, 0.5), 2, {{4, Complex(-0.2, 0.1)}}, 1.2);
  std::mt19937_64 rng(11);
  for (int k = 0; k < 20; ++k) {
    Complex z = testutil::rand_point(rng, 0.1, 1.0);
    const double h = 1e-6;
    Complex fd = (evaluate_raw(q, z + h) - evaluate_raw(q, z - h)) / (2 * h);
    CHECK(std::abs(derivative(q, z) - fd) < 1e-6);
  }
}

TEST_CASE("cone angle is (order + 2) * pi") {
  CHECK(cone_angle(QuadraticDifferential(1.0, 0)) == doctest::Approx(kTwoPi));
  CHECK(cone_angle(QuadraticDifferential(1.0, 1)) == doctest::Approx(3 * kPi));
  CHECK(cone_angle(QuadraticDifferential(2.0, 2)) == doctest::Approx(4 * kPi));
  CHECK(cone_angle(QuadraticDifferential(1.0, 5)) == doctest::Approx(7 * kPi));
}

TEST_CASE("metric density is the square root of the coefficient magnitude") {
  QuadraticDifferential flat(1.0, 0);
  CHECK(metric_density(flat, Complex(0.3, -0.4)) == doctest::Approx(1.0));
  QuadraticDifferential q2(1.0, 2);
  CHECK(metric_density(q2, std::polar(0.5, 1.1)) == doctest::Approx(0.5));
  CHECK(metric_density(q2, Complex(0, 0)) == 0.0);
  CHECK(metric_density(QuadraticDifferential(1.0, 3), Complex(0, 0)) == 0.0);
}

TEST_CASE("natural parameter flattens monomial forms") {
  QuadraticDifferential q0(1.0, 0);
  CHECK(std::abs(natural_parameter(q0, Complex(0.3, 0.4)) -
                 Complex(0.3, 0.4)) < 1e-15);

  QuadraticDifferential q2(1.0, 2);
  Complex z(0.5, 0.25);
  CHECK(std::abs(natural_parameter(q2, z) - z * z * 0.5) < 1e-15);

  QuadraticDifferential q1(1.0, 1);
  CHECK(natural_parameter(q1, Complex(1, 0)).real() ==
        doctest::Approx(2.0 / 3.0));
  CHECK(natural_parameter(q1, Complex(1, 0)).imag() == doctest::Approx(0.0));

  QuadraticDifferential s(1.0, 2, {{3, 0.05}}, 0.9);
  CHECK_THROWS_AS(natural_parameter(s, Complex(0.2, 0)), Error);
}

TEST_CASE("the natural parameter is a local isometry onto the plane") {
  // |dw/dz| must equal the length density away from the branch cut
  std::mt19937_64 rng(7);
  for (int n : {1, 2, 3, 4}) {
    QuadraticDifferential q(Complex(1.5, -0.7), n);
    for (int k = 0; k < 12; ++k) {
      double r = testutil::rand_in(rng, 0.2, 0.9);
      double th = testutil::rand_in(rng, -2.8, 2.8);  // stay off Arg z = pi
      Complex z = std::polar(r, th);
      const double h = 1e-6;
      Complex dw = (natural_parameter(q, z + h) - natural_parameter(q, z - h)) /
                   (2 * h);
      CHECK(std::abs(dw) ==
            doctest::Approx(metric_density(q, z)).epsilon(1e-6));
    }
  }
}

TEST_CASE("phase of the quadratic form along a direction") {
  QuadraticDifferential flat(1.0, 0);
  CHECK(phase(flat, Complex(0.2, 0.1), Complex(1, 0)) == doctest::Approx(0.0));

  QuadraticDifferential q2(1.0, 2);
  CHECK(phase(q2, Complex(0, 1), Complex(1, 0)) == doctest::Approx(kPi));

  QuadraticDifferential q1(1.0, 1);
  CHECK(phase(q1, Complex(1, 0), std::polar(1.0, kPi / 4)) ==
        doctest::Approx(kPi / 2));

  CHECK_THROWS_AS(phase(q2, Complex(0, 0), Complex(1, 0)), Error);
  try {
    phase(q2, Complex(0, 0), Complex(1, 0));
  } catch (const Error& e) {
    CHECK(e.code() == Errc::singular_point);
  }
}

TEST_CASE("the developed circle sweeps exactly the cone angle") {
  for (int n = 1; n <= 5; ++n) {
    QuadraticDifferential q(Complex(0.8, 0.6), n);
    double sweep = developed_circle_sweep(q, 0.8);
    CHECK(std::abs(sweep - (n + 2) * kPi) < 1e-6);
  }
  // regular point: plain full turn
  CHECK(std::abs(developed_circle_sweep(QuadraticDifferential(2.0, 0), 0.5) -
                 kTwoPi) < 1e-6);
  // the sweep is a property of the zero order, not of the monomial shape
  QuadraticDifferential s(1.0, 2, {{3, 0.1}, {4, Complex(0, -0.05)}}, 1.0);
  CHECK(std::abs(developed_circle_sweep(s, 0.8) - 4 * kPi) < 1e-6);
}

TEST_CASE("json serialization round trips") {
  QuadraticDifferential q(Complex(1.25, -0.5), 3, {{5, Complex(0, 0.125)}},
                          1.75);
  QuadraticDifferential back = qdiff_from_json(to_json(q));
  CHECK(back.leading_coefficient() == q.leading_coefficient());
  CHECK(back.order() == q.order());
  CHECK(back.chart_radius() == q.chart_radius());
  REQUIRE(back.higher_terms().size() == 1);
  CHECK(back.higher_terms()[0].degree == 5);
  CHECK(back.higher_terms()[0].coeff == Complex(0, 0.125));
  CHECK(describe(q).find("z^3") != std::string::npos);
}

TEST_CASE("double formatting round trips exactly") {
  for (double v : {0.0, 1.0, 0.5, 1.0 / 3.0, 6.128346087744141e-07,
                   -2.5e300, kPi, 1e-17}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-0.5) == "-0.5");
}

TEST_CASE("half integers snap and print") {
  double dev = -1.0;
  CHECK(HalfInteger::nearest(0.49, &dev) == HalfInteger(1));
  CHECK(dev == doctest::Approx(0.01));
  CHECK(HalfInteger::nearest(-1.74, &dev) == HalfInteger(-3));
  CHECK(dev == doctest::Approx(0.24));
  CHECK(HalfInteger::nearest(2.0) == HalfInteger::whole(2));
  CHECK(HalfInteger(3).str() == "3/2");
  CHECK(HalfInteger(-1).str() == "-1/2");
  CHECK(HalfInteger(4).str() == "2");
  CHECK(HalfInteger(0).str() == "0");
  CHECK(HalfInteger(1) + HalfInteger(1) == HalfInteger::whole(1));
  CHECK(HalfInteger(1) - HalfInteger(2) == HalfInteger(-1));
}

TEST_CASE("angle wrapping helpers") {
  CHECK(wrap_to_pi(kPi) == doctest::Approx(kPi));
  CHECK(wrap_to_pi(-kPi) == doctest::Approx(kPi));
  CHECK(wrap_to_pi(3 * kPi) == doctest::Approx(kPi));
  CHECK(wrap_to_pi(kTwoPi + 0.25) == doctest::Approx(0.25));
  CHECK(wrap_two_pi(-0.1) == doctest::Approx(kTwoPi - 0.1));
  CHECK(wrap_two_pi(kTwoPi) == doctest::Approx(0.0));
  CHECK(wrap_line(kPi) == doctest::Approx(0.0));
  CHECK(wrap_line(-0.2) == doctest::Approx(kPi - 0.2));
  CHECK(line_angle_diff(0.1, kPi - 0.1) == doctest::Approx(0.2));
  CHECK(line_angle_diff(kPi - 0.1, 0.1) == doctest::Approx(-0.2));
}
