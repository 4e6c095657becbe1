#include <doctest.h>

#include <cmath>

#include "phigeo/cmc.hpp"
#include "test_support.hpp"

using namespace phigeo;

namespace {

// arbitrary smooth metric field, for identities that hold for any lambda
ConformalMetric synthetic_metric(double radius, int n, double H = 1.0) {
  ConformalMetric m;
  m.grid = DiskGrid(radius, n);
  m.H = H;
  m.lambda.resize(m.grid.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m.lambda[m.grid.id(i, j)] =
          0.2 * std::sin(m.grid.x(i)) * std::cos(m.grid.y(j));
  return m;
}

// numerically zero coefficient: |leading|^2 underflows to exactly 0, which
// realizes the totally umbilic patch without a dedicated code path
QuadraticDifferential zero_form(double radius) {
  return QuadraticDifferential(1e-200, 0, {}, radius);
}

}  // namespace

TEST_CASE("disk grid geometry") {
  DiskGrid g(1.0, 65);
  CHECK(g.h == doctest::Approx(2.0 / 64));
  CHECK(g.size() == 65 * 65);
  CHECK(g.point(32, 32) == Complex(0, 0));
  CHECK(g.inside(32, 32));
  CHECK_FALSE(g.inside(0, 0));      // square corner, outside the disk
  CHECK(g.full_stencil(32, 32));
  CHECK_FALSE(g.full_stencil(32, 63));  // next to the boundary circle
}

TEST_CASE("recombined coefficient from hand-built forms") {
  BonnetForms f;
  f.grid = DiskGrid(1.0, 17);
  int sz = f.grid.size();
  f.l.assign(sz, 3.0);
  f.m.assign(sz, 2.0);
  f.nn.assign(sz, 1.0);
  ComplexField c = hopf_coefficient(f);
  REQUIRE(int(c.size()) == sz);
  CHECK(c[f.grid.id(8, 8)] == Complex(1.0, -2.0));
}

TEST_CASE("deformed forms on the positive axis") {
  QuadraticDifferential q2(1.0, 2, {}, 1.0);
  ConformalMetric m = synthetic_metric(1.0, 65);
  BonnetForms f = bonnet_forms(m, q2, 0.0);
  const DiskGrid& g = f.grid;
  for (int i = 33; i < 64; ++i) {
    if (!g.inside(i, 32)) continue;
    double r = g.x(i);
    int id = g.id(i, 32);
    CHECK(f.m[id] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK((f.l[id] - f.nn[id]) / 2 == doctest::Approx(r * r).epsilon(1e-12));
    double e2l = std::exp(2 * m.lambda[id]);
    CHECK(f.l[id] + f.nn[id] == doctest::Approx(2 * m.H * e2l));
  }
}

TEST_CASE("the recombined coefficient is the rotated form") {
  ConformalMetric m = synthetic_metric(1.0, 65);
  for (int n : {1, 2, 3}) {
    QuadraticDifferential q(1.0, n, {}, 1.0);
    for (double t : {0.0, 0.39, 1.1, 2.0}) {
      BonnetForms f = bonnet_forms(m, q, t);
      ComplexField c = hopf_coefficient(f);
      Complex rot = std::polar(1.0, -2 * t);
      double worst = 0;
      for (int i = 0; i < m.grid.n; ++i)
        for (int j = 0; j < m.grid.n; ++j) {
          if (!m.grid.inside(i, j)) continue;
          int id = m.grid.id(i, j);
          Complex want = rot * evaluate_raw(q, m.grid.point(i, j));
          worst = std::max(worst, std::abs(c[id] - want));
        }
      CHECK(worst < 1e-13);
    }
  }
}

TEST_CASE("deformation preserves the mean curvature field") {
  ConformalMetric m = synthetic_metric(1.0, 33, 1.5);
  QuadraticDifferential q2(1.0, 2, {}, 1.0);
  for (double t : {0.0, 0.7, 1.9}) {
    BonnetForms f = bonnet_forms(m, q2, t);
    for (int id = 0; id < m.grid.size(); ++id) {
      double e2l = std::exp(2 * m.lambda[id]);
      CHECK(f.l[id] + f.nn[id] ==
            doctest::Approx(2 * 1.5 * e2l).epsilon(1e-14));
    }
  }
}

TEST_CASE("bonnet forms require a unit-magnitude monomial") {
  ConformalMetric m = synthetic_metric(1.0, 33);
  CHECK_THROWS_AS(bonnet_forms(m, QuadraticDifferential(2.0, 2, {}, 1.0), 0.0),
                  Error);
  CHECK_THROWS_AS(
      bonnet_forms(m, QuadraticDifferential(1.0, 2, {{3, 0.05}}, 1.0), 0.0),
      Error);
}

TEST_CASE("a quarter-turn deformation of the order-two form is a chart rotation") {
  QuadraticDifferential q2(1.0, 2, {}, 1.0);
  GaussSolveResult solve = solve_gauss(q2, 1.0, 0.0, 1.0, 65);
  REQUIRE(solve.converged);
  const DiskGrid& g = solve.metric.grid;
  BonnetForms f0 = bonnet_forms(solve.metric, q2, 0.0);
  BonnetForms f1 = bonnet_forms(solve.metric, q2, kPi / 2);
  // z -> -i z maps the grid onto itself: (i, j) -> (j, N-1-i)
  const int N = g.n;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      if (!g.inside(i, j)) continue;
      int from = g.id(i, j);
      int to = g.id(j, N - 1 - i);
      CHECK(f1.l[from] == doctest::Approx(f0.l[to]).epsilon(1e-8));
      CHECK(f1.m[from] == doctest::Approx(f0.m[to]).epsilon(1e-8));
      CHECK(f1.nn[from] == doctest::Approx(f0.nn[to]).epsilon(1e-8));
    }
}

TEST_CASE("gauss solve on an umbilic-free patch") {
  QuadraticDifferential q1(1.0, 1, {}, 1.0);
  GaussSolveResult r = solve_gauss(q1, 1.0, 0.0, 1.0, 65);
  CHECK(r.converged);
  CHECK(r.iterations <= 10);
  REQUIRE(!r.residual_history.empty());
  CHECK(r.residual_history.back() < 1e-10);
  CHECK(gauss_residual(r.metric, q1).max_abs < 1e-8);

  QuadraticDifferential q3(1.0, 3, {}, 1.0);
  GaussSolveResult r3 = solve_gauss(q3, 1.0, 0.0, 1.0, 65);
  CHECK(r3.converged);
  CHECK(r3.residual_history.back() < 1e-10);
  CHECK(gauss_residual(r3.metric, q3).max_abs < 1e-8);
}

TEST_CASE("gauss solve on the totally umbilic patch") {
  QuadraticDifferential q0 = zero_form(0.5);
  GaussSolveResult r = solve_gauss(q0, 1.0, 0.0, 0.5, 65);
  CHECK(r.converged);
  CHECK(r.residual_history.back() < 1e-10);
  CHECK(gauss_residual(r.metric, q0).max_abs < 1e-8);
  // lap(lambda) = -e^{2 lambda} < 0 with zero boundary data: superharmonic,
  // so the conformal factor is positive inside and peaks at the center
  int center = r.metric.grid.id(32, 32);
  CHECK(r.metric.lambda[center] > 0.0);
  for (double v : r.metric.lambda) CHECK(v <= r.metric.lambda[center] + 1e-15);
}

TEST_CASE("newton residuals decrease monotonically to a quadratic tail") {
  QuadraticDifferential q2(1.0, 2, {}, 1.0);
  GaussSolveResult r = solve_gauss(q2, 1.0, 0.0, 1.0, 65);
  REQUIRE(r.converged);
  for (size_t i = 1; i < r.residual_history.size(); ++i)
    CHECK(r.residual_history[i] < r.residual_history[i - 1]);
  size_t last = r.residual_history.size() - 1;
  REQUIRE(last >= 2);
  // final contraction far stronger than the first
  CHECK(r.residual_history[last] / r.residual_history[last - 1] <
        0.1 * r.residual_history[1] / r.residual_history[0]);
}

TEST_CASE("the solver reports rather than throws on iteration exhaustion") {
  QuadraticDifferential q3(1.0, 3, {}, 1.0);
  GaussSolveResult r = solve_gauss(q3, 1.0, 0.0, 1.0, 33, 1);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 1);
  CHECK(!r.residual_history.empty());
}

TEST_CASE("a flat metric fails the curvature equation by one") {
  ConformalMetric flat;
  flat.grid = DiskGrid(0.5, 33);
  flat.lambda.assign(flat.grid.size(), 0.0);
  flat.H = 1.0;
  ResidualField res = gauss_residual(flat, zero_form(0.5));
  CHECK(res.max_abs == doctest::Approx(1.0));
  for (int i = 0; i < flat.grid.n; ++i)
    for (int j = 0; j < flat.grid.n; ++j) {
      int id = flat.grid.id(i, j);
      if (!res.valid[id]) continue;
      CHECK(res.values[id].real() == doctest::Approx(-1.0));
    }
}

TEST_CASE("compatibility residual of a cubic form is exactly the grid step squared") {
  // centered differences applied to z^3 leave a defect of exactly h^2
  QuadraticDifferential q3(1.0, 3, {}, 1.0);
  for (int n : {33, 65}) {
    GaussSolveResult r = solve_gauss(q3, 1.0, 0.0, 1.0, n);
    REQUIRE(r.converged);
    BonnetForms f = bonnet_forms(r.metric, q3, 0.4);
    ResidualField res = codazzi_residual(f, r.metric);
    double h = r.metric.grid.h;
    CHECK(res.max_abs == doctest::Approx(h * h).epsilon(1e-9));
  }
}

TEST_CASE("principal directions follow the coefficient phase") {
  QuadraticDifferential q2(1.0, 2, {}, 1.0);
  ConformalMetric m = synthetic_metric(1.0, 65);
  BonnetForms f0 = bonnet_forms(m, q2, 0.0);
  auto [d1, d2] = principal_directions(f0, Complex(0.5, 0));
  CHECK(d1 == doctest::Approx(0.0));
  CHECK(d2 == doctest::Approx(kPi / 2));
  BonnetForms ft = bonnet_forms(m, q2, 0.3);
  auto [e1, e2] = principal_directions(ft, Complex(0.5, 0));
  CHECK(e1 == doctest::Approx(0.3));
  CHECK(e2 == doctest::Approx(0.3 + kPi / 2));
  CHECK_THROWS_AS(principal_directions(f0, Complex(0, 0)), Error);
}

TEST_CASE("curvature lines follow the trajectory foliation") {
  QuadraticDifferential q3(1.0, 3, {}, 1.0);
  GaussSolveResult solve = solve_gauss(q3, 1.0, 0.0, 1.0, 129);
  REQUIRE(solve.converged);
  CurvatureLineReport rep =
      verify_curvature_lines(solve.metric, q3, 0.45, 0.25, 0.7, 3, 1e-3);
  CHECK(rep.curves_compared == 3);
  CHECK(rep.nodes_compared > 1000);
  CHECK(rep.max_direction_deviation < 1e-10);
  CHECK(rep.max_hausdorff < 1e-4);
}
