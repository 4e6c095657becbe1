#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "phigeo/flatcone.hpp"
#include "phigeo/geodesic.hpp"
#include "test_support.hpp"

using namespace phigeo;

namespace {

double lateral_weight(const MetricGraph& g, int ring, int slot) {
  int a = g.node_id(ring, slot);
  int b = g.node_id(ring, (slot + 1) % g.n_theta());
  for (const auto& nb : g.neighbors(a))
    if (nb.node == b) return nb.weight;
  REQUIRE(false);
  return 0.0;
}

}  // namespace

TEST_CASE("grid indexing, positions, and snapping") {
  QuadraticDifferential q(1.0, 2, {}, 1.0);
  MetricGraph g = build_grid(q, 16, 32, 1);
  CHECK(g.node_count() == 1 + 16 * 32);
  CHECK(g.node_position(0) == Complex(0, 0));
  for (int ring : {1, 7, 16})
    for (int slot : {0, 5, 31}) {
      int id = g.node_id(ring, slot);
      Complex z = g.node_position(id);
      CHECK(std::abs(std::abs(z) - g.ring_radius(ring)) < 1e-12);
      CHECK(g.snap(z) == id);
    }
  CHECK(g.snap(Complex(1e-9, 0)) == 0);
  CHECK_THROWS_AS(g.snap(Complex(1.2, 0)), Error);
}

TEST_CASE("edge weights are flat lengths of chart segments") {
  // density 1: the lateral edge is the Euclidean chord
  QuadraticDifferential flat(1.0, 0, {}, 1.0);
  MetricGraph gf = build_grid(flat, 16, 64, 1);
  for (int ring : {4, 10, 16}) {
    double r = gf.ring_radius(ring);
    double chord = 2 * r * std::sin(kPi / 64);
    CHECK(lateral_weight(gf, ring, 3) == doctest::Approx(chord).epsilon(1e-9));
  }

  // density |z|: lateral weight ~ r * chord within one percent
  QuadraticDifferential q2(1.0, 2, {}, 1.0);
  MetricGraph g2 = build_grid(q2, 16, 64, 1);
  for (int ring : {6, 12, 16}) {
    double r = g2.ring_radius(ring);
    double chord = 2 * r * std::sin(kPi / 64);
    CHECK(lateral_weight(g2, ring, 0) ==
          doctest::Approx(r * chord).epsilon(0.01));
  }

  // center spoke for density |z|^{1/2}: integral of r^{1/2} from 0 to dr
  QuadraticDifferential q1(1.0, 1, {}, 1.0);
  MetricGraph g1 = build_grid(q1, 16, 64, 1);
  double dr = 1.0 / 16;
  bool found = false;
  for (const auto& nb : g1.neighbors(0)) {
    if (nb.node == g1.node_id(1, 0)) {
      CHECK(nb.weight ==
            doctest::Approx((2.0 / 3.0) * std::pow(dr, 1.5)).epsilon(1e-6));
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("the edge list is symmetric, positive, and deterministic") {
  QuadraticDifferential q(1.0, 1, {}, 1.0);
  MetricGraph g = build_grid(q, 12, 24, 2);
  for (int id : {0, 5, 40, 100, g.node_count() - 1}) {
    for (const auto& nb : g.neighbors(id)) {
      CHECK(nb.weight > 0.0);
      bool mirrored = false;
      for (const auto& back : g.neighbors(nb.node))
        if (back.node == id && back.weight == nb.weight) mirrored = true;
      CHECK(mirrored);
    }
  }
  std::ostringstream a, b;
  g.export_edge_list(a);
  build_grid(q, 12, 24, 2).export_edge_list(b);
  CHECK(a.str() == b.str());
  CHECK(a.str().find(' ') != std::string::npos);
}

TEST_CASE("construction validates its parameters") {
  QuadraticDifferential q(1.0, 1, {}, 1.0);
  CHECK_THROWS_AS(build_grid(q, 4, 32, 2), Error);
  CHECK_THROWS_AS(build_grid(q, 16, 8, 2), Error);
  CHECK_THROWS_AS(build_grid(q, 16, 32, 0), Error);
  CHECK_THROWS_AS(build_grid(q, 16, 32, 4), Error);
}

TEST_CASE("euclidean distances on the trivial chart") {
  QuadraticDifferential flat(1.0, 0, {}, 1.1);
  MetricGraph g = build_grid(flat, 96, 192, 2);
  PathResult p = shortest_path(g, Complex(0, 0), Complex(0.6, 0.8));
  CHECK(p.length == doctest::Approx(1.0).epsilon(0.02));
  REQUIRE(!p.points.empty());
  CHECK(std::abs(p.points.front()) < 1e-12);
  CHECK(std::abs(p.points.back() - Complex(0.6, 0.8)) < 0.02);
}

TEST_CASE("antipodal points route through the singularity") {
  QuadraticDifferential q2(1.0, 2, {}, 1.0);
  MetricGraph g = build_grid(q2, 128, 256, 2);
  PathResult p = shortest_path(g, Complex(1, 0), Complex(-1, 0));
  // radial spokes integrate the density exactly, so the broken path is exact
  CHECK(p.length == doctest::Approx(1.0).epsilon(1e-6));
  bool through_center = false;
  for (int id : p.nodes)
    if (id == 0) through_center = true;
  CHECK(through_center);
  bool exact_origin = false;
  for (const Complex& z : p.points)
    if (z == Complex(0, 0)) exact_origin = true;
  CHECK(exact_origin);
}

TEST_CASE("radial distance to the singularity") {
  QuadraticDifferential q2(1.0, 2, {}, 1.0);
  MetricGraph g = build_grid(q2, 128, 256, 2);
  CHECK(shortest_path(g, Complex(0, 0), Complex(1, 0)).length ==
        doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("oracle length envelops the analytic arc within its own bound") {
  QuadraticDifferential q2(1.0, 2, {}, 1.0);
  MetricGraph g = build_grid(q2, 128, 256, 2);
  // node-aligned pair a quarter-turn apart: the true geodesic is a regular arc
  Complex z1 = g.node_position(g.node_id(96, 0));
  Complex z2 = g.node_position(g.node_id(96, 32));
  double analytic = connect(q2, z1, z2).length;
  double oracle = shortest_path(g, z1, z2).length;
  double bound = bound_for_pair(g, z1, z2);
  double rel = oracle / analytic - 1.0;
  CHECK(rel >= -1e-9);
  CHECK(rel <= bound);
  CHECK(bound < 0.04);
}

TEST_CASE("oracle lengths are exactly symmetric in the endpoints") {
  QuadraticDifferential q1(1.0, 1, {}, 1.0);
  MetricGraph g = build_grid(q1, 48, 96, 2);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 6; ++k) {
    Complex a = g.node_position(
        g.node_id(1 + int(testutil::rand_in(rng, 4, 47)),
                  int(testutil::rand_in(rng, 0, 95))));
    Complex b = g.node_position(
        g.node_id(1 + int(testutil::rand_in(rng, 4, 47)),
                  int(testutil::rand_in(rng, 0, 95))));
    double ab = shortest_path(g, a, b).length;
    double ba = shortest_path(g, b, a).length;
    CHECK(ab == ba);  // bitwise: the path is re-summed canonically
  }
}

TEST_CASE("the oracle never undercuts the analytic geodesic") {
  for (int n : {1, 2}) {
    QuadraticDifferential q(1.0, n, {}, 1.0);
    MetricGraph g = build_grid(q, 64, 128, 2);
    std::mt19937_64 rng(17 + n);
    for (int k = 0; k < 10; ++k) {
      Complex a = g.node_position(
          g.node_id(1 + int(testutil::rand_in(rng, 6, 63)),
                    int(testutil::rand_in(rng, 0, 127))));
      Complex b = g.node_position(
          g.node_id(1 + int(testutil::rand_in(rng, 6, 63)),
                    int(testutil::rand_in(rng, 0, 127))));
      if (std::abs(a - b) < 1e-12) continue;
      CHECK(shortest_path(g, a, b).length >= connect(q, a, b).length - 1e-9);
    }
  }
}

TEST_CASE("one source tree answers many targets") {
  QuadraticDifferential q2(1.0, 2, {}, 1.0);
  MetricGraph g = build_grid(q2, 48, 96, 2);
  Complex src = g.node_position(g.node_id(24, 10));
  ShortestPathTree tree = shortest_path_tree(g, src);
  CHECK(tree.source == g.node_id(24, 10));
  for (int ring : {8, 30, 46}) {
    Complex dst = g.node_position(g.node_id(ring, 50));
    PathResult via_tree = path_from_tree(g, tree, dst);
    PathResult direct = shortest_path(g, src, dst);
    CHECK(via_tree.length == direct.length);
    CHECK(via_tree.nodes == direct.nodes);
  }
}

TEST_CASE("refinement does not worsen the relative error") {
  QuadraticDifferential q2(1.0, 2, {}, 1.0);
  // node-aligned at every listed size (radius 24/32 R, quarter-turn apart)
  Complex z1 = std::polar(0.75, 0.0);
  Complex z2 = std::polar(0.75, kPi / 4);
  std::vector<GridSize> sizes{{32, 64}, {64, 128}, {128, 256}};
  auto rows = convergence_study(q2, z1, z2, sizes, 2);
  REQUIRE(rows.size() == 3);
  double analytic = connect(q2, z1, z2).length;
  for (const auto& row : rows) {
    REQUIRE(row.analytic_length.has_value());
    CHECK(*row.analytic_length == doctest::Approx(analytic));
    REQUIRE(row.relative_error.has_value());
    CHECK(*row.relative_error >= -1e-9);
  }
  for (size_t i = 1; i < rows.size(); ++i)
    CHECK(*rows[i].relative_error <=
          *rows[i - 1].relative_error * 1.10 + 1e-12);
  CHECK(*rows.back().relative_error < 0.02);

  // a diameter through the singularity is resolved exactly at every size
  auto exact = convergence_study(q2, Complex(0.75, 0), Complex(-0.75, 0),
                                 sizes, 2);
  for (const auto& row : exact) CHECK(std::abs(*row.relative_error) < 1e-9);
}

TEST_CASE("a deeper stencil level tightens the reported bound") {
  QuadraticDifferential q2(1.0, 2, {}, 1.0);
  MetricGraph g2 = build_grid(q2, 64, 128, 2);
  MetricGraph g3 = build_grid(q2, 64, 128, 3);
  Complex z1 = std::polar(0.75, 0.0), z2 = std::polar(0.75, kPi / 4);
  CHECK(bound_for_pair(g3, z1, z2) < bound_for_pair(g2, z1, z2));
  CHECK(g3.neighbors(g3.node_id(32, 0)).size() >
        g2.neighbors(g2.node_id(32, 0)).size());
  CHECK(g2.ring_factor(32) > 0.0);
  CHECK(g3.ring_factor(32) < g2.ring_factor(32));
}

TEST_CASE("non-monomial coefficients integrate their edges directly") {
  QuadraticDifferential s(1.0, 2, {{3, 0.05}}, 0.9);
  MetricGraph g = build_grid(s, 16, 32, 1);
  for (const auto& nb : g.neighbors(g.node_id(8, 3))) CHECK(nb.weight > 0);
  Complex a(0.5, 0), b(-0.5, 0);
  PathResult p = shortest_path(g, a, b);
  CHECK(p.length == shortest_path(g, b, a).length);
  // the perturbation is a few percent at most inside this chart
  QuadraticDifferential q2(1.0, 2, {}, 0.9);
  MetricGraph gm = build_grid(q2, 16, 32, 1);
  CHECK(p.length ==
        doctest::Approx(shortest_path(gm, a, b).length).epsilon(0.06));
  CHECK_THROWS_AS(bound_for_pair(g, a, b), Error);

  auto rows = convergence_study(s, a, b, {{16, 32}, {32, 64}, {64, 128}}, 1);
  for (const auto& row : rows) {
    CHECK_FALSE(row.analytic_length.has_value());
    CHECK(row.oracle_length > 0);
  }
}
