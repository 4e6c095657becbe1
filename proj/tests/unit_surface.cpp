#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "phigeo/surface.hpp"
#include "test_support.hpp"

using namespace phigeo;

namespace {

std::array<double, 20> known_cubic() {
  std::array<double, 20> c{};
  c[4] = 0.6;    // x^2
  c[9] = -0.4;   // z^2
  c[16] = 0.5;   // y^3
  return c;
}

bool near(Vec3 a, Vec3 b, double tol) { return norm(a - b) < tol; }

}  // namespace

TEST_CASE("analytic jets agree with central differences") {
  std::vector<SampledImmersion> surfaces{
      SampledImmersion::ellipsoid(3, 2, 1),
      SampledImmersion::perturbed_sphere(0.04, known_cubic()),
      SampledImmersion::superellipsoid(4),
      SampledImmersion::ellipsoid(1, 1, 2).rotated(
          Mat3::rotation(normalized(Vec3{1, 2, 3}), 0.7)),
  };
  std::vector<ChartPoint> probes{
      {ChartId::band, 0.4, 0.2},   {ChartId::band, -2.0, -0.7},
      {ChartId::north, 0.1, 0.2},  {ChartId::north, -0.3, 0.05},
      {ChartId::south, 0.25, -0.3}};
  const double h = 1e-5;
  for (const auto& s : surfaces)
    for (const auto& p : probes) {
      auto jet = s.jet(p);
      auto at = [&](double du, double dv) {
        return s.position({p.chart, p.u + du, p.v + dv});
      };
      Vec3 pu = (at(h, 0) - at(-h, 0)) / (2 * h);
      Vec3 pv = (at(0, h) - at(0, -h)) / (2 * h);
      Vec3 puu = (at(h, 0) - 2.0 * jet.P + at(-h, 0)) / (h * h);
      Vec3 pvv = (at(0, h) - 2.0 * jet.P + at(0, -h)) / (h * h);
      Vec3 puv = (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4 * h * h);
      CHECK(near(jet.Pu, pu, 1e-7 * (1 + norm(pu))));
      CHECK(near(jet.Pv, pv, 1e-7 * (1 + norm(pv))));
      CHECK(near(jet.Puu, puu, 2e-4 * (1 + norm(puu))));
      CHECK(near(jet.Pvv, pvv, 2e-4 * (1 + norm(pvv))));
      CHECK(near(jet.Puv, puv, 2e-4 * (1 + norm(puv))));
    }
}

TEST_CASE("rotation moves the embedding, not the parametrization") {
  Mat3 rot = Mat3::rotation(normalized(Vec3{0, 1, 1}), 1.1);
  SampledImmersion base = SampledImmersion::ellipsoid(3, 2, 1);
  SampledImmersion turned = base.rotated(rot);
  ChartPoint p{ChartId::band, 0.8, -0.3};
  CHECK(near(turned.position(p), rot * base.position(p), 1e-12));
}

TEST_CASE("fundamental forms of the round sphere") {
  SampledImmersion sphere = SampledImmersion::ellipsoid(2, 2, 2);
  for (ChartPoint p : std::vector<ChartPoint>{{ChartId::band, 0.3, 0.5},
                                              {ChartId::north, 0.1, -0.2},
                                              {ChartId::south, 0.0, 0.1}}) {
    FundamentalForms f = fundamental_forms(sphere, p);
    CHECK(f.H == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(f.K == doctest::Approx(0.25).epsilon(1e-9));
    // forms are oriented so that H > 0: on a convex body the normal points in
    CHECK(dot(f.normal, sphere.position(p)) < 0);
  }
}

TEST_CASE("curvatures at the long axis of the reference ellipsoid") {
  SampledImmersion e = SampledImmersion::ellipsoid(3, 2, 1);
  ChartPoint tip{ChartId::band, 0.0, 0.0};  // the point (3, 0, 0)
  CHECK(near(e.position(tip), {3, 0, 0}, 1e-12));
  FundamentalForms f = fundamental_forms(e, tip);
  // principal curvatures a/c^2 = 3 and a/b^2 = 3/4
  CHECK(f.H == doctest::Approx((3.0 + 0.75) / 2).epsilon(1e-9));
  CHECK(f.K == doctest::Approx(3.0 * 0.75).epsilon(1e-9));
  CHECK(std::abs(umbilic_deviation(e, tip)) ==
        doctest::Approx((3.0 - 0.75) / 2).epsilon(1e-9));
  // maximal curvature bends in the xz-plane: the chart v-direction
  CHECK(principal_angle(e, tip) == doctest::Approx(kPi / 2).epsilon(1e-9));
}

TEST_CASE("umbilic machinery rejects degenerate inputs") {
  SampledImmersion sphere = SampledImmersion::ellipsoid(1, 1, 1);
  CHECK_THROWS_AS(principal_angle(sphere, ChartPoint{ChartId::band, 0, 0}),
                  Error);
  CHECK_THROWS_AS(find_umbilics(sphere), Error);
  try {
    find_umbilics(sphere);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::precondition);
  }
}

TEST_CASE("umbilics of the scalene ellipsoid") {
  SampledImmersion e = SampledImmersion::ellipsoid(3, 2, 1);
  auto ums = find_umbilics(e);
  REQUIRE(ums.size() == 4);
  // closed form: in the xz-plane at (+-a sqrt((a^2-b^2)/(a^2-c^2)),
  //                                  0, +-c sqrt((b^2-c^2)/(a^2-c^2)))
  const double ux = 3 * std::sqrt(5.0 / 8.0);
  const double uz = std::sqrt(3.0 / 8.0);
  for (const auto& um : ums) {
    CHECK(um.index == HalfInteger(1));
    CHECK(um.residual < 1e-8);
    bool matches = false;
    for (double sx : {-1.0, 1.0})
      for (double sz : {-1.0, 1.0})
        if (near(um.position, {sx * ux, 0.0, sz * uz}, 1e-6)) matches = true;
    CHECK(matches);
  }
}

TEST_CASE("poles of spheroids") {
  SampledImmersion prolate = SampledImmersion::ellipsoid(1, 1, 2);
  auto ums = find_umbilics(prolate);
  REQUIRE(ums.size() == 2);
  for (const auto& um : ums) {
    CHECK(um.index == HalfInteger::whole(1));
    CHECK(std::abs(std::abs(um.position.z) - 2.0) < 1e-8);
    CHECK(std::abs(um.position.x) < 1e-8);
    CHECK(std::abs(um.position.y) < 1e-8);
  }

  SampledImmersion oblate = SampledImmersion::ellipsoid(1.4, 1.4, 0.9);
  auto obs = find_umbilics(oblate);
  REQUIRE(obs.size() == 2);
  for (const auto& um : obs) {
    CHECK(um.index == HalfInteger::whole(1));
    CHECK(std::abs(std::abs(um.position.z) - 0.9) < 1e-8);
  }
}

TEST_CASE("index sums close over the sphere") {
  IndexSumReport rep = index_sum_check(SampledImmersion::ellipsoid(3, 2, 1));
  CHECK(rep.matched);
  CHECK(rep.total == HalfInteger::whole(2));
  CHECK(rep.umbilics.size() == 4);
  CHECK(rep.rescans == 0);
}

TEST_CASE("a cubic perturbation splits the poles into half-index umbilics") {
  SampledImmersion s = SampledImmersion::perturbed_sphere(0.04, known_cubic());
  ConvexityCheck cv = check_convexity(s);
  CHECK(cv.strictly_convex);
  CHECK(cv.min_K > 0.5);
  IndexSumReport rep = index_sum_check(s);
  CHECK(rep.matched);
  CHECK(rep.total == HalfInteger::whole(2));
  CHECK(rep.umbilics.size() == 8);
  int negatives = 0;
  for (const auto& um : rep.umbilics) {
    CHECK(um.index < HalfInteger::whole(2));
    if (um.index < HalfInteger(0)) ++negatives;
  }
  CHECK(negatives == 2);  // two saddle-type points of index -1/2
}

TEST_CASE("rotated surfaces carry their umbilics along") {
  Mat3 rot = Mat3::rotation(normalized(Vec3{1, 2, 3}), 0.7);
  SampledImmersion base = SampledImmersion::ellipsoid(3, 2, 1);
  auto before = find_umbilics(base);
  auto after = find_umbilics(base.rotated(rot));
  REQUIRE(before.size() == 4);
  REQUIRE(after.size() == 4);
  for (const auto& um : after) {
    CHECK(um.index == HalfInteger(1));
    bool matched = false;
    for (const auto& ref : before)
      if (near(um.position, rot * ref.position, 1e-5)) matched = true;
    CHECK(matched);
  }
}

TEST_CASE("the convexity gate separates the families") {
  CHECK(check_convexity(SampledImmersion::ellipsoid(3, 2, 1)).strictly_convex);
  ConvexityCheck flat = check_convexity(SampledImmersion::superellipsoid(4));
  CHECK_FALSE(flat.strictly_convex);
  CHECK(flat.min_K < 1e-8);
}

TEST_CASE("corpus generation is deterministic") {
  // descriptions name only the family, so seed sensitivity must show in the
  // embedding itself: probe a fixed chart point of every member
  const ChartPoint probe{ChartId::band, 0.37, -0.21};
  auto a = make_convex_corpus(99, 10);
  auto b = make_convex_corpus(99, 10);
  REQUIRE(a.size() == 10);
  REQUIRE(b.size() == 10);
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].name == b[i].name);
    CHECK(a[i].surface.description() == b[i].surface.description());
    Vec3 pa = a[i].surface.position(probe);
    Vec3 pb = b[i].surface.position(probe);
    CHECK(pa.x == pb.x);
    CHECK(pa.y == pb.y);
    CHECK(pa.z == pb.z);
  }
  auto c = make_convex_corpus(100, 10);
  bool any_differs = false;
  for (size_t i = 0; i < a.size(); ++i) {
    Vec3 pa = a[i].surface.position(probe);
    Vec3 pc = c[i].surface.position(probe);
    if (pa.x != pc.x || pa.y != pc.y || pa.z != pc.z) any_differs = true;
  }
  CHECK(any_differs);
}

TEST_CASE("the audit passes a seeded convex corpus") {
  auto corpus = make_convex_corpus(99, 10);
  SurfaceAuditReport rep = audit_corpus(corpus);
  REQUIRE(rep.entries.size() == 10);
  CHECK(rep.all_pass);
  for (const auto& e : rep.entries) {
    CHECK(e.convex);
    CHECK(e.scanned);
    CHECK(e.findings.empty());
    CHECK(e.umbilic_count >= 2);
    CHECK(e.index_sum == HalfInteger::whole(2));
    CHECK(!(HalfInteger::whole(1) < e.max_index));
  }
}

TEST_CASE("the audit reports non-convex members instead of scanning them") {
  auto corpus = make_convex_corpus(99, 5);
  corpus.push_back({"flat-sided", SampledImmersion::superellipsoid(4)});
  SurfaceAuditReport rep = audit_corpus(corpus);
  REQUIRE(rep.entries.size() == 6);
  CHECK_FALSE(rep.all_pass);
  const auto& bad = rep.entries.back();
  CHECK_FALSE(bad.convex);
  CHECK_FALSE(bad.scanned);
  CHECK(!bad.findings.empty());
}

TEST_CASE("descriptions identify the member parameters") {
  CHECK(SampledImmersion::ellipsoid(3, 2, 1).description().find("3") !=
        std::string::npos);
  CHECK(SampledImmersion::superellipsoid(4).description().find("4") !=
        std::string::npos);
}
