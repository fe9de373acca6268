#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "convbody/errors.hpp"
#include "convbody/intersection.hpp"
#include "convbody/simplex.hpp"
#include "helpers.hpp"

using namespace convbody;
using testing_oracles::TestRand;

namespace {

BodyDescriptor unit_cube(std::size_t n) { return BodyDescriptor::box(Vec(n, 1.0)); }

Vec e(std::size_t n, std::size_t j, double v = 1.0) {
  Vec x(n, 0.0);
  x[j] = v;
  return x;
}

std::vector<LpRow> cube_rows(std::size_t n) {
  std::vector<LpRow> rows;
  for (std::size_t j = 0; j < n; ++j) {
    rows.push_back({e(n, j, 1.0), 1.0});
    rows.push_back({e(n, j, -1.0), 1.0});
  }
  return rows;
}

}  // namespace

TEST_CASE("lens_support closed values") {
  CHECK(lens_support(1.0, 1.0) == 1.0);
  CHECK(lens_support(1.0, -1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(lens_support(1.0, 0.0) == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-15));
  CHECK(lens_support(0.0, 0.3) == 1.0);
  CHECK_THROWS_AS(lens_support(2.5, 0.0), EmptyBodyError);
  CHECK_THROWS_AS(lens_support(-0.1, 0.0), std::invalid_argument);
}

TEST_CASE("lens_support is continuous at the cap boundaries") {
  for (double lambda : {0.1, 0.5, 1.0, 1.7, 1.99}) {
    double h = 0.5 * lambda;
    for (double s : {1.0, -1.0}) {
      double at = lens_support(lambda, s * h);
      double inside = lens_support(lambda, s * h - s * 1e-13);
      CHECK(std::fabs(at - inside) < 1e-12);
    }
    CHECK(lens_support(lambda, h) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(lens_support(lambda, -h) == doctest::Approx(1.0 - h * lambda).epsilon(1e-14));
  }
}

TEST_CASE("simplex on cube support LPs") {
  SupportSolveReport r = lp_support(cube_rows(2), Direction(Vec{1.0, 0.0}));
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.witness[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.method == SolveMethod::simplex);
  CHECK(r.certified_gap <= 1e-10);

  // cube ∩ (0.5 e1 + cube): first coordinate restricted to [-0.5, 1]
  std::vector<LpRow> rows = cube_rows(2);
  for (const LpRow& row : cube_rows(2))
    rows.push_back({row.a, row.b + 0.5 * row.a[0]});
  SupportSolveReport r2 = lp_support(rows, Direction(Vec{-1.0, 0.0}));
  CHECK(r2.value == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("simplex detects infeasible rows") {
  std::vector<LpRow> rows = {{Vec{1.0, 0.0}, -1.0}, {Vec{-1.0, 0.0}, -1.0}};
  CHECK_THROWS_AS(lp_support(rows, Direction(Vec{1.0, 0.0})), EmptyBodyError);
}

TEST_CASE("simplex agrees with brute-force vertex enumeration") {
  TestRand rnd(101);
  for (int inst = 0; inst < 30; ++inst) {
    // random symmetric H-polytope, box rows keep it bounded
    std::vector<Vec> rows;
    Vec offsets;
    for (std::size_t j = 0; j < 3; ++j) {
      rows.push_back(e(3, j, 1.0));
      offsets.push_back(1.0);
      rows.push_back(e(3, j, -1.0));
      offsets.push_back(1.0);
    }
    int extra = 2 + inst % 3;
    for (int k = 0; k < extra; ++k) {
      Vec a = rnd.unit_vector(3);
      double b = rnd.uniform(0.4, 1.2);
      rows.push_back(a);
      offsets.push_back(b);
      rows.push_back(negated(a));
      offsets.push_back(b);
    }
    BodyDescriptor body = BodyDescriptor::hpolytope(rows, offsets);
    std::vector<Vec> verts = testing_oracles::enumerate_vertices(rows, offsets);
    REQUIRE(!verts.empty());
    for (int k = 0; k < 10; ++k) {
      Direction u = Direction::unit(rnd.unit_vector(3));
      double best = -1e300;
      for (const Vec& v : verts) best = std::max(best, dot(v, u.coords()));
      CHECK(support(body, u).value == doctest::Approx(best).epsilon(1e-9));
    }
  }
}

TEST_CASE("shifted intersection validation") {
  BodyDescriptor cube = unit_cube(3);
  CHECK_NOTHROW(ShiftedIntersection(cube, cube, Vec{1.9, 0.0, 0.0}));
  CHECK_THROWS_AS(ShiftedIntersection(cube, cube, Vec{2.1, 0.0, 0.0}), EmptyBodyError);
  BodyDescriptor ball = BodyDescriptor::ball(2, 1.0);
  CHECK_THROWS_AS(ShiftedIntersection(ball, ball, Vec{0.0, 2.5}), EmptyBodyError);
  BodyDescriptor cross = BodyDescriptor::crosspolytope(2, 1.0);
  CHECK_THROWS_AS(ShiftedIntersection(cross, cross, Vec{3.0, 0.0}), EmptyBodyError);
  CHECK_THROWS_AS(ShiftedIntersection(cube, ball, Vec{0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("support_intersection closed paths") {
  BodyDescriptor ball = BodyDescriptor::ball(3, 1.0);
  ShiftedIntersection self(ball, ball, Vec{0.0, 0.0, 0.0});
  TestRand rnd(7);
  for (int k = 0; k < 20; ++k) {
    Direction u = Direction::unit(rnd.unit_vector(3));
    SupportSolveReport r = support_intersection(self, u);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.method == SolveMethod::closed_lens);
  }

  BodyDescriptor cube = unit_cube(3);
  ShiftedIntersection sc(cube, cube, Vec{0.5, 0.0, 0.0});
  SupportSolveReport r = support_intersection(sc, Direction(Vec{-1.0, 0.0, 0.0}));
  CHECK(r.value == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r.method == SolveMethod::closed_box);

  // planar lens rim at a perpendicular direction
  BodyDescriptor b2 = BodyDescriptor::ball(2, 1.0);
  ShiftedIntersection lens(b2, b2, Vec{1.0, 0.0});
  SupportSolveReport rim = support_intersection(lens, Direction(Vec{0.0, 1.0}));
  CHECK(rim.value == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-14));
}

TEST_CASE("support_intersection respects the min upper bound") {
  TestRand rnd(57);
  BodyDescriptor bodies[] = {unit_cube(3), BodyDescriptor::ball(3, 1.0),
                             BodyDescriptor::ellipsoid(Vec{1.0, 1.5, 2.0}),
                             BodyDescriptor::crosspolytope(3, 1.0)};
  for (const auto& body : bodies) {
    for (int k = 0; k < 25; ++k) {
      Vec t = rnd.uniform(0.0, 0.9) * rnd.unit_vector(3);
      ShiftedIntersection s(body, body, t);
      Direction u = Direction::unit(rnd.unit_vector(3));
      double hk = support(body, u).value;
      SupportSolveReport r = support_intersection(s, u);
      CHECK(r.value <= std::min(hk, hk + dot(t, u.coords())) + 1e-8);
      CHECK(gauge(body, r.witness) <= 1.0 + 1e-8);
      CHECK(gauge(body, r.witness - t) <= 1.0 + 1e-8);
    }
  }
}

TEST_CASE("far-cap identity: support drops by exactly |<t,u>|") {
  TestRand rnd(71);
  BodyDescriptor ball = BodyDescriptor::ball(3, 1.0);
  for (int k = 0; k < 200; ++k) {
    double lambda = rnd.uniform(0.05, 1.9);
    Vec x = rnd.unit_vector(3);
    ShiftedIntersection s(ball, ball, lambda * x);
    Direction u = Direction::unit(rnd.unit_vector(3));
    double c = dot(x, u.coords());
    if (c > -0.5 * lambda) continue;
    double expected = 1.0 - std::fabs(lambda * c);
    CHECK(support_intersection(s, u).value == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("box closed form matches the simplex route") {
  TestRand rnd(83);
  BodyDescriptor box = BodyDescriptor::box(Vec{1.0, 0.7, 1.3});
  BodyDescriptor hbox = [] {
    std::vector<Vec> rows;
    Vec offs;
    Vec hs = {1.0, 0.7, 1.3};
    for (std::size_t j = 0; j < 3; ++j) {
      rows.push_back(e(3, j, 1.0));
      offs.push_back(hs[j]);
      rows.push_back(e(3, j, -1.0));
      offs.push_back(hs[j]);
    }
    return BodyDescriptor::hpolytope(rows, offs);
  }();
  for (int k = 0; k < 300; ++k) {
    Vec t = rnd.uniform(0.0, 1.2) * rnd.unit_vector(3);
    Direction u = Direction::unit(rnd.unit_vector(3));
    ShiftedIntersection closed(box, box, t);
    ShiftedIntersection viaLp(hbox, hbox, t);
    double a = support_intersection(closed, u).value;
    double b = support_intersection(viaLp, u).value;
    CHECK(a == doctest::Approx(b).epsilon(1e-9));
  }
}

TEST_CASE("vertex-described pair goes through the simplex and is exact") {
  // diamond ∩ (0.5 e1 + diamond) in the plane, values derived by clipping
  BodyDescriptor diamond = BodyDescriptor::crosspolytope(2, 1.0);
  ShiftedIntersection s(diamond, diamond, Vec{0.5, 0.0});
  CHECK(support_intersection(s, Direction(Vec{1.0, 0.0})).value ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(support_intersection(s, Direction(Vec{-1.0, 0.0})).value ==
        doctest::Approx(0.5).epsilon(1e-9));
  CHECK(support_intersection(s, Direction(Vec{0.0, 1.0})).value ==
        doctest::Approx(0.75).epsilon(1e-9));
  CHECK(support_intersection(s, Direction(Vec{0.0, 1.0})).method == SolveMethod::simplex);
}

TEST_CASE("infconv matches the lens closed form") {
  TestRand rnd(19);
  BodyDescriptor ball = BodyDescriptor::ball(3, 1.0);
  int checked = 0;
  for (int k = 0; k < 300; ++k) {
    double lambda = rnd.uniform(0.0, 1.9);
    Vec x = rnd.unit_vector(3);
    Vec u = rnd.unit_vector(3);
    ShiftedIntersection s(ball, ball, lambda * x);
    double expected = lens_support(lambda, dot(x, u));
    SupportSolveReport r = infconv_support(s, Direction(u), 1e-6);
    CHECK(std::fabs(r.value - expected) <= 1e-5);
    CHECK(r.certified_gap <= 1e-5);
    ++checked;
  }
  CHECK(checked == 300);
}

TEST_CASE("infconv matches the box closed form") {
  TestRand rnd(29);
  BodyDescriptor cube = unit_cube(3);
  for (int k = 0; k < 100; ++k) {
    Vec t{0.3, 0.0, 0.0};
    Direction u = Direction::unit(rnd.unit_vector(3));
    ShiftedIntersection s(cube, cube, t);
    double expected = support_intersection(s, u).value;  // closed-box dispatch
    SupportSolveReport r = infconv_support(s, u, 1e-6);
    CHECK(std::fabs(r.value - expected) <= 1e-5);
  }
}

TEST_CASE("infconv with zero shift recovers min of supports") {
  TestRand rnd(37);
  BodyDescriptor ell = BodyDescriptor::ellipsoid(Vec{1.0, 1.5, 2.0});
  for (int k = 0; k < 50; ++k) {
    Direction u = Direction::unit(rnd.unit_vector(3));
    ShiftedIntersection s(ell, ell, Vec{0.0, 0.0, 0.0});
    SupportSolveReport r = infconv_support(s, u, 1e-8);
    CHECK(std::fabs(r.value - support(ell, u).value) <= 1e-7);
    CHECK(r.iterations == 0);  // one-sided witness settles it
  }
}

TEST_CASE("infconv matches the ellipsoid transform oracle") {
  TestRand rnd(43);
  Vec axes{1.0, 1.5, 2.0};
  BodyDescriptor ell = BodyDescriptor::ellipsoid(axes);
  for (int k = 0; k < 150; ++k) {
    Vec x = rnd.unit_vector(3);
    // keep within the nonempty range for the mapped lens
    double at = std::sqrt(x[0] * x[0] / 1.0 + x[1] * x[1] / 2.25 + x[2] * x[2] / 4.0);
    double lambda = rnd.uniform(0.01, 1.9 / at);
    Vec t = lambda * x;
    ShiftedIntersection s(ell, ell, t);
    Direction u = Direction::unit(rnd.unit_vector(3));
    double expected = testing_oracles::ellipsoid_pair_support_oracle(axes, t, u.coords());
    SupportSolveReport r = infconv_support(s, u, 1e-7);
    CHECK(std::fabs(r.value - expected) <= 1e-6);
  }
}

TEST_CASE("infconv on a contained ball pair returns the small radius") {
  BodyDescriptor small = BodyDescriptor::ball(3, 1.0);
  BodyDescriptor big = BodyDescriptor::ball(3, 3.0);
  ShiftedIntersection s(small, big, Vec{0.5, 0.0, 0.0});  // small ⊂ t + big
  TestRand rnd(53);
  for (int k = 0; k < 20; ++k) {
    Direction u = Direction::unit(rnd.unit_vector(3));
    SupportSolveReport r = infconv_support(s, u, 1e-8);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-7));
  }
}

TEST_CASE("infconv reports non-convergence under an impossible budget") {
  BodyDescriptor ell = BodyDescriptor::ellipsoid(Vec{1.0, 1.5, 2.0});
  ShiftedIntersection s(ell, ell, Vec{0.4, 0.3, 0.0});
  // A band direction so the one-sided shortcut cannot fire.
  Vec x{0.4, 0.3, 0.0};
  Vec perp{-0.3, 0.4, 0.0};
  Direction u = Direction::unit(perp);
  CHECK_THROWS_AS(infconv_support(s, u, 1e-13, 3), NonConvergenceError);
  try {
    infconv_support(s, u, 1e-13, 3);
  } catch (const NonConvergenceError& e) {
    CHECK(e.best_value() > 0.0);
    CHECK(e.certified_gap() > 1e-12);
  }
}
