#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "pillow/errors.hpp"
#include "pillow/exactgeom.hpp"

using namespace pillow;

namespace {

Point pt(long a, long b, long c, long d) { return {make_q(a, b), make_q(c, d)}; }

Q random_q(std::mt19937_64& rng, long range = 40, long max_den = 12) {
  std::uniform_int_distribution<long> num(-range, range), den(1, max_den);
  return make_q(num(rng), den(rng));
}

Point random_point(std::mt19937_64& rng) { return {random_q(rng), random_q(rng)}; }

}  // namespace

TEST_CASE("rationals parse and print") {
  CHECK(parse_q("3/6") == make_q(1, 2));
  CHECK(parse_q("-2") == Q(-2));
  CHECK(parse_q(" 4 / 10 ") == make_q(2, 5));
  CHECK_THROWS_AS(parse_q("1/0"), PreconditionError);
  CHECK_THROWS_AS(parse_q("1/-2"), PreconditionError);
  CHECK_THROWS_AS(parse_q("x"), PreconditionError);
  CHECK(to_string(make_q(-4, 6)) == "-2/3");
  CHECK(mod2(make_q(-1, 3)) == make_q(5, 3));
  CHECK(floor_q(make_q(-1, 3)) == Q(-1));
}

TEST_CASE("normalize examples") {
  CHECK(normalize(pt(0, 1, 3, 2)) == PillowPoint{Q(0), make_q(1, 2)});
  CHECK(normalize(pt(3, 2, 3, 4)) == PillowPoint{make_q(1, 2), make_q(5, 4)});
  CHECK(normalize(pt(1, 2, 1, 2)) == PillowPoint{make_q(1, 2), make_q(1, 2)});
  CHECK(normalize(pt(1, 1, 7, 4)) == PillowPoint{Q(1), make_q(1, 4)});
  CHECK(is_corner(normalize(pt(3, 1, -5, 1))));
  CHECK_FALSE(is_corner(normalize(pt(1, 2, 0, 1))));
}

TEST_CASE("normalize is idempotent and deck-invariant") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    Point p = random_point(rng);
    PillowPoint n = normalize(p);
    Point back{n.gamma, n.theta};
    REQUIRE(normalize(back) == n);
    CHECK(normalize(p + Point{Q(2), Q(0)}) == n);
    CHECK(normalize(p + Point{Q(0), Q(2)}) == n);
    CHECK(normalize(Q(-1) * p) == n);
    CHECK(n.gamma >= 0);
    CHECK(n.gamma <= 1);
    CHECK(n.theta >= 0);
    CHECK(n.theta < 2);
    if (n.gamma == 0 || n.gamma == 1) CHECK(n.theta <= 1);
  }
}

TEST_CASE("group elements") {
  GroupElem r = GroupElem::reflection_through(pt(1, 1, 0, 1));
  CHECK(r.apply(pt(1, 2, 1, 3)) == pt(3, 2, -1, 3));
  CHECK(compose(r, r).is_identity());
  GroupElem t = GroupElem::translation(pt(2, 1, -4, 1));
  CHECK(compose(t, t.inverse()).is_identity());
  CHECK_THROWS_AS(GroupElem::translation(pt(1, 1, 0, 1)), PreconditionError);
  CHECK_THROWS_AS(GroupElem::reflection_through(pt(1, 2, 0, 1)), PreconditionError);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    Point p = random_point(rng);
    GroupElem a = i % 2 ? r : t;
    GroupElem b = GroupElem::reflection_through(pt(i % 5, 1, i % 3, 1));
    CHECK(compose(a, b).apply(p) == a.apply(b.apply(p)));
    CHECK(normalize(a.apply(p)) == normalize(p));
  }
}

TEST_CASE("matrix action") {
  CHECK(apply(Matrix2{1, 0, 1, 1}, pt(1, 2, 1, 4)) == pt(1, 2, 3, 4));
  CHECK(apply(Matrix2{0, 1, 1, 0}, pt(1, 3, 1, 5)) == pt(1, 5, 1, 3));
  LiftPolyline seg;
  seg.vertices = {pt(0, 1, 0, 1), pt(2, 1, 1, 1)};
  LiftPolyline flipped = apply_psl2z(Matrix2{1, 0, 0, -1}, seg);
  CHECK(flipped.vertices[1] == pt(2, 1, -1, 1));
  CHECK_THROWS_AS(apply_psl2z(Matrix2{2, 0, 0, 1}, seg), PreconditionError);

  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pick(0, 4);
  const Matrix2 gens[] = {{0, -1, 1, 0}, {1, 0, 1, 1}, {1, 0, -2, 1}, {-1, 0, 0, 1}, {1, 0, 0, -1}};
  for (int i = 0; i < 100; ++i) {
    Matrix2 m1 = gens[pick(rng)], m2 = gens[pick(rng)];
    LiftPolyline l;
    for (int k = 0; k < 4; ++k) l.vertices.push_back(random_point(rng));
    l.closed = true;
    l.holonomy = GroupElem::translation(pt(2, 1, 4, 1));
    LiftPolyline a = apply_psl2z(multiply(m1, m2), l);
    LiftPolyline b = apply_psl2z(m1, apply_psl2z(m2, l));
    CHECK(a.vertices.size() == b.vertices.size());
    for (std::size_t k = 0; k < a.vertices.size(); ++k) CHECK(a.vertices[k] == b.vertices[k]);
    CHECK(a.holonomy == b.holonomy);
    // Closing edge is transported with the curve.
    CHECK(a.edge_end(3) == apply(multiply(m1, m2), l.edge_end(3)));
  }
}

TEST_CASE("shear examples") {
  ShearSpec s = ShearSpec::tent(ShearDir::Theta, make_q(1, 100));
  CHECK(shear_point(pt(1, 2, 1, 4), s) == pt(1, 2, 23, 100));
  CHECK(shear_point(pt(0, 1, 1, 3), s) == pt(0, 1, 1, 3));
  CHECK(shear_point(pt(1, 1, 1, 3), s) == pt(1, 1, 1, 3));
  CHECK(s.eval(make_q(-1, 2)) == Q(-1));
  CHECK(s.eval(make_q(5, 2)) == Q(1));

  LiftPolyline l;
  l.vertices = {pt(0, 1, 0, 1), pt(3, 1, 1, 1)};
  LiftPolyline same = shear(l, ShearSpec::tent(ShearDir::Gamma, Q(0)));
  CHECK(same.vertices.size() == 2);
  LiftPolyline sh = shear(l, s);
  // Breakpoints at gamma = 1/2, 1, 3/2, 2, 5/2 are inserted.
  CHECK(sh.vertices.size() == 7);
  CHECK(sh.vertices.front() == l.vertices.front());
  CHECK(sh.vertices.back() == l.vertices.back());

  ShearSpec bad;
  bad.profile = {{Q(0), Q(1)}, {Q(1), Q(0)}};
  CHECK_THROWS_AS(bad.validate(), PreconditionError);
}

TEST_CASE("shear by t then -t is the identity") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    LiftPolyline l;
    for (int k = 0; k < 5; ++k) l.vertices.push_back(random_point(rng));
    ShearDir dir = i % 2 ? ShearDir::Theta : ShearDir::Gamma;
    Q t = make_q(1 + i % 7, 64);
    LiftPolyline there = shear(l, ShearSpec::tent(dir, t));
    LiftPolyline back = shear(there, ShearSpec::tent(dir, -t));
    REQUIRE(back.vertices.size() == there.vertices.size());
    for (std::size_t k = 0; k < there.vertices.size(); ++k)
      CHECK(back.vertices[k] == shear_point(there.vertices[k], ShearSpec::tent(dir, -t)));
    // Original vertices come back exactly and appear in order.
    std::size_t j = 0;
    for (const Point& v : back.vertices)
      if (j < l.vertices.size() && v == l.vertices[j]) ++j;
    CHECK(j == l.vertices.size());
  }
}

TEST_CASE("segment intersections") {
  auto h = segment_intersections(pt(0, 1, 0, 1), pt(1, 1, 1, 1), pt(0, 1, 1, 1), pt(1, 1, 0, 1));
  REQUIRE(h.size() == 1);
  CHECK(h[0].point == pt(1, 2, 1, 2));
  CHECK(h[0].transverse);
  CHECK(h[0].ua == make_q(1, 2));

  auto o = segment_intersections(pt(0, 1, 0, 1), pt(1, 1, 0, 1), pt(0, 1, 0, 1), pt(1, 1, 0, 1));
  REQUIRE(o.size() == 1);
  CHECK_FALSE(o[0].transverse);

  CHECK(segment_intersections(pt(0, 1, 0, 1), pt(1, 1, 0, 1), pt(2, 1, 0, 1), pt(3, 1, 0, 1))
            .empty());

  // Touching at an endpoint is reported, never as transverse.
  auto e = segment_intersections(pt(0, 1, 0, 1), pt(1, 1, 1, 1), pt(1, 1, 1, 1), pt(2, 1, 0, 1));
  REQUIRE(e.size() == 1);
  CHECK_FALSE(e[0].transverse);
}

TEST_CASE("orbit intersections see deck images") {
  // b is a translate of the crossing diagonal by (2, 0).
  auto hits = orbit_intersections(pt(0, 1, 0, 1), pt(1, 1, 1, 1), pt(2, 1, 1, 1), pt(3, 1, 0, 1));
  bool found = false;
  for (const OrbitHit& h : hits)
    if (h.hit.transverse && h.hit.point == pt(1, 2, 1, 2)) {
      found = true;
      CHECK(h.g.apply(lerp(pt(2, 1, 1, 1), pt(3, 1, 0, 1), h.hit.ub)) == h.hit.point);
    }
  CHECK(found);
  // Every reported hit lies on both segments.
  std::mt19937_64 rng(9);
  for (int i = 0; i < 50; ++i) {
    Point a0 = random_point(rng), a1 = random_point(rng), b0 = random_point(rng),
          b1 = random_point(rng);
    for (const OrbitHit& h : orbit_intersections(a0, a1, b0, b1)) {
      CHECK(lerp(a0, a1, h.hit.ua) == h.hit.point);
      CHECK(h.g.apply(lerp(b0, b1, h.hit.ub)) == h.hit.point);
    }
  }
}

TEST_CASE("strip map sends [k, k+1] onto [0, 1]") {
  for (long k = -4; k <= 4; ++k) {
    GroupElem g = strip_map(k);
    Point lo = g.apply({Q(k), make_q(1, 3)}), hi = g.apply({Q(k + 1), make_q(1, 3)});
    Q a = lo.g < hi.g ? lo.g : hi.g, b = lo.g < hi.g ? hi.g : lo.g;
    CHECK(a == 0);
    CHECK(b == 1);
    CHECK(normalize(g.apply(pt(2 * k + 1, 2, 1, 5))) == normalize(pt(2 * k + 1, 2, 1, 5)));
  }
}
