#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <symlab/convex.hpp>

using namespace symlab;

namespace {
constexpr double kPi = 3.14159265358979323846;

ConvexBody unit_square() {
  return make_box(2, Vec{{-1, -1, 0}}, Vec{{1, 1, 0}});
}

ConvexBody hexagon(double r) {
  std::vector<Vec> vs;
  for (int k = 0; k < 6; ++k) {
    const double a = k * kPi / 3;
    vs.push_back(Vec{{r * std::cos(a), r * std::sin(a), 0}});
  }
  return make_polytope(2, vs);
}
}  // namespace

TEST_CASE("centered ball support, gauge, radial") {
  const ConvexBody b = make_ball(2, Vec{{0, 0, 0}}, 2.0);
  CHECK(support(b, Vec{{3, 4, 0}}) == doctest::Approx(10.0));   // 2 * |(3,4)|
  CHECK(gauge(b, Vec{{3, 4, 0}}) == doctest::Approx(2.5));      // |(3,4)| / 2
  CHECK(radial(b, Vec{{3, 4, 0}}) == doctest::Approx(0.4));     // 2 / |(3,4)|
  CHECK(gauge(b, Vec{{0, 0, 0}}) == 0.0);
  CHECK_THROWS_AS(radial(b, Vec{{0, 0, 0}}), std::invalid_argument);
}

TEST_CASE("off-center ball geometry") {
  // Disk centered at (1,0) with radius 2 spans [-1,3] x [-2,2].
  const ConvexBody b = make_ball(2, Vec{{1, 0, 0}}, 2.0);
  CHECK(support(b, Vec{{1, 0, 0}}) == doctest::Approx(3.0));
  CHECK(support(b, Vec{{-1, 0, 0}}) == doctest::Approx(1.0));
  CHECK(support(b, Vec{{0, 1, 0}}) == doctest::Approx(2.0));
  CHECK(gauge(b, Vec{{3, 0, 0}}) == doctest::Approx(1.0));
  CHECK(gauge(b, Vec{{-1, 0, 0}}) == doctest::Approx(1.0));
  CHECK(radial(b, Vec{{1, 0, 0}}) == doctest::Approx(3.0));
  CHECK(inradius_at_o(b) == doctest::Approx(1.0));
  CHECK(circumradius(b) == doctest::Approx(3.0));
  CHECK_FALSE(is_o_symmetric(b));

  // gauge(k, radial(k,x) * x) == 1 for any direction.
  const Vec dir{{-0.3, 0.8, 0}};
  const double t = radial(b, dir);
  CHECK(gauge(b, vscale(dir, t)) == doctest::Approx(1.0));
}

TEST_CASE("ball construction validation") {
  CHECK_THROWS_AS(make_ball(2, Vec{{0, 0, 0}}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_ball(2, Vec{{2, 0, 0}}, 1.0), std::invalid_argument);  // o not interior
  CHECK_THROWS_AS(make_ball(4, Vec{{0, 0, 0}}, 1.0), std::invalid_argument);
}

TEST_CASE("square polytope support and gauge") {
  const ConvexBody sq = unit_square();
  CHECK(support(sq, Vec{{1, 1, 0}}) == doctest::Approx(2.0));  // l1 norm
  CHECK(support(sq, Vec{{1, 0, 0}}) == doctest::Approx(1.0));
  CHECK(gauge(sq, Vec{{0.5, 0.25, 0}}) == doctest::Approx(0.5));  // sup norm
  CHECK(gauge(sq, Vec{{1, 1, 0}}) == doctest::Approx(1.0));
  CHECK(radial(sq, Vec{{2, 0, 0}}) == doctest::Approx(0.5));
  CHECK(inradius_at_o(sq) == doctest::Approx(1.0));
  CHECK(circumradius(sq) == doctest::Approx(std::sqrt(2.0)));
  CHECK(is_o_symmetric(sq));
}

TEST_CASE("asymmetric box") {
  const ConvexBody box = make_box(2, Vec{{-1, -0.5, 0}}, Vec{{2, 1, 0}});
  CHECK(support(box, Vec{{1, 0, 0}}) == doctest::Approx(2.0));
  CHECK(support(box, Vec{{-1, 0, 0}}) == doctest::Approx(1.0));
  CHECK(gauge(box, Vec{{2, 0, 0}}) == doctest::Approx(1.0));
  CHECK(gauge(box, Vec{{-1, 0, 0}}) == doctest::Approx(1.0));
  CHECK(radial(box, Vec{{0, 1, 0}}) == doctest::Approx(1.0));
  CHECK_FALSE(is_o_symmetric(box));

  // negate flips the support function.
  const ConvexBody neg = negate(box);
  CHECK(support(neg, Vec{{1, 0, 0}}) == doctest::Approx(1.0));
  CHECK(support(neg, Vec{{-1, 0, 0}}) == doctest::Approx(2.0));
  CHECK(support(neg, Vec{{0, 1, 0}}) == doctest::Approx(0.5));
}

TEST_CASE("regular hexagon radii") {
  const ConvexBody hex = hexagon(0.9);
  CHECK(circumradius(hex) == doctest::Approx(0.9));
  CHECK(inradius_at_o(hex) == doctest::Approx(0.9 * std::sqrt(3.0) / 2));
  CHECK(is_o_symmetric(hex));
  // Support in a vertex direction is the vertex radius; in an edge-normal
  // direction it is the inradius.
  CHECK(support(hex, Vec{{1, 0, 0}}) == doctest::Approx(0.9));
  const double a = kPi / 6;  // edge normal between the 0- and 60-degree vertices
  CHECK(support(hex, Vec{{std::cos(a), std::sin(a), 0}}) ==
        doctest::Approx(0.9 * std::sqrt(3.0) / 2));
}

TEST_CASE("1D interval body") {
  const ConvexBody iv = make_polytope(1, {Vec{{-0.5, 0, 0}}, Vec{{2, 0, 0}}});
  CHECK(support(iv, Vec{{1, 0, 0}}) == doctest::Approx(2.0));
  CHECK(support(iv, Vec{{-1, 0, 0}}) == doctest::Approx(0.5));
  CHECK(gauge(iv, Vec{{1, 0, 0}}) == doctest::Approx(0.5));
  CHECK(gauge(iv, Vec{{-1, 0, 0}}) == doctest::Approx(2.0));
  CHECK_FALSE(is_o_symmetric(iv));
  CHECK(is_o_symmetric(make_polytope(1, {Vec{{-1, 0, 0}}, Vec{{1, 0, 0}}})));
}

TEST_CASE("polytope validation") {
  CHECK_THROWS_AS(make_polytope(2, {Vec{{1, 0, 0}}, Vec{{0, 1, 0}}}), std::invalid_argument);
  // Clockwise orientation is rejected.
  CHECK_THROWS_AS(make_polytope(2, {Vec{{1, -1, 0}}, Vec{{-1, -1, 0}}, Vec{{-1, 1, 0}},
                                    Vec{{1, 1, 0}}}),
                  std::invalid_argument);
  // Origin outside.
  CHECK_THROWS_AS(make_polytope(2, {Vec{{1, 1, 0}}, Vec{{2, 1, 0}}, Vec{{2, 2, 0}}}),
                  std::invalid_argument);
  // Collinear triple (not strictly convex).
  CHECK_THROWS_AS(make_polytope(2, {Vec{{1, -1, 0}}, Vec{{1, 0, 0}}, Vec{{1, 1, 0}},
                                    Vec{{-1, 0, 0}}}),
                  std::invalid_argument);
  // 1D: both endpoints on one side of the origin.
  CHECK_THROWS_AS(make_polytope(1, {Vec{{0.5, 0, 0}}, Vec{{2, 0, 0}}}),
                  std::invalid_argument);
}

TEST_CASE("polar bodies") {
  const ConvexBody sq = unit_square();
  const ConvexBody sq_polar = polar(sq);
  // h_{K^o} = gauge_K: the polar of the sup-norm square is the l1 cross.
  CHECK(support(sq_polar, Vec{{1, 1, 0}}) == doctest::Approx(1.0));
  CHECK(support(sq_polar, Vec{{1, 0, 0}}) == doctest::Approx(1.0));
  CHECK(gauge(sq_polar, Vec{{0.5, 0.5, 0}}) == doctest::Approx(1.0));  // l1 norm

  // The bipolar recovers the square.
  const ConvexBody back = polar(sq_polar);
  for (int i = 0; i < 12; ++i) {
    const double a = 2 * kPi * i / 12;
    const Vec u{{std::cos(a), std::sin(a), 0}};
    CHECK(support(back, u) == doctest::Approx(support(sq, u)));
  }

  const ConvexBody ball = make_ball(2, Vec{{0, 0, 0}}, 2.0);
  CHECK(support(polar(ball), Vec{{1, 0, 0}}) == doctest::Approx(0.5));
  CHECK(polar(ball).shape == ConvexBody::Shape::ball);

  // Off-center 2D disk: polygonal polar approximates h = gauge within the
  // documented 4e-5 relative error.
  const ConvexBody off = make_ball(2, Vec{{0.5, 0, 0}}, 1.0);
  const ConvexBody off_polar = polar(off);
  for (int i = 0; i < 16; ++i) {
    const double a = 2 * kPi * i / 16;
    const Vec u{{std::cos(a), std::sin(a), 0}};
    const double want = gauge(off, u);
    CHECK(std::abs(support(off_polar, u) - want) <= 1e-4 * want);
  }

  CHECK_THROWS_AS(polar(make_ball(3, Vec{{0.2, 0, 0}}, 1.0)), std::invalid_argument);
}

TEST_CASE("stencil offsets") {
  const ConvexBody ball = make_ball(2, Vec{{0, 0, 0}}, 1.0);
  // |z| <= 2.5: the 5x5 block minus its four corners.
  auto offs = stencil_offsets(ball, 2.5 * 0.1, 0.1);
  CHECK(offs.size() == 21);

  const ConvexBody sq = unit_square();
  // sup-norm <= 1.5: the 3x3 block.
  CHECK(stencil_offsets(sq, 1.5 * 0.1, 0.1).size() == 9);

  bool has_origin = false;
  for (auto& z : offs) has_origin = has_origin || (z[0] == 0 && z[1] == 0);
  CHECK(has_origin);
  CHECK_THROWS_AS(stencil_offsets(ball, -0.1, 0.1), std::invalid_argument);
}

TEST_CASE("grid dilation by a ball") {
  const Grid g = centered_grid(2, 1.0, 4.5);  // 9x9, unit cells
  GridSet a(g);
  a.set(4, 4);
  const GridSet d = dilate_set(a, make_ball(2, Vec{{0, 0, 0}}, 1.0), 2.0);
  CHECK(d.count() == 13);  // integer points with |z| <= 2
  CHECK(d.has(4, 4));
  CHECK(d.has(6, 4));
  CHECK_FALSE(d.has(6, 6));

  // Reaching the outer ring throws instead of clipping.
  const Grid small = centered_grid(2, 1.0, 2.5);  // 5x5
  GridSet b(small);
  b.set(2, 2);
  CHECK_THROWS_AS(dilate_set(b, make_ball(2, Vec{{0, 0, 0}}, 1.0), 2.0), std::runtime_error);
}

TEST_CASE("support is sublinear on samples") {
  const ConvexBody hex = hexagon(1.3);
  const ConvexBody off = make_ball(2, Vec{{0.4, -0.2, 0}}, 1.0);
  for (const ConvexBody* k : {&hex, &off}) {
    for (int i = 0; i < 8; ++i) {
      const double a = 2 * kPi * i / 8, b = 2 * kPi * ((i * 3) % 8) / 8;
      const Vec u{{std::cos(a), std::sin(a), 0}}, v{{std::cos(b), std::sin(b), 0}};
      CHECK(support(*k, vadd(u, v)) <= support(*k, u) + support(*k, v) + 1e-12);
    }
  }
}
