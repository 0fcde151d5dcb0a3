#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <symlab/convex.hpp>
#include <symlab/gridfn.hpp>
#include <symlab/support_body.hpp>

using namespace symlab;

namespace {
constexpr double kPi = 3.14159265358979323846;

GridFunction unit_cone(const Grid& g) {
  GridFunction f(g);
  for (int iy = 0; iy < g.n[1]; ++iy)
    for (int ix = 0; ix < g.n[0]; ++ix) {
      const Vec c = g.center(ix, iy);
      f.v[g.idx(ix, iy)] = std::max(0.0, 1.0 - norm(c, 2));
    }
  return f;
}

GridSet gauge_ball(const Grid& g, const ConvexBody& k) {
  GridSet a(g);
  for (int iy = 0; iy < g.n[1]; ++iy)
    for (int ix = 0; ix < g.n[0]; ++ix)
      if (gauge(k, g.center(ix, iy)) <= 1 + 1e-12) a.m[g.idx(ix, iy)] = 1;
  return a;
}
}  // namespace

TEST_CASE("grid construction") {
  const Grid g = make_grid(2, 0.5, {0, 0}, {5, 5});
  CHECK(g.n[0] == 10);
  CHECK(g.n[1] == 10);
  CHECK(g.coord(0, 0) == doctest::Approx(0.25));
  CHECK(g.upper(0) == doctest::Approx(5.0));
  CHECK(g.cell_measure() == doctest::Approx(0.25));

  // Centered grids keep the origin at a cell center and an odd cell count.
  const Grid c = centered_grid(2, 0.25, 1.0);
  CHECK(c.n[0] == 9);
  CHECK(c.n[0] % 2 == 1);
  const Vec mid = c.center(c.n[0] / 2, c.n[1] / 2);
  CHECK(mid[0] == doctest::Approx(0.0));
  CHECK(mid[1] == doctest::Approx(0.0));

  const Grid line = centered_grid(1, 0.1, 0.5);
  CHECK(line.n[1] == 1);
  CHECK(line.n[0] % 2 == 1);
  CHECK(line.cell_measure() == doctest::Approx(0.1));
}

TEST_CASE("basic functionals") {
  const Grid g = make_grid(2, 0.5, {0, 0}, {4.5, 4.5});
  GridFunction f(g);
  f.at(3, 3) = 2.0;
  f.at(4, 3) = 1.0;
  f.at(3, 4) = 1.0;

  CHECK(integral(f) == doctest::Approx(4 * 0.25));
  CHECK(sup_value(f) == doctest::Approx(2.0));
  CHECK(measure(superlevel(f, 1.5)) == doctest::Approx(0.25));
  CHECK(measure(superlevel(f, 1.0)) == doctest::Approx(3 * 0.25));
  CHECK(support_set(f).count() == 3);
  CHECK(padding(f) == 3);
  CHECK(f.at_ext(-1, 0) == 0.0);

  const auto dist = distribution(f);
  REQUIRE(dist.size() == 3);
  CHECK(dist[0].first == 0.0);
  CHECK(dist[0].second == doctest::Approx(3 * 0.25));  // measure{f > 0}
  CHECK(dist[1].first == doctest::Approx(1.0));
  CHECK(dist[1].second == doctest::Approx(0.25));
  CHECK(dist[2].first == doctest::Approx(2.0));
  CHECK(dist[2].second == 0.0);

  const auto vals = distinct_values(f);
  REQUIRE(vals.size() == 2);
  CHECK(vals[0] == doctest::Approx(1.0));

  CHECK(value_multiset(f).size() == g.size());

  GridFunction bad(g);
  bad.at(2, 2) = -0.5;
  CHECK_THROWS_AS(validate_nonneg(bad), std::invalid_argument);
}

TEST_CASE("level snapping") {
  const Grid g = make_grid(2, 0.5, {0, 0}, {3, 3});
  GridFunction f(g);
  f.at(2, 2) = 1.0;
  f.at(3, 3) = 2.0;
  CHECK(snap_level(f, 1.0) == doctest::Approx(0.5));   // midpoint of 0 and 1
  CHECK(snap_level(f, 1.5) == doctest::Approx(1.5));   // already between values
  CHECK(snap_level(f, 1.2) == doctest::Approx(1.5));
  CHECK(snap_level(f, 2.5) == doctest::Approx(2.5));   // above the sup: unchanged
  CHECK(snap_level(f, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("refinement preserves mass and Lipschitz bounds") {
  const Grid g = centered_grid(2, 1.0 / 32, 1.2);
  const GridFunction f = unit_cone(g);
  const GridFunction r = refine_half(f);
  CHECK(r.grid.h == doctest::Approx(g.h / 2));
  CHECK(integral(r) == doctest::Approx(integral(f)).epsilon(0.02));
  CHECK(sup_value(r) <= sup_value(f) + 1e-12);
  CHECK(lip_bound(r) <= lip_bound(f) + 1e-9);
}

TEST_CASE("gradient energy of the cone") {
  const Grid g = centered_grid(2, 1.0 / 64, 1.2);
  const GridFunction f = unit_cone(g);

  // |grad f| = 1 on the unit disk: the quadratic energy is the disk area.
  CHECK(gradient_energy(f, young_power(2.0)) == doctest::Approx(kPi).epsilon(0.01));
  // The forward-difference sup-gradient peaks at the apex kink, where both
  // axis differences are -1.
  CHECK(lip_bound(f) == doctest::Approx(std::sqrt(2.0)));
  CHECK(gradient_energy(f, young_power(2.0), nullptr, true) ==
        doctest::Approx(std::sqrt(2.0)));

  // Restricted to {f >= level}: the integrand is unchanged, the domain is
  // the disk of radius 1 - level.
  const double level = snap_level(f, 0.5);
  CHECK(gradient_energy(f, young_power(2.0), nullptr, false, level) ==
        doctest::Approx(kPi / 4).epsilon(0.03));

  // Anisotropic integrand h_{-K}(grad f) for the regular hexagon of
  // circumradius 0.9: the closed-form integral over the unit disk is
  // (area) * mean of Phi(h_K(u)) = 2.32458.
  std::vector<Vec> vs;
  for (int k = 0; k < 6; ++k) {
    const double a = k * kPi / 3;
    vs.push_back(Vec{{0.9 * std::cos(a), 0.9 * std::sin(a), 0}});
  }
  const ConvexBody hex = make_polytope(2, vs);
  CHECK(gradient_energy(f, young_power(2.0), &hex) ==
        doctest::Approx(2.32458).epsilon(0.01));
}

TEST_CASE("modulus of continuity") {
  const Grid g = centered_grid(2, 1.0 / 64, 1.2);
  const GridFunction f = unit_cone(g);
  const ConvexBody ball = make_ball(2, Vec{{0, 0, 0}}, 1.0);

  // The cone is 1-Lipschitz and radial: the Euclidean d-modulus is d.
  CHECK(modulus(f, ball, 0.2) == doctest::Approx(0.2).epsilon(2 * g.h / 0.2));

  // Square gauge: pairs may sit sqrt(2) d apart in the Euclidean metric.
  const ConvexBody sq = make_box(2, Vec{{-1, -1, 0}}, Vec{{1, 1, 0}});
  CHECK(modulus(f, sq, 0.25) == doctest::Approx(0.25 * std::sqrt(2.0)).epsilon(0.05));

  // Unresolvable scale: no nonzero cell offset fits inside d.
  CHECK_THROWS_AS(modulus(f, ball, 0.5 * g.h), std::runtime_error);
}

TEST_CASE("contraction ramp function") {
  const Grid g = centered_grid(2, 0.1, 1.0);
  GridSet a(g);
  a.set(g.n[0] / 2, g.n[1] / 2);  // the origin cell
  const ConvexBody ball = make_ball(2, Vec{{0, 0, 0}}, 1.0);
  const GridFunction f = kcontraction_test_fn(a, ball, 0.3);
  CHECK(f.at(g.n[0] / 2, g.n[1] / 2) == doctest::Approx(0.3));
  CHECK(f.at(g.n[0] / 2 + 2, g.n[1] / 2) == doctest::Approx(0.1));
  CHECK(f.at(g.n[0] / 2 + 4, g.n[1] / 2) == 0.0);
}

TEST_CASE("graph area of the cone") {
  const Grid g = centered_grid(2, 1.0 / 64, 1.2);
  const GridFunction f = unit_cone(g);
  // sqrt(1 + |grad|^2) = sqrt(2) over the unit disk.
  CHECK(graph_area(f, snap_level(f, 1e-6)) ==
        doctest::Approx(std::sqrt(2.0) * kPi).epsilon(0.03));
}

TEST_CASE("boundary content of the square") {
  // Perimeter of the side-1 square, estimated from the documented ladder.
  const double h = 1.0 / 128;
  const Grid g = centered_grid(2, h, 0.9);
  const GridSet a = gauge_ball(g, make_box(2, Vec{{-0.5, -0.5, 0}}, Vec{{0.5, 0.5, 0}}));
  const ConvexBody ball = make_ball(2, Vec{{0, 0, 0}}, 1.0);
  const ContentEstimate est = outer_minkowski_content(a, ball, {8 * h, 16 * h, 32 * h});
  CHECK(est.value == doctest::Approx(4.0).epsilon(0.03));
  CHECK(est.extrapolation == "richardson");
  REQUIRE(est.epsilons.size() == 3);
  CHECK(est.epsilons[0] > est.epsilons[1]);
  CHECK(est.epsilons[1] > est.epsilons[2]);
  CHECK(est.quotients.size() == 3);
}

TEST_CASE("boundary content of the disk") {
  const double h = 1.0 / 128;
  const Grid g = centered_grid(2, h, 1.4);
  const GridSet a = gauge_ball(g, make_ball(2, Vec{{0, 0, 0}}, 1.0));
  const ConvexBody ball = make_ball(2, Vec{{0, 0, 0}}, 1.0);

  CHECK(outer_minkowski_content(a, ball, default_content_eps(h)).value ==
        doctest::Approx(2 * kPi).epsilon(0.03));

  // Content relative to the square body: integral of the square's support
  // function over the circle, i.e. 8.
  const ConvexBody sq = make_box(2, Vec{{-1, -1, 0}}, Vec{{1, 1, 0}});
  CHECK(outer_minkowski_content(a, sq, {8 * h, 12 * h, 16 * h}).value ==
        doctest::Approx(8.0).epsilon(0.04));

  // Single epsilon: the raw quotient, no extrapolation.
  const ContentEstimate single = outer_minkowski_content(a, ball, {8 * h});
  CHECK(single.extrapolation == "none");
  CHECK(single.value == doctest::Approx(single.quotients[0]));

  CHECK_THROWS_AS(outer_minkowski_content(a, ball, {0.5 * h}), std::invalid_argument);
  CHECK_THROWS_AS(outer_minkowski_content(a, ball, std::vector<double>{}),
                  std::invalid_argument);
  // A dilation that would leave the grid throws instead of clipping.
  CHECK_THROWS_AS(outer_minkowski_content(a, ball, {64 * h}), std::runtime_error);
}

TEST_CASE("default content ladders") {
  const auto flat = default_content_eps(0.01);
  REQUIRE(flat.size() == 5);
  CHECK(flat.front() == doctest::Approx(0.08));
  CHECK(flat.back() == doctest::Approx(0.32));
  const auto solid = default_content_eps(0.01, 3);
  REQUIRE(solid.size() == 4);
  CHECK(solid.front() == doctest::Approx(0.04));
  CHECK(solid.back() == doctest::Approx(0.08));
}

TEST_CASE("voxel sets") {
  VoxelSet v;
  v.n = {70, 8, 8};
  v.h = 0.5;
  v.words.assign(v.words_per_row() * v.n[1] * v.n[2], 0);
  v.set_range(2, 3, 3, 10);
  CHECK(v.count() == 8);
  CHECK(v.get(3, 2, 3));
  CHECK(v.get(10, 2, 3));
  CHECK_FALSE(v.get(11, 2, 3));
  CHECK_FALSE(v.get(3, 2, 4));
  v.set_range(2, 3, 60, 69);  // crosses the word boundary
  CHECK(v.count() == 18);
  CHECK(v.get(64, 2, 3));
  CHECK(measure(v) == doctest::Approx(18 * 0.125));
}

TEST_CASE("subgraph voxelization and dilation") {
  const Grid g = centered_grid(2, 1.0 / 32, 1.2);
  const GridFunction f = unit_cone(g);
  const double level = snap_level(f, 0.5);
  const VoxelSet v = voxelize_subgraph(f, level, 4);
  // Volume between the level plane and the cone: pi * 0.5^2 * 0.5 / 3.
  CHECK(measure(v) == doctest::Approx(kPi / 24).epsilon(0.06));

  // Dilating a single voxel by 2h of the unit ball covers the 33 integer
  // offsets with |z| <= 2.
  VoxelSet one;
  one.n = {9, 9, 9};
  one.h = 0.5;
  one.words.assign(one.words_per_row() * 81, 0);
  one.set_range(4, 4, 4, 4);
  const AnyBody ball = make_ball(3, Vec{{0, 0, 0}}, 1.0);
  CHECK(dilate(one, ball, 2 * one.h).count() == 33);

  VoxelSet tight;
  tight.n = {5, 5, 5};
  tight.h = 0.5;
  tight.words.assign(tight.words_per_row() * 25, 0);
  tight.set_range(2, 2, 2, 2);
  CHECK_THROWS_AS(dilate(tight, ball, 2 * tight.h), std::runtime_error);
}

TEST_CASE("subgraph content routes agree for the cone") {
  const Grid g = centered_grid(2, 1.0 / 64, 1.2);
  const GridFunction f = unit_cone(g);
  const double level = snap_level(f, 0.5);
  const AnyBody ball = make_ball(3, Vec{{0, 0, 0}}, 1.0);
  const SubgraphContent sc = subgraph_content(f, level, ball);
  // Closed form of the truncated-cone boundary content over the level plane.
  const double want = (kPi / 4) * (1 + std::sqrt(2.0));
  CHECK(sc.graph_integral == doctest::Approx(want).epsilon(0.03));
  CHECK(sc.dilation.value == doctest::Approx(sc.graph_integral).epsilon(0.05));
}

TEST_CASE("phi-body support identity") {
  const ConvexBody sq = make_box(2, Vec{{-1, -1, 0}}, Vec{{1, 1, 0}});
  const SupportBody c = build_phi_body(young_power(2.0), sq, 2.0);
  CHECK(c.dim == 3);
  // h_C(y, 1) = 1 + b Phi(h_K(y)) whenever h_K(y) <= M.
  for (const Vec y : {Vec{{0.3, 0.1, 0}}, Vec{{-0.5, 0.4, 0}}, Vec{{0.05, -0.2, 0}}}) {
    const double hk = support(sq, y);
    REQUIRE(hk <= c.M);
    const Vec z{{y[0], y[1], 1.0}};
    CHECK(support(c, z) ==
          doctest::Approx(1 + c.b * yeval(c.phi, hk)).epsilon(1e-12));
  }
  // Horizontal sections are dilates of K.
  CHECK(section_scale(c, 0.0) == doctest::Approx(c.b * c.m));
  CHECK(section_scale(c, 1.0) >= 0.0);
  // The AnyBody wrappers agree with the direct calls.
  const AnyBody any = c;
  const Vec probe{{0.2, -0.1, 0.7}};
  CHECK(support(any, probe) == doctest::Approx(support(c, probe)));
  CHECK(gauge(any, probe) == doctest::Approx(gauge(c, probe)));
  CHECK(body_dim(any) == 3);
}
