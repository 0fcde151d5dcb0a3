#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <symlab/convex.hpp>
#include <symlab/rearrange.hpp>
#include <symlab/rng.hpp>

using namespace symlab;

namespace {
GridFunction unit_cone(const Grid& g) {
  GridFunction f(g);
  for (int iy = 0; iy < g.n[1]; ++iy)
    for (int ix = 0; ix < g.n[0]; ++ix) {
      const Vec c = g.center(ix, iy);
      f.v[g.idx(ix, iy)] = std::max(0.0, 1.0 - norm(c, 2));
    }
  return f;
}

// Random positive values on an interior block, zero padding elsewhere.
GridFunction random_fn(const Grid& g, std::uint64_t seed) {
  Rng rng{seed};
  GridFunction f(g);
  const int mx = g.n[0] / 4, my = g.n[1] / 4;
  for (int iy = my; iy < g.n[1] - my; ++iy)
    for (int ix = mx; ix < g.n[0] - mx; ++ix)
      f.v[g.idx(ix, iy)] = rng.uniform(0.1, 1.0);
  return f;
}
}  // namespace

TEST_CASE("steiner rearranges each line about the center") {
  const Grid g = centered_grid(2, 1.0, 3.5);  // 7x7, unit cells
  GridFunction f(g);
  f.at(1, 3) = 0.3;
  f.at(2, 3) = 0.9;
  f.at(3, 3) = 0.5;
  const GridFunction out = apply(steiner(0), f);
  CHECK(out.at(3, 3) == doctest::Approx(0.9));  // largest at the line
  CHECK(out.at(2, 3) == doctest::Approx(0.5));  // ties break toward low index
  CHECK(out.at(4, 3) == doctest::Approx(0.3));
  CHECK(out.at(1, 3) == 0.0);
  // Other rows stay empty.
  for (int ix = 0; ix < 7; ++ix) CHECK(out.at(ix, 2) == 0.0);
}

TEST_CASE("symmetric decreasing fixes the cone") {
  const Grid g = centered_grid(2, 1.0 / 32, 1.3);
  const GridFunction f = unit_cone(g);
  const GridFunction out = apply(sym_decreasing(), f);
  CHECK(out.v == f.v);  // already radially decreasing: transport is exact

  // The ball alias produces the same transport.
  const GridFunction out2 = apply(schwarz(), f);
  CHECK(out2.v == f.v);
}

TEST_CASE("symmetric decreasing centers an off-center cross") {
  const Grid g = centered_grid(2, 1.0, 3.5);  // 7x7
  GridSet a(g);
  // A plus-shape around (5, 2) (values at the grid edge are fine pre-image).
  a.set(5, 2);
  a.set(4, 2);
  a.set(5, 1);
  a.set(5, 3);
  a.set(6, 2);
  const GridSet ta = apply_set(sym_decreasing(), a);
  CHECK(ta.count() == 5);
  CHECK(ta.has(3, 3));  // center cell first
  CHECK(ta.has(2, 3));
  CHECK(ta.has(3, 2));
  CHECK(ta.has(4, 3));
  CHECK(ta.has(3, 4));
}

TEST_CASE("every kind preserves the value multiset exactly") {
  const Grid g = centered_grid(2, 0.1, 1.6);
  const GridFunction f = random_fn(g, 31);
  const ConvexBody sq = make_box(2, Vec{{-1, -1, 0}}, Vec{{1, 1, 0}});
  const std::vector<Rearrangement> ops = {
      sym_decreasing(), schwarz(), steiner(1), k_schwarz(sq),
      polarization(0, g.n[0] / 2.0 + 1.5, false),
      composite({steiner(0), polarization(1, g.n[1] / 2.0 - 0.5, true)})};
  for (const auto& t : ops) {
    const GridFunction out = apply(t, f);
    CHECK(value_multiset(out) == value_multiset(f));
  }
}

TEST_CASE("set images are gauge-lower sets") {
  const Grid g = centered_grid(2, 0.125, 2.0);
  GridSet a(g);
  for (int iy = 0; iy < g.n[1]; ++iy)
    for (int ix = 0; ix < g.n[0]; ++ix)
      if (norm(g.center(ix, iy), 2) <= 1.0) a.m[g.idx(ix, iy)] = 1;

  const ConvexBody sq = make_box(2, Vec{{-1, -1, 0}}, Vec{{1, 1, 0}});
  const GridSet ta = apply_set(k_schwarz(sq), a);
  CHECK(ta.count() == a.count());

  double max_in = 0, min_out = 1e300;
  for (int iy = 0; iy < g.n[1]; ++iy)
    for (int ix = 0; ix < g.n[0]; ++ix) {
      const double s = gauge(sq, g.center(ix, iy));
      if (ta.has(ix, iy))
        max_in = std::max(max_in, s);
      else
        min_out = std::min(min_out, s);
    }
  CHECK(max_in <= min_out + 1e-12);
}

TEST_CASE("polarization exchanges reflected pairs") {
  const Grid g = make_grid(2, 1.0, {0, 0}, {6, 3});
  GridFunction f(g);
  f.at(2, 1) = 0.8;
  f.at(3, 1) = 0.2;

  // Plane through x = 3: pairs (2,3); the positive side keeps the max.
  const GridFunction pos = polarize(f, 0, 3.0, true);
  CHECK(pos.at(2, 1) == doctest::Approx(0.2));
  CHECK(pos.at(3, 1) == doctest::Approx(0.8));

  const GridFunction neg = polarize(f, 0, 3.0, false);
  CHECK(neg.at(2, 1) == doctest::Approx(0.8));
  CHECK(neg.at(3, 1) == doctest::Approx(0.2));

  // Polarization is idempotent.
  const GridFunction twice = polarize(pos, 0, 3.0, true);
  CHECK(twice.v == pos.v);

  // A kept value whose mirror lies outside the grid cannot travel there.
  GridFunction edge(g);
  edge.at(0, 1) = 1.0;
  CHECK_THROWS_AS(polarize(edge, 0, 5.5, true), std::runtime_error);

  // The plane must sit on a half-cell coordinate.
  CHECK_THROWS_AS(polarize(f, 0, 3.25, true), std::invalid_argument);
  CHECK_THROWS_AS(polarization(0, 3.25, true), std::invalid_argument);
  CHECK_THROWS_AS(polarization(2, 3.0, true), std::invalid_argument);
}

TEST_CASE("margin overflow instead of clipped images") {
  const Grid g = centered_grid(2, 1.0, 3.5);
  GridFunction f(g);
  for (int ix = 0; ix < g.n[0]; ++ix) f.at(ix, 3) = 1.0;  // a full row
  CHECK_THROWS_AS(apply(steiner(0), f), std::runtime_error);

  GridFunction full(g);  // more cells than the interior can hold
  std::fill(full.v.begin(), full.v.end(), 1.0);
  CHECK_THROWS_AS(apply(sym_decreasing(), full), std::runtime_error);
}

TEST_CASE("input validation") {
  const Grid g = centered_grid(2, 1.0, 2.5);
  GridFunction f(g);
  f.at(2, 2) = -1.0;
  CHECK_THROWS_AS(apply(sym_decreasing(), f), std::invalid_argument);
  CHECK_THROWS_AS(k_schwarz(make_ball(2, Vec{{1.5, 0, 0}}, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(steiner(3), std::invalid_argument);
  CHECK_THROWS_AS(composite({}), std::invalid_argument);
}

TEST_CASE("layer-cake reconstruction matches direct transport") {
  const Grid g = centered_grid(2, 0.2, 1.6);
  const GridFunction f = random_fn(g, 77);  // distinct values almost surely
  for (const auto& t : {sym_decreasing(), steiner(0)}) {
    const GridFunction direct = apply(t, f);
    const GridFunction stacked = layer_cake_reconstruct(set_map(t), f);
    CHECK(l2_distance(direct, stacked) == doctest::Approx(0.0));
  }
}

TEST_CASE("polarization flow contracts toward the symmetric rearrangement") {
  const Grid g = centered_grid(2, 1.0 / 16, 1.6);
  GridFunction f(g);
  Rng rng{9};
  for (int iy = g.n[1] / 4; iy < g.n[1] / 2; ++iy)
    for (int ix = g.n[0] / 3; ix < 2 * g.n[0] / 3; ++ix)
      f.v[g.idx(ix, iy)] = rng.uniform(0.2, 1.0);

  const FlowTrace tr = polarization_flow(f, 120, 4);
  REQUIRE(tr.distance.size() == 121);
  REQUIRE(tr.reference_defect.size() == 120);
  for (std::size_t i = 0; i + 1 < tr.distance.size(); ++i)
    CHECK(tr.distance[i + 1] <= tr.distance[i] + tr.reference_defect[i] + 1e-9);
  CHECK(tr.distance.back() < tr.distance.front());

  // Deterministic in the seed.
  const FlowTrace again = polarization_flow(f, 120, 4);
  CHECK(again.distance == tr.distance);
  const FlowTrace other = polarization_flow(f, 120, 5);
  CHECK(other.distance != tr.distance);
}
