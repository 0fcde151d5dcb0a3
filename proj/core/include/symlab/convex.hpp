#pragma once

#include <vector>

#include "symlab/grid.hpp"

namespace symlab {

// Compact convex body with the origin in its interior.  Balls are supported
// in dimensions 1-3; polytopes (counterclockwise vertex list in 2D, interval
// endpoints in 1D) in dimensions 1-2.
struct ConvexBody {
  enum class Shape { ball, polytope };

  int dim = 2;
  Shape shape = Shape::ball;

  // Ball parameters.
  Vec center{{0, 0, 0}};
  double radius = 0;

  // Polytope parameters: vertices plus cached facet data (outward normals
  // and offsets, normals not normalized; gauge/support use ratios only).
  std::vector<Vec> vertices;
  std::vector<Vec> facet_normals;
  std::vector<double> facet_offsets;
};

ConvexBody make_ball(int dim, const Vec& center, double radius);
// 2D: vertices in counterclockwise strictly convex position surrounding o.
// 1D: exactly two endpoints a < 0 < b (given as x components).
ConvexBody make_polytope(int dim, std::vector<Vec> vertices);
// Axis-aligned box [lo, hi] per axis containing o (convenience; a polytope).
ConvexBody make_box(int dim, const Vec& lo, const Vec& hi);

// h_K(x) = sup { x . y : y in K }.
double support(const ConvexBody& k, const Vec& x);

// Minkowski gauge ||x||_K = inf { t >= 0 : x in tK }.
double gauge(const ConvexBody& k, const Vec& x);

// Radial function: largest t with t*x in K.  Throws for x = 0.
double radial(const ConvexBody& k, const Vec& x);

// Polar body { y : x . y <= 1 for all x in K }.  Exact for polytopes and
// origin-centered balls.  An off-center 2D ball is replaced by a 720-gon
// circumscribed via its support function (documented approximation, relative
// error below 4e-5); off-center balls in other dimensions are rejected.
ConvexBody polar(const ConvexBody& k);

// Reflection -K.
ConvexBody negate(const ConvexBody& k);

// Largest r with rB^n inside K and smallest R with K inside RB^n.
double inradius_at_o(const ConvexBody& k);
double circumradius(const ConvexBody& k);

// Whether K = -K (balls: centered at o; polytopes: vertex set symmetric).
bool is_o_symmetric(const ConvexBody& k);

// Integer cell offsets delta with gauge(K, delta * h) <= d + slack.  Used by
// dilations and modulus scans; the membership slack is 1e-12.
std::vector<std::array<int, 2>> stencil_offsets(const ConvexBody& k, double d, double h);

// Minkowski dilation on the grid: cells c with c = a + z for some cell a of
// A and offset z with gauge(K, z) <= d.  Throws if the result would reach
// the outermost cell ring (padding violation).
GridSet dilate_set(const GridSet& a, const ConvexBody& k, double d);

}  // namespace symlab
