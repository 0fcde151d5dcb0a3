#include "symlab/convex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace symlab {

namespace {
constexpr double kMembershipSlack = 1e-12;
constexpr double kPi = 3.14159265358979323846;

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

double cross2(const Vec& a, const Vec& b) { return a[0] * b[1] - a[1] * b[0]; }
}  // namespace

ConvexBody make_ball(int dim, const Vec& center, double radius) {
  require(dim >= 1 && dim <= 3, "ball: dim must be 1, 2, or 3");
  require(radius > 0 && std::isfinite(radius), "ball: radius must be positive");
  Vec c = center;
  for (int i = dim; i < 3; ++i) c[i] = 0;
  require(norm(c, dim) < radius, "ball: origin must be interior");
  ConvexBody k;
  k.dim = dim;
  k.shape = ConvexBody::Shape::ball;
  k.center = c;
  k.radius = radius;
  return k;
}

ConvexBody make_polytope(int dim, std::vector<Vec> vertices) {
  require(dim >= 1 && dim <= 2, "polytope: only dims 1 and 2 are supported");
  ConvexBody k;
  k.dim = dim;
  k.shape = ConvexBody::Shape::polytope;
  if (dim == 1) {
    require(vertices.size() == 2, "polytope: 1D body needs exactly two endpoints");
    double a = vertices[0][0], b = vertices[1][0];
    if (a > b) std::swap(a, b);
    require(a < 0 && b > 0, "polytope: origin must be interior");
    k.vertices = {Vec{a, 0, 0}, Vec{b, 0, 0}};
    k.facet_normals = {Vec{1, 0, 0}, Vec{-1, 0, 0}};
    k.facet_offsets = {b, -a};
    return k;
  }
  const std::size_t nv = vertices.size();
  require(nv >= 3, "polytope: need at least three vertices");
  for (auto& v : vertices) v[2] = 0;
  for (std::size_t i = 0; i < nv; ++i) {
    const Vec& p = vertices[i];
    const Vec& q = vertices[(i + 1) % nv];
    const Vec& r = vertices[(i + 2) % nv];
    require(cross2(vsub(q, p), vsub(r, q)) > 0,
            "polytope: vertices must be in strictly convex counterclockwise position");
  }
  k.vertices = vertices;
  for (std::size_t i = 0; i < nv; ++i) {
    const Vec& p = vertices[i];
    const Vec& q = vertices[(i + 1) % nv];
    Vec e = vsub(q, p);
    Vec nrm{e[1], -e[0], 0};  // outward normal of a counterclockwise edge
    double off = dot(nrm, p, 2);
    require(off > 0, "polytope: origin must be interior");
    k.facet_normals.push_back(nrm);
    k.facet_offsets.push_back(off);
  }
  return k;
}

ConvexBody make_box(int dim, const Vec& lo, const Vec& hi) {
  require(dim >= 1 && dim <= 2, "box: only dims 1 and 2 are supported");
  if (dim == 1) return make_polytope(1, {Vec{lo[0], 0, 0}, Vec{hi[0], 0, 0}});
  return make_polytope(2, {Vec{hi[0], lo[1], 0}, Vec{hi[0], hi[1], 0},
                           Vec{lo[0], hi[1], 0}, Vec{lo[0], lo[1], 0}});
}

double support(const ConvexBody& k, const Vec& x) {
  if (k.shape == ConvexBody::Shape::ball)
    return dot(x, k.center, k.dim) + k.radius * norm(x, k.dim);
  double best = -std::numeric_limits<double>::infinity();
  for (const Vec& v : k.vertices) best = std::max(best, dot(x, v, k.dim));
  return best;
}

double gauge(const ConvexBody& k, const Vec& x) {
  if (k.shape == ConvexBody::Shape::ball) {
    const double xx = norm2(x, k.dim);
    if (xx == 0) return 0;
    const double xc = dot(x, k.center, k.dim);
    const double a = k.radius * k.radius - norm2(k.center, k.dim);
    return (-xc + std::sqrt(xc * xc + a * xx)) / a;
  }
  double best = 0;
  for (std::size_t i = 0; i < k.facet_normals.size(); ++i)
    best = std::max(best, dot(k.facet_normals[i], x, k.dim) / k.facet_offsets[i]);
  return best;
}

double radial(const ConvexBody& k, const Vec& x) {
  if (norm2(x, k.dim) == 0) throw std::invalid_argument("radial: direction must be nonzero");
  return 1.0 / gauge(k, x);
}

ConvexBody polar(const ConvexBody& k) {
  if (k.shape == ConvexBody::Shape::ball) {
    if (norm2(k.center, k.dim) == 0) return make_ball(k.dim, Vec{0, 0, 0}, 1.0 / k.radius);
    if (k.dim == 1) {
      double a = k.center[0] - k.radius, b = k.center[0] + k.radius;
      return make_polytope(1, {Vec{1.0 / a, 0, 0}, Vec{1.0 / b, 0, 0}});
    }
    if (k.dim == 2) {
      // Circumscribe by support halfplanes in 720 directions; the polar of
      // that tangent polygon has vertices u_j / h_K(u_j).
      const int nd = 720;
      std::vector<Vec> verts;
      verts.reserve(nd);
      for (int j = 0; j < nd; ++j) {
        double th = 2.0 * kPi * j / nd;
        Vec u{std::cos(th), std::sin(th), 0};
        verts.push_back(vscale(u, 1.0 / support(k, u)));
      }
      return make_polytope(2, std::move(verts));
    }
    throw std::invalid_argument("polar: off-center 3D ball is not supported");
  }
  if (k.dim == 1) {
    double a = k.vertices[0][0], b = k.vertices[1][0];
    return make_polytope(1, {Vec{1.0 / a, 0, 0}, Vec{1.0 / b, 0, 0}});
  }
  // Facet duality: facet {x : n.x = off} maps to the vertex n / off, and
  // consecutive counterclockwise facets give consecutive vertices.
  std::vector<Vec> verts;
  verts.reserve(k.facet_normals.size());
  for (std::size_t i = 0; i < k.facet_normals.size(); ++i)
    verts.push_back(vscale(k.facet_normals[i], 1.0 / k.facet_offsets[i]));
  return make_polytope(2, std::move(verts));
}

ConvexBody negate(const ConvexBody& k) {
  if (k.shape == ConvexBody::Shape::ball) return make_ball(k.dim, vneg(k.center), k.radius);
  std::vector<Vec> verts;
  verts.reserve(k.vertices.size());
  // Point reflection in 2D is a rotation; counterclockwise order survives.
  for (const Vec& v : k.vertices) verts.push_back(vneg(v));
  if (k.dim == 1) std::swap(verts[0], verts[1]);
  return make_polytope(k.dim, std::move(verts));
}

double inradius_at_o(const ConvexBody& k) {
  if (k.shape == ConvexBody::Shape::ball) return k.radius - norm(k.center, k.dim);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k.facet_normals.size(); ++i)
    best = std::min(best, k.facet_offsets[i] / norm(k.facet_normals[i], k.dim));
  return best;
}

double circumradius(const ConvexBody& k) {
  if (k.shape == ConvexBody::Shape::ball) return k.radius + norm(k.center, k.dim);
  double best = 0;
  for (const Vec& v : k.vertices) best = std::max(best, norm(v, k.dim));
  return best;
}

bool is_o_symmetric(const ConvexBody& k) {
  if (k.shape == ConvexBody::Shape::ball)
    return norm(k.center, k.dim) <= 1e-12 * std::max(1.0, k.radius);
  const double slack = 1e-9 * std::max(1.0, circumradius(k));
  for (const Vec& v : k.vertices) {
    bool found = false;
    for (const Vec& w : k.vertices) {
      double d = 0;
      for (int i = 0; i < k.dim; ++i) d = std::max(d, std::abs(v[i] + w[i]));
      if (d <= slack) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

std::vector<std::array<int, 2>> stencil_offsets(const ConvexBody& k, double d, double h) {
  if (!(d >= 0)) throw std::invalid_argument("stencil: dilation radius must be nonnegative");
  std::vector<std::array<int, 2>> out;
  const int bound = static_cast<int>(std::floor(d * circumradius(k) / h)) + 1;
  const int by = k.dim >= 2 ? bound : 0;
  for (int dy = -by; dy <= by; ++dy)
    for (int dx = -bound; dx <= bound; ++dx)
      if (gauge(k, Vec{dx * h, dy * h, 0}) <= d + kMembershipSlack)
        out.push_back({dx, dy});
  return out;
}

GridSet dilate_set(const GridSet& a, const ConvexBody& k, double d) {
  if (k.dim != a.grid.dim) throw std::invalid_argument("dilate: dimension mismatch");
  // Group the stencil by row; each row of a convex body is one interval.
  std::map<int, std::array<int, 2>> rows;
  for (const auto& off : stencil_offsets(k, d, a.grid.h)) {
    auto it = rows.find(off[1]);
    if (it == rows.end())
      rows[off[1]] = {off[0], off[0]};
    else {
      it->second[0] = std::min(it->second[0], off[0]);
      it->second[1] = std::max(it->second[1], off[0]);
    }
  }
  const Grid& g = a.grid;
  GridSet out(g);
  const int nx = g.n[0], ny = g.n[1];
  for (int iy = 0; iy < ny; ++iy) {
    const std::uint8_t* src = a.m.data() + g.idx(0, iy);
    int x = 0;
    while (x < nx) {
      while (x < nx && !src[x]) ++x;
      if (x == nx) break;
      int x1 = x;
      while (x1 + 1 < nx && src[x1 + 1]) ++x1;
      for (const auto& [dy, lohi] : rows) {
        int ty = iy + dy;
        int lo = x + lohi[0], hi = x1 + lohi[1];
        if (g.dim >= 2 && (ty <= 0 || ty >= ny - 1))
          throw std::runtime_error("dilate: result reaches the grid boundary");
        if (lo <= 0 || hi >= nx - 1)
          throw std::runtime_error("dilate: result reaches the grid boundary");
        std::uint8_t* dst = out.m.data() + g.idx(0, ty);
        std::fill(dst + lo, dst + hi + 1, std::uint8_t{1});
      }
      x = x1 + 1;
    }
  }
  return out;
}

}  // namespace symlab
