#include "symlab/gridfn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

namespace symlab {

namespace {

// Forward-difference gradient at a cell, zero extension outside the grid.
inline void grad_at(const GridFunction& f, int ix, int iy, double& gx, double& gy) {
  const double c = f.at(ix, iy);
  const double h = f.grid.h;
  gx = (f.at_ext(ix + 1, iy) - c) / h;
  gy = f.grid.dim == 2 ? (f.at_ext(ix, iy + 1) - c) / h : 0.0;
}

// Bounding box of the nonzero cells; false if f vanishes identically.
bool support_bbox(const GridFunction& f, int& x0, int& x1, int& y0, int& y1) {
  const int nx = f.grid.n[0], ny = f.grid.n[1];
  x0 = nx;
  x1 = -1;
  y0 = ny;
  y1 = -1;
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix)
      if (f.at(ix, iy) != 0) {
        x0 = std::min(x0, ix);
        x1 = std::max(x1, ix);
        y0 = std::min(y0, iy);
        y1 = std::max(y1, iy);
      }
  return x1 >= 0;
}

double least_squares_intercept(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t m = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = m * sxx - sx * sx;
  if (det <= 0) throw std::invalid_argument("content: epsilons must be distinct");
  const double slope = (m * sxy - sx * sy) / det;
  return (sy - slope * sx) / m;
}

ContentEstimate finish_content(std::vector<double> eps, std::vector<double> quot) {
  ContentEstimate out;
  out.epsilons = std::move(eps);
  out.quotients = std::move(quot);
  if (out.quotients.size() == 1) {
    out.value = out.quotients[0];
    out.extrapolation = "none";
  } else {
    out.value = least_squares_intercept(out.epsilons, out.quotients);
    out.extrapolation = "richardson";
  }
  return out;
}

// Least-squares polynomial fit P(t) = sum c_k t^k by normal equations with
// Gaussian elimination; degree is small (<= 3).
std::vector<double> polyfit(const std::vector<double>& t, const std::vector<double>& v,
                            int degree) {
  const int m = degree + 1;
  std::vector<double> a(m * m, 0.0), b(m, 0.0);
  for (std::size_t s = 0; s < t.size(); ++s) {
    double pw(1);
    std::vector<double> powers(2 * m - 1);
    for (int k = 0; k < 2 * m - 1; ++k) {
      powers[k] = pw;
      pw *= t[s];
    }
    for (int i = 0; i < m; ++i) {
      b[i] += powers[i] * v[s];
      for (int j = 0; j < m; ++j) a[i * m + j] += powers[i + j];
    }
  }
  for (int col = 0; col < m; ++col) {
    int piv = col;
    for (int r = col + 1; r < m; ++r)
      if (std::abs(a[r * m + col]) > std::abs(a[piv * m + col])) piv = r;
    if (a[piv * m + col] == 0) throw std::invalid_argument("content: degenerate epsilon ladder");
    if (piv != col) {
      for (int j = 0; j < m; ++j) std::swap(a[col * m + j], a[piv * m + j]);
      std::swap(b[col], b[piv]);
    }
    for (int r = 0; r < m; ++r) {
      if (r == col) continue;
      const double f = a[r * m + col] / a[col * m + col];
      for (int j = 0; j < m; ++j) a[r * m + j] -= f * a[col * m + j];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> c(m);
  for (int i = 0; i < m; ++i) c[i] = b[i] / a[i * m + i];
  return c;
}

// Content from the dilated-volume samples.  The lattice set's solid hull
// sits a small, nearly constant offset s = O(h) outside the continuum body
// it samples, so the volumes trace the Steiner polynomial of the body at
// shifted arguments: V(t) ~ p(t + s).  Differences of the samples are
// shift-free; fitting p and reading the slope at -s_hat (with s_hat
// recovered from the exactly known base volume) removes the first-order
// bias that a raw linear extrapolation of the quotients would keep.
ContentEstimate content_from_volumes(const std::vector<double>& eps,
                                     const std::vector<double>& vol, double base, int dim,
                                     double h) {
  ContentEstimate out;
  out.epsilons = eps;
  out.quotients.resize(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) out.quotients[i] = (vol[i] - base) / eps[i];
  if (eps.size() == 1) {
    out.value = out.quotients[0];
    out.extrapolation = "none";
    return out;
  }
  // Degree 2 suffices in every dimension at ladder scale: the cubic Steiner
  // term of a 3D body is O(eps^3), far below the fit residuals, and a cubic
  // coefficient only amplifies sample noise into the derivative.
  const int degree = std::min<int>(2, static_cast<int>(eps.size()) - 1);
  const std::vector<double> c = polyfit(eps, vol, degree);
  const double p0 = c[0];
  const double slope0 = c.size() > 1 ? c[1] : 0.0;
  if (!(slope0 > 0)) {
    out.value = least_squares_intercept(out.epsilons, out.quotients);
    out.extrapolation = "richardson";
    return out;
  }
  const double shift = std::clamp((p0 - base) / slope0, -h, h);
  double value = 0;
  for (std::size_t k = 1; k < c.size(); ++k)
    value += static_cast<double>(k) * c[k] * std::pow(-shift, static_cast<double>(k - 1));
  out.value = value;
  out.extrapolation = "richardson";
  return out;
}

}  // namespace

double gradient_energy(const GridFunction& f, const YoungFunction& phi,
                       const ConvexBody* anis, bool sup_mode, double level) {
  if (anis && anis->dim != f.grid.dim)
    throw std::invalid_argument("gradient_energy: body dimension mismatch");
  const int nx = f.grid.n[0], ny = f.grid.n[1];
  const double cm = f.grid.cell_measure();
  double total = 0, sup = 0;
  for (int iy = 0; iy < ny; ++iy) {
    double row = 0;
    for (int ix = 0; ix < nx; ++ix) {
      if (level > 0 && f.at(ix, iy) < level) continue;
      double gx, gy;
      grad_at(f, ix, iy, gx, gy);
      if (gx == 0 && gy == 0) continue;
      double arg;
      if (anis)
        arg = support(*anis, Vec{-gx, -gy, 0});
      else
        arg = std::sqrt(gx * gx + gy * gy);
      if (sup_mode)
        sup = std::max(sup, arg);
      else
        row += yeval(phi, arg);
    }
    total += row * cm;
  }
  return sup_mode ? sup : total;
}

double lip_bound(const GridFunction& f) {
  const int nx = f.grid.n[0], ny = f.grid.n[1];
  double best = 0;
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      double gx, gy;
      grad_at(f, ix, iy, gx, gy);
      best = std::max(best, std::sqrt(gx * gx + gy * gy));
    }
  return best;
}

double modulus(const GridFunction& f, const ConvexBody& k, double d) {
  if (k.dim != f.grid.dim) throw std::invalid_argument("modulus: dimension mismatch");
  auto stencil = stencil_offsets(k, d, f.grid.h);
  std::erase_if(stencil, [](const std::array<int, 2>& o) { return o[0] == 0 && o[1] == 0; });
  if (stencil.empty())
    throw std::runtime_error("modulus: no cell offset within reach; refine the grid");

  int x0, x1, y0, y1;
  if (!support_bbox(f, x0, x1, y0, y1)) return 0;
  int sx0 = 0, sx1 = 0, sy0 = 0, sy1 = 0;
  for (const auto& o : stencil) {
    sx0 = std::min(sx0, o[0]);
    sx1 = std::max(sx1, o[0]);
    sy0 = std::min(sy0, o[1]);
    sy1 = std::max(sy1, o[1]);
  }

  const int nx = f.grid.n[0], ny = f.grid.n[1];
  double best = 0;
  // Pairs whose first point lies in the grid (the partner may fall outside,
  // where the function is zero).
  const int ax0 = std::max(0, x0 + std::min(sx0, 0));
  const int ax1 = std::min(nx - 1, x1 + std::max(sx1, 0));
  const int ay0 = std::max(0, y0 + std::min(sy0, 0));
  const int ay1 = std::min(ny - 1, y1 + std::max(sy1, 0));
  for (int iy = ay0; iy <= ay1; ++iy)
    for (int ix = ax0; ix <= ax1; ++ix) {
      const double fx = f.at(ix, iy);
      for (const auto& o : stencil) {
        const double fy = f.at_ext(ix - o[0], iy - o[1]);
        best = std::max(best, std::abs(fx - fy));
      }
    }
  // Pairs whose first point lies outside the grid (value zero there) while
  // the partner carries a nonzero value inside.
  for (int iy = y0; iy <= y1; ++iy)
    for (int ix = x0; ix <= x1; ++ix) {
      const double fy = f.at(ix, iy);
      if (fy == 0) continue;
      for (const auto& o : stencil) {
        const int jx = ix + o[0], jy = iy + o[1];
        if (jx < 0 || jx >= nx || jy < 0 || jy >= ny) {
          best = std::max(best, fy);
          break;
        }
      }
    }
  return best;
}

GridFunction kcontraction_test_fn(const GridSet& a, const ConvexBody& k, double d) {
  if (k.dim != a.grid.dim)
    throw std::invalid_argument("kcontraction_test_fn: dimension mismatch");
  if (!(d > 0)) throw std::invalid_argument("kcontraction_test_fn: d must be positive");
  const Grid& g = a.grid;
  const int nx = g.n[0], ny = g.n[1];
  std::vector<std::array<int, 2>> cells;
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix)
      if (a.has(ix, iy)) cells.push_back({ix, iy});
  GridFunction out(g);
  if (cells.empty()) return out;

  const int reach = static_cast<int>(std::floor(d * circumradius(k) / g.h)) + 1;
  int x0 = nx, x1 = -1, y0 = ny, y1 = -1;
  for (const auto& c : cells) {
    x0 = std::min(x0, c[0]);
    x1 = std::max(x1, c[0]);
    y0 = std::min(y0, c[1]);
    y1 = std::max(y1, c[1]);
  }
  x0 = std::max(0, x0 - reach);
  x1 = std::min(nx - 1, x1 + reach);
  y0 = std::max(0, y0 - reach);
  y1 = std::min(ny - 1, y1 + reach);
  for (int iy = y0; iy <= y1; ++iy)
    for (int ix = x0; ix <= x1; ++ix) {
      double dist = std::numeric_limits<double>::infinity();
      if (a.has(ix, iy)) {
        dist = 0;
      } else {
        for (const auto& c : cells) {
          const Vec delta{(ix - c[0]) * g.h, (iy - c[1]) * g.h, 0};
          dist = std::min(dist, gauge(k, delta));
          if (dist == 0) break;
        }
      }
      const double val = d - dist;
      if (val > 0) {
        if (ix == 0 || ix == nx - 1 || (g.dim == 2 && (iy == 0 || iy == ny - 1)))
          throw std::runtime_error("kcontraction_test_fn: support reaches the grid boundary");
        out.v[g.idx(ix, iy)] = val;
      }
    }
  return out;
}

namespace {

// ---------- content estimation by sub-cell distance counting ----------
//
// measure(A + eps C) is recovered from the distance field
//
//   g(z) = max(0, min over occupied cells c of gauge(C, z - c) - rho),
//
// where rho C is the largest dilate of C inscribed in a grid cell: each
// occupied cell is modeled as a small copy of C rather than a cube.  The
// C-shaped cells make the solid hull of the lattice set homothetic to the
// dilations that probe it, so a flat face picks up a constant offset
// independent of its orientation (cube-shaped cells would push their corners
// out 40% farther along diagonal normals than along axis normals, tilting
// the quotient ladder of any body with tilted faces).  Each cell contributes
// the fraction clamp((eps - g)/h + 1/2, 0, 1) instead of a 0/1 count, so the
// estimated volume is smooth in eps: counting a flat lattice-aligned face is
// exact (the boundary ramp telescopes), and the half-cell rounding noise
// that a binary count picks up on curved staircases drops to O(h^2).

struct StencilPoint {
  int dx, dy, dz;
  double g;
};

// Gauge radius of the largest dilate of the body inscribed in a cube of
// half-width w: rho * extent(C) = w along the widest axis.
template <class Body>
double inscribed_gauge_radius(const Body& body, int dim, double w) {
  double extent = 0;
  for (int i = 0; i < dim; ++i) {
    Vec e{{0, 0, 0}};
    e[i] = 1;
    extent = std::max(extent, support(body, e));
    e[i] = -1;
    extent = std::max(extent, support(body, e));
  }
  if (!(extent > 0)) throw std::invalid_argument("content: degenerate body");
  return w / extent;
}

template <class Body>
std::vector<StencilPoint> clamped_stencil(const Body& body, int dim, double h,
                                          double reach) {
  const double rho = inscribed_gauge_radius(body, dim, 0.5 * h);
  const int bound =
      static_cast<int>(std::floor((reach + rho) * circumradius(body) / h + 1.0)) + 1;
  std::vector<StencilPoint> pts;
  const int zb = dim >= 3 ? bound : 0, yb = dim >= 2 ? bound : 0;
  for (int dz = -zb; dz <= zb; ++dz)
    for (int dy = -yb; dy <= yb; ++dy)
      for (int dx = -bound; dx <= bound; ++dx) {
        const Vec delta{{dx * h, dy * h, dz * h}};
        const double g = std::max(0.0, gauge(body, delta) - rho);
        if (g < reach) pts.push_back({dx, dy, dz, g});
      }
  std::sort(pts.begin(), pts.end(),
            [](const StencilPoint& a, const StencilPoint& b) { return a.g < b.g; });
  return pts;
}

// Sub-cell counts of {g <= eps_i}, one per epsilon.  The stencil points are
// sorted by distance, so the first occupied source cell under a target gives
// its g; the scan is restricted to a band around A built from the stencil's
// per-row intervals ({g < reach} is convex: cube + reach C).
std::vector<double> dilated_volumes(const GridSet& a, const ConvexBody& c,
                                    const std::vector<double>& eps) {
  const Grid& g = a.grid;
  const double h = g.h;
  const int nx = g.n[0], ny = g.n[1];
  double tmax = 0;
  for (double e : eps) tmax = std::max(tmax, e);
  const auto pts = clamped_stencil(c, g.dim, h, tmax + 0.51 * h);

  struct Row {
    int dy, lo, hi;
  };
  std::vector<Row> rows;
  {
    std::map<int, std::pair<int, int>> by_dy;
    for (const auto& p : pts) {
      auto it = by_dy.try_emplace(p.dy, p.dx, p.dx).first;
      it->second.first = std::min(it->second.first, p.dx);
      it->second.second = std::max(it->second.second, p.dx);
    }
    for (const auto& [dy, range] : by_dy) rows.push_back({dy, range.first, range.second});
  }

  GridSet band(g);
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      if (!a.has(ix, iy)) continue;
      for (const Row& r : rows) {
        const int ty = iy + r.dy;
        const int t0 = ix + r.lo, t1 = ix + r.hi;
        if (ty < 0 || ty >= ny || t0 < 0 || t1 >= nx ||
            (g.dim == 2 && (ty == 0 || ty == ny - 1)) || t0 == 0 || t1 == nx - 1)
          throw std::runtime_error("content: dilation reaches the grid boundary");
        for (int tx = t0; tx <= t1; ++tx) band.m[g.idx(tx, ty)] = 1;
      }
    }

  std::vector<double> vol(eps.size(), 0.0);
  double inside = 0;
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      if (a.has(ix, iy)) {
        inside += 1;
        continue;
      }
      if (!band.has(ix, iy)) continue;
      double dist = -1;
      for (const auto& p : pts) {
        const int sx = ix - p.dx, sy = iy - p.dy;
        if (sx < 0 || sx >= nx || sy < 0 || sy >= ny || !a.has(sx, sy)) continue;
        dist = p.g;
        break;
      }
      if (dist < 0) continue;
      for (std::size_t i = 0; i < eps.size(); ++i)
        vol[i] += std::clamp((eps[i] - dist) / h + 0.5, 0.0, 1.0);
    }
  const double cm = g.cell_measure();
  for (double& v : vol) v = (v + inside) * cm;
  return vol;
}

// Epsilons are kept as given but normalized to the decreasing order the
// estimate reports; duplicates collapse.
std::vector<double> normalize_eps(std::vector<double> eps, double h) {
  if (eps.empty()) throw std::invalid_argument("content: need at least one epsilon");
  for (double e : eps)
    if (!(e >= 2 * h - 1e-12))
      throw std::invalid_argument("content: epsilons must be at least 2h");
  std::sort(eps.begin(), eps.end(), std::greater<>());
  eps.erase(std::unique(eps.begin(), eps.end()), eps.end());
  return eps;
}

}  // namespace

std::vector<double> default_content_eps(double h, int dim) {
  // The solid hull of a lattice set settles into its limiting offset from
  // the continuum body only a few cells out, so quotients below 4h feel a
  // contact-scale resonance that tilts the fit.  In 2D a wide ladder is
  // cheap and averages out the residual lattice-phase sawtooth; in 3D the
  // distance walk grows with the cube of the reach, so stay near contact
  // scale (4h..8h), which the smooth-battery tolerances accommodate.
  if (dim >= 3) return {4 * h, 5 * h, 6 * h, 8 * h};
  return {8 * h, 12 * h, 16 * h, 24 * h, 32 * h};
}

ContentEstimate outer_minkowski_content(const GridSet& a, const ConvexBody& c,
                                        const std::vector<double>& eps) {
  const std::vector<double> es = normalize_eps(eps, a.grid.h);
  const double base = measure(a);
  const std::vector<double> vol = dilated_volumes(a, c, es);
  return content_from_volumes(es, vol, base, a.grid.dim, a.grid.h);
}

double graph_area(const GridFunction& f, double a) {
  if (!(a > 0)) throw std::invalid_argument("graph_area: level must be positive");
  const int nx = f.grid.n[0], ny = f.grid.n[1];
  const double cm = f.grid.cell_measure();
  double total = 0;
  for (int iy = 0; iy < ny; ++iy) {
    double row = 0;
    for (int ix = 0; ix < nx; ++ix) {
      if (f.at(ix, iy) < a) continue;
      double gx, gy;
      grad_at(f, ix, iy, gx, gy);
      row += std::sqrt(1 + gx * gx + gy * gy);
    }
    total += row * cm;
  }
  return total;
}

// ---------- 3D voxel machinery ----------

void VoxelSet::set_range(int y, int z, int x0, int x1) {
  std::uint64_t* r = row(y, z);
  const int w0 = x0 >> 6, w1 = x1 >> 6;
  const std::uint64_t m0 = ~0ull << (x0 & 63);
  const std::uint64_t m1 = ~0ull >> (63 - (x1 & 63));
  if (w0 == w1) {
    r[w0] |= m0 & m1;
    return;
  }
  r[w0] |= m0;
  for (int w = w0 + 1; w < w1; ++w) r[w] = ~0ull;
  r[w1] |= m1;
}

std::size_t VoxelSet::count() const {
  std::size_t total = 0;
  for (std::uint64_t w : words) total += std::popcount(w);
  return total;
}

double measure(const VoxelSet& v) { return static_cast<double>(v.count()) * v.h * v.h * v.h; }

VoxelSet voxelize_subgraph(const GridFunction& f, double a, int margin_cells) {
  if (f.grid.dim != 2)
    throw std::invalid_argument("voxelize_subgraph: needs a 2D grid function");
  if (!(a > 0)) throw std::invalid_argument("voxelize_subgraph: level must be positive");
  if (margin_cells < 1) throw std::invalid_argument("voxelize_subgraph: margin too small");
  const double h = f.grid.h;
  const int nx = f.grid.n[0], ny = f.grid.n[1];

  // Occupied voxel layers per column: centers a + (j + 1/2) h up to f.
  std::vector<int> layers(f.v.size(), 0);
  int zmax = 0;
  for (std::size_t i = 0; i < f.v.size(); ++i) {
    const double t = (f.v[i] - a) / h + 0.5;
    const int c = t > 0 ? static_cast<int>(std::floor(t)) : 0;
    layers[i] = c;
    zmax = std::max(zmax, c);
  }
  if (zmax == 0) throw std::invalid_argument("voxelize_subgraph: subgraph is empty");

  VoxelSet out;
  out.h = h;
  out.n = {nx + 2 * margin_cells, ny + 2 * margin_cells, zmax + 2 * margin_cells};
  out.origin = {f.grid.origin[0] - margin_cells * h, f.grid.origin[1] - margin_cells * h,
                a - margin_cells * h};
  const std::size_t total = static_cast<std::size_t>(out.n[0]) * out.n[1] * out.n[2];
  if (total > (std::size_t{1} << 30))
    throw std::runtime_error("voxelize_subgraph: voxel budget exceeded");
  out.words.assign(out.words_per_row() * out.n[1] * out.n[2], 0);
  for (int iy = 0; iy < ny; ++iy)
    for (int iz = 0; iz < zmax; ++iz) {
      // One x-run at a time keeps the bit fills long.
      int ix = 0;
      while (ix < nx) {
        while (ix < nx && layers[f.grid.idx(ix, iy)] <= iz) ++ix;
        if (ix == nx) break;
        int jx = ix;
        while (jx + 1 < nx && layers[f.grid.idx(jx + 1, iy)] > iz) ++jx;
        out.set_range(iy + margin_cells, iz + margin_cells, ix + margin_cells,
                      jx + margin_cells);
        ix = jx + 1;
      }
    }
  return out;
}

namespace {

struct VoxelStencilRow {
  int dy, dz, lo, hi;
};

// Union of per-source-run intervals over the row table; throws when the
// result would touch the voxel box boundary.
VoxelSet apply_voxel_rows(const VoxelSet& v, const std::vector<VoxelStencilRow>& rows,
                          const char* who) {
  VoxelSet out;
  out.n = v.n;
  out.origin = v.origin;
  out.h = v.h;
  out.words.assign(v.words.size(), 0);
  const int nx = v.n[0], ny = v.n[1], nz = v.n[2];
  const std::size_t wpr = v.words_per_row();
  for (int z = 0; z < nz; ++z)
    for (int y = 0; y < ny; ++y) {
      const std::uint64_t* src = v.row(y, z);
      // Walk the runs of set bits in this source row.
      for (std::size_t w = 0; w < wpr; ++w) {
        std::uint64_t bits = src[w];
        while (bits) {
          const int start = static_cast<int>(w * 64) + std::countr_zero(bits);
          // Extend the run across word boundaries.
          int end = start;
          while (end + 1 < nx && v.get(end + 1, y, z)) ++end;
          for (const auto& r : rows) {
            const int ty = y + r.dy, tz = z + r.dz;
            const int t0 = start + r.lo, t1 = end + r.hi;
            if (ty <= 0 || ty >= ny - 1 || tz <= 0 || tz >= nz - 1 || t0 <= 0 || t1 >= nx - 1)
              throw std::runtime_error(std::string(who) +
                                       ": result reaches the voxel boundary");
            out.set_range(ty, tz, t0, t1);
          }
          if ((end >> 6) > static_cast<int>(w)) {
            w = static_cast<std::size_t>(end >> 6);
            bits = src[w];
          }
          // Clear the processed run (and everything below it) from the mask.
          const int top = end & 63;
          bits &= top == 63 ? 0ull : ~0ull << (top + 1);
        }
      }
    }
  return out;
}

VoxelSet dilate_impl(const VoxelSet& v, const AnyBody& body, double d) {
  if (body_dim(body) != 3) throw std::invalid_argument("dilate: needs a 3D body");
  if (!(d >= 0)) throw std::invalid_argument("dilate: dilation radius must be nonnegative");
  const double h = v.h;
  const int bound = static_cast<int>(std::floor(d * circumradius(body) / h)) + 1;

  // Each (dy, dz) slice of the stencil is one x-interval (convexity).
  std::vector<VoxelStencilRow> rows;
  for (int dz = -bound; dz <= bound; ++dz)
    for (int dy = -bound; dy <= bound; ++dy) {
      int lo = bound + 1, hi = -(bound + 1);
      for (int dx = -bound; dx <= bound; ++dx) {
        const Vec delta{{dx * h, dy * h, dz * h}};
        if (gauge(body, delta) <= d + 1e-12) {
          lo = std::min(lo, dx);
          hi = std::max(hi, dx);
        }
      }
      if (lo <= hi) rows.push_back({dy, dz, lo, hi});
    }
  return apply_voxel_rows(v, rows, "dilate");
}

// Voxel analogue of dilated_volumes: sub-cell counts of {g <= eps_i} over a
// band around the set.
std::vector<double> dilated_volumes(const VoxelSet& v, const AnyBody& c,
                                    const std::vector<double>& eps) {
  const double h = v.h;
  const int nx = v.n[0], ny = v.n[1], nz = v.n[2];
  double tmax = 0;
  for (double e : eps) tmax = std::max(tmax, e);
  const auto pts = clamped_stencil(c, 3, h, tmax + 0.51 * h);

  std::vector<VoxelStencilRow> rows;
  {
    std::map<std::pair<int, int>, std::pair<int, int>> by_offset;
    for (const auto& p : pts) {
      auto it = by_offset.try_emplace({p.dy, p.dz}, p.dx, p.dx).first;
      it->second.first = std::min(it->second.first, p.dx);
      it->second.second = std::max(it->second.second, p.dx);
    }
    for (const auto& [off, range] : by_offset)
      rows.push_back({off.first, off.second, range.first, range.second});
  }
  const VoxelSet band = apply_voxel_rows(v, rows, "content");

  std::vector<double> vol(eps.size(), 0.0);
  double inside = 0;
  for (int z = 0; z < nz; ++z)
    for (int y = 0; y < ny; ++y)
      for (int x = 0; x < nx; ++x) {
        if (v.get(x, y, z)) {
          inside += 1;
          continue;
        }
        if (!band.get(x, y, z)) continue;
        double dist = -1;
        for (const auto& p : pts) {
          const int sx = x - p.dx, sy = y - p.dy, sz = z - p.dz;
          if (sx < 0 || sx >= nx || sy < 0 || sy >= ny || sz < 0 || sz >= nz ||
              !v.get(sx, sy, sz))
            continue;
          dist = p.g;
          break;
        }
        if (dist < 0) continue;
        for (std::size_t i = 0; i < eps.size(); ++i)
          vol[i] += std::clamp((eps[i] - dist) / h + 0.5, 0.0, 1.0);
      }
  const double cm = h * h * h;
  for (double& w : vol) w = (w + inside) * cm;
  return vol;
}

}  // namespace

VoxelSet dilate(const VoxelSet& v, const AnyBody& body, double d) {
  return dilate_impl(v, body, d);
}

ContentEstimate outer_minkowski_content(const VoxelSet& v, const AnyBody& c,
                                        const std::vector<double>& eps) {
  const std::vector<double> es = normalize_eps(eps, v.h);
  const double base = measure(v);
  const std::vector<double> vol = dilated_volumes(v, c, es);
  return content_from_volumes(es, vol, base, 3, v.h);
}

SubgraphContent subgraph_content(const GridFunction& f, double a, const AnyBody& c,
                                 std::vector<double> eps) {
  if (f.grid.dim != 2) throw std::invalid_argument("subgraph_content: needs a 2D function");
  if (body_dim(c) != 3) throw std::invalid_argument("subgraph_content: needs a 3D body");
  const double h = f.grid.h;
  if (eps.empty()) eps = default_content_eps(h, 3);
  double emax = 0;
  for (double e : eps) emax = std::max(emax, e);

  const int margin =
      static_cast<int>(std::ceil(emax * circumradius(c) / h)) + 3;
  const VoxelSet vox = voxelize_subgraph(f, a, margin);

  SubgraphContent out;
  out.dilation = outer_minkowski_content(vox, c, eps);

  const int nx = f.grid.n[0], ny = f.grid.n[1];
  const double cm = f.grid.cell_measure();
  double top = 0, bottom_cells = 0;
  for (int iy = 0; iy < ny; ++iy) {
    double row = 0;
    for (int ix = 0; ix < nx; ++ix) {
      const double val = f.at(ix, iy);
      if (val >= a) bottom_cells += 1;
      if (val <= a) continue;
      double gx, gy;
      grad_at(f, ix, iy, gx, gy);
      row += support(c, Vec{-gx, -gy, 1});
    }
    top += row * cm;
  }
  out.graph_integral = top + support(c, Vec{0, 0, -1}) * bottom_cells * cm;
  return out;
}

}  // namespace symlab
