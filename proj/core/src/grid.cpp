#include "symlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace symlab {

Grid make_grid(int dim, double h, std::array<double, 2> lo, std::array<double, 2> hi) {
  if (dim < 1 || dim > 2) throw std::invalid_argument("grid: dim must be 1 or 2");
  if (!(h > 0) || !std::isfinite(h)) throw std::invalid_argument("grid: h must be positive");
  Grid g;
  g.dim = dim;
  g.h = h;
  for (int a = 0; a < dim; ++a) {
    double w = hi[a] - lo[a];
    if (!(w > 0)) throw std::invalid_argument("grid: extent must be nonempty");
    int cells = static_cast<int>(std::lround(w / h));
    if (cells < 1) cells = 1;
    g.origin[a] = lo[a];
    g.n[a] = cells;
  }
  if (dim == 1) {
    g.n[1] = 1;
    g.origin[1] = -0.5 * h;  // the single row is centered on the axis
  }
  if (g.size() > (std::size_t{1} << 28))
    throw std::invalid_argument("grid: cell budget exceeded");
  return g;
}

Grid centered_grid(int dim, double h, double half_extent) {
  if (!(half_extent > 0)) throw std::invalid_argument("grid: half_extent must be positive");
  int half_cells = static_cast<int>(std::ceil(half_extent / h - 0.5));
  if (half_cells < 1) half_cells = 1;
  int cells = 2 * half_cells + 1;
  double lo = -(half_cells + 0.5) * h;
  return make_grid(dim, h, {lo, lo}, {lo + cells * h, lo + cells * h});
}

std::size_t GridSet::count() const {
  std::size_t c = 0;
  for (std::uint8_t b : m) c += b != 0;
  return c;
}

void validate_nonneg(const GridFunction& f) {
  for (double x : f.v)
    if (!(x >= 0) || !std::isfinite(x))
      throw std::invalid_argument("grid function: values must be finite and nonnegative");
}

double measure(const GridSet& a) {
  return static_cast<double>(a.count()) * a.grid.cell_measure();
}

double integral(const GridFunction& f) {
  // Row-wise partial sums keep the reduction order fixed.
  double total = 0;
  for (int iy = 0; iy < f.grid.n[1]; ++iy) {
    double row = 0;
    const double* p = f.v.data() + f.grid.idx(0, iy);
    for (int ix = 0; ix < f.grid.n[0]; ++ix) row += p[ix];
    total += row;
  }
  return total * f.grid.cell_measure();
}

double sup_value(const GridFunction& f) {
  double m = 0;
  for (double x : f.v) m = std::max(m, x);
  return m;
}

GridSet superlevel(const GridFunction& f, double t) {
  if (!(t > 0)) throw std::invalid_argument("superlevel: level must be positive");
  GridSet s(f.grid);
  for (std::size_t i = 0; i < f.v.size(); ++i) s.m[i] = f.v[i] >= t ? 1 : 0;
  return s;
}

GridSet support_set(const GridFunction& f) {
  GridSet s(f.grid);
  for (std::size_t i = 0; i < f.v.size(); ++i) s.m[i] = f.v[i] > 0 ? 1 : 0;
  return s;
}

namespace {
template <class Pred>
int padding_impl(const Grid& g, Pred occupied) {
  int lo0 = g.n[0], hi0 = -1, lo1 = g.n[1], hi1 = -1;
  for (int iy = 0; iy < g.n[1]; ++iy)
    for (int ix = 0; ix < g.n[0]; ++ix)
      if (occupied(ix, iy)) {
        lo0 = std::min(lo0, ix);
        hi0 = std::max(hi0, ix);
        lo1 = std::min(lo1, iy);
        hi1 = std::max(hi1, iy);
      }
  if (hi0 < 0) return std::min(g.n[0], g.n[1]);  // empty support
  int pad = std::min(std::min(lo0, g.n[0] - 1 - hi0),
                     g.dim >= 2 ? std::min(lo1, g.n[1] - 1 - hi1)
                                : std::numeric_limits<int>::max());
  return pad;
}
}  // namespace

int padding(const GridFunction& f) {
  return padding_impl(f.grid, [&](int ix, int iy) { return f.at(ix, iy) > 0; });
}

int padding(const GridSet& a) {
  return padding_impl(a.grid, [&](int ix, int iy) { return a.has(ix, iy); });
}

std::vector<double> distinct_values(const GridFunction& f) {
  std::vector<double> vals;
  vals.reserve(f.v.size());
  for (double x : f.v)
    if (x > 0) vals.push_back(x);
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  return vals;
}

std::vector<std::pair<double, double>> distribution(const GridFunction& f) {
  std::vector<double> vals = distinct_values(f);
  vals.insert(vals.begin(), 0.0);
  // Count cells with value > t by sweeping the sorted multiset once.
  std::vector<double> sorted(f.v);
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::pair<double, double>> out;
  out.reserve(vals.size());
  const double cm = f.grid.cell_measure();
  for (double t : vals) {
    auto it = std::upper_bound(sorted.begin(), sorted.end(), t);
    out.emplace_back(t, static_cast<double>(sorted.end() - it) * cm);
  }
  return out;
}

std::vector<double> value_multiset(const GridFunction& f) {
  std::vector<double> sorted(f.v);
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

double snap_level(const GridFunction& f, double a) {
  std::vector<double> vals = distinct_values(f);
  if (vals.empty()) return a;
  if (!(a > 0) || a > vals.back()) return a;
  // Bracket a between consecutive distinct values (0 prepended).
  double lo = 0.0;
  for (double t : vals) {
    if (a <= t) return 0.5 * (lo + t);
    lo = t;
  }
  return a;
}

double l2_distance(const GridFunction& a, const GridFunction& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("l2_distance: grid mismatch");
  double total = 0;
  for (int iy = 0; iy < a.grid.n[1]; ++iy) {
    double row = 0;
    const double* pa = a.v.data() + a.grid.idx(0, iy);
    const double* pb = b.v.data() + b.grid.idx(0, iy);
    for (int ix = 0; ix < a.grid.n[0]; ++ix) {
      double d = pa[ix] - pb[ix];
      row += d * d;
    }
    total += row;
  }
  return std::sqrt(total * a.grid.cell_measure());
}

GridFunction refine_half(const GridFunction& f) {
  Grid g = f.grid;
  g.h = f.grid.h / 2;
  g.n[0] = f.grid.n[0] * 2;
  if (g.dim == 2) {
    g.n[1] = f.grid.n[1] * 2;
  } else {
    g.n[1] = 1;
    g.origin[1] = -g.h / 2;
  }
  GridFunction out(g);
  // A fine cell center sits at coarse index coordinate i/2 - 1/4.
  const auto sample = [&](int cix, int ciy, double wx, double wy) {
    const double a = (1 - wx) * f.at_ext(cix, ciy) + wx * f.at_ext(cix + 1, ciy);
    if (f.grid.dim == 1) return a;
    const double b = (1 - wx) * f.at_ext(cix, ciy + 1) + wx * f.at_ext(cix + 1, ciy + 1);
    return (1 - wy) * a + wy * b;
  };
  for (int iy = 0; iy < g.n[1]; ++iy) {
    const int ciy = g.dim == 2 ? (iy - 1) / 2 - (iy == 0 ? 1 : 0) : 0;
    const double wy = g.dim == 2 ? (iy % 2 == 0 ? 0.75 : 0.25) : 0.0;
    for (int ix = 0; ix < g.n[0]; ++ix) {
      const int cix = (ix - 1) / 2 - (ix == 0 ? 1 : 0);
      const double wx = ix % 2 == 0 ? 0.75 : 0.25;
      out.v[g.idx(ix, iy)] = sample(cix, ciy, wx, wy);
    }
  }
  return out;
}

}  // namespace symlab
