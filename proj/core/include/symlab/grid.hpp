#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace symlab {

// Small fixed-size vector shared by 1D/2D grid code and 3D voxel code.
// The active dimension is carried by the surrounding object (grid or body);
// unused trailing components are kept at zero.
using Vec = std::array<double, 3>;

inline double dot(const Vec& a, const Vec& b, int dim) {
  double s = 0;
  for (int i = 0; i < dim; ++i) s += a[i] * b[i];
  return s;
}
inline double norm2(const Vec& a, int dim) { return dot(a, a, dim); }
inline double norm(const Vec& a, int dim) { return std::sqrt(norm2(a, dim)); }
inline Vec vsub(const Vec& a, const Vec& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec vadd(const Vec& a, const Vec& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec vneg(const Vec& a) { return {-a[0], -a[1], -a[2]}; }
inline Vec vscale(const Vec& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

// Uniform cell grid over an axis-aligned box, dimension 1 or 2.
// Cell (ix, iy) has its center at origin[a] + (i + 0.5) * h along axis a.
// Grid functions are identified with their cell-center samples; everything
// outside the grid is implicitly zero.
struct Grid {
  int dim = 2;
  std::array<double, 2> origin{{0.0, 0.0}};
  std::array<int, 2> n{{0, 1}};  // cell counts; n[1] == 1 when dim == 1
  double h = 0.0;

  std::size_t size() const {
    return static_cast<std::size_t>(n[0]) * static_cast<std::size_t>(n[1]);
  }
  std::size_t idx(int ix, int iy) const {
    return static_cast<std::size_t>(iy) * static_cast<std::size_t>(n[0]) +
           static_cast<std::size_t>(ix);
  }
  bool in_bounds(int ix, int iy) const {
    return ix >= 0 && ix < n[0] && iy >= 0 && iy < n[1];
  }
  double coord(int axis, int i) const { return origin[axis] + (i + 0.5) * h; }
  Vec center(int ix, int iy) const {
    return {coord(0, ix), dim >= 2 ? coord(1, iy) : 0.0, 0.0};
  }
  double cell_measure() const { return dim == 1 ? h : h * h; }
  double upper(int axis) const { return origin[axis] + n[axis] * h; }

  bool operator==(const Grid& o) const {
    return dim == o.dim && origin == o.origin && n == o.n && h == o.h;
  }
};

// Grid over [lo, hi] per axis; cell counts rounded to the nearest integer.
Grid make_grid(int dim, double h, std::array<double, 2> lo, std::array<double, 2> hi);

// Symmetric grid of odd cell count per axis so that the origin of R^n is a
// cell center.  Covers at least [-half_extent, half_extent] per axis.
Grid centered_grid(int dim, double h, double half_extent);

// Nonnegative function sampled at cell centers, compactly supported with a
// margin of zero cells between its support and the grid boundary.
struct GridFunction {
  Grid grid;
  std::vector<double> v;

  GridFunction() = default;
  explicit GridFunction(const Grid& g) : grid(g), v(g.size(), 0.0) {}

  double& at(int ix, int iy) { return v[grid.idx(ix, iy)]; }
  double at(int ix, int iy) const { return v[grid.idx(ix, iy)]; }
  // Value with implicit zero extension outside the grid.
  double at_ext(int ix, int iy) const {
    return grid.in_bounds(ix, iy) ? v[grid.idx(ix, iy)] : 0.0;
  }
};

// Finite union of grid cells (one byte per cell).
struct GridSet {
  Grid grid;
  std::vector<std::uint8_t> m;

  GridSet() = default;
  explicit GridSet(const Grid& g) : grid(g), m(g.size(), 0) {}

  bool has(int ix, int iy) const {
    return grid.in_bounds(ix, iy) && m[grid.idx(ix, iy)] != 0;
  }
  void set(int ix, int iy, bool b = true) { m[grid.idx(ix, iy)] = b ? 1 : 0; }
  std::size_t count() const;
};

// Throws std::invalid_argument if f has a negative or non-finite value.
void validate_nonneg(const GridFunction& f);

double measure(const GridSet& a);                     // cell count * h^dim
double integral(const GridFunction& f);               // sum f * h^dim
double sup_value(const GridFunction& f);              // max cell value
GridSet superlevel(const GridFunction& f, double t);  // {f >= t}, t > 0
GridSet support_set(const GridFunction& f);           // {f > 0}

// Number of all-zero (resp. empty) cell layers between the support and the
// grid boundary; the full extent if the support (resp. set) is empty.
int padding(const GridFunction& f);
int padding(const GridSet& a);

// Sorted distinct positive values of f.
std::vector<double> distinct_values(const GridFunction& f);

// Distribution function: pairs (t, measure{f > t}) at every distinct value
// of f (zero included), sorted by t ascending.
std::vector<std::pair<double, double>> distribution(const GridFunction& f);

// All cell values sorted ascending (exact value multiset).
std::vector<double> value_multiset(const GridFunction& f);

// Snap a level parameter to the midpoint of the two consecutive distinct
// values of f bracketing it, so that {f >= a} and {f > a} coincide and no
// cell value sits exactly at the level.  Values of f outside (0, sup f]
// are left unchanged.
double snap_level(const GridFunction& f, double a);

// L2 distance between two functions on the same grid.
double l2_distance(const GridFunction& a, const GridFunction& b);

// Resample f onto the grid with half the spacing (same physical extent),
// evaluating the piecewise multilinear interpolant of the cell-center
// samples (zero extension outside).  Preserves nonnegativity and the
// Lipschitz bound; used for refinement studies.
GridFunction refine_half(const GridFunction& f);

}  // namespace symlab
