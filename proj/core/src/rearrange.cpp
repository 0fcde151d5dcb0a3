#include "symlab/rearrange.hpp"

#include "symlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace symlab {

namespace {

constexpr const char* kMarginError = "rearrange: margin overflow (image touches the grid boundary)";

// Offset of cell i from the physical coordinate c, in index units; exact
// integers whenever c sits on a cell center, so symmetric ties are exact.
double cell_delta(double c, double origin, double h, int i) {
  const double raw = (c - origin) / h - 0.5;
  const double snapped = std::round(raw);
  const double ci = std::abs(raw - snapped) < 1e-9 ? snapped : raw;
  return i - ci;
}

bool on_ring(const Grid& g, int i) {
  const int ix = i % g.n[0], iy = i / g.n[0];
  if (ix == 0 || ix == g.n[0] - 1) return true;
  return g.dim == 2 && (iy == 0 || iy == g.n[1] - 1);
}

// Cells sorted by (key, row, column): squared center distance for the
// symmetric kinds, gauge of K for the convex symmetrization.
std::vector<int> global_ordering(const Grid& g, const Rearrangement& t) {
  const int nx = g.n[0], ny = g.n[1];
  std::vector<double> key(g.size());
  if (t.kind == Rearrangement::Kind::k_schwarz) {
    if (t.body.dim != g.dim)
      throw std::invalid_argument("k_schwarz: body dimension does not match the grid");
    for (int iy = 0; iy < ny; ++iy)
      for (int ix = 0; ix < nx; ++ix) key[g.idx(ix, iy)] = gauge(t.body, g.center(ix, iy));
  } else {
    for (int iy = 0; iy < ny; ++iy) {
      const double dy = g.dim == 2 ? cell_delta(t.center[1], g.origin[1], g.h, iy) : 0;
      for (int ix = 0; ix < nx; ++ix) {
        const double dx = cell_delta(t.center[0], g.origin[0], g.h, ix);
        key[g.idx(ix, iy)] = dx * dx + dy * dy;
      }
    }
  }
  std::vector<int> order(static_cast<std::size_t>(g.size()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (key[a] != key[b]) return key[a] < key[b];
    return a < b;  // linear index = lexicographic (row, column)
  });
  return order;
}

GridFunction transport_fn(const Rearrangement& t, const GridFunction& f) {
  const auto order = global_ordering(f.grid, t);
  std::vector<double> vals;
  for (double x : f.v)
    if (x > 0) vals.push_back(x);
  std::sort(vals.begin(), vals.end(), std::greater<>());
  GridFunction out(f.grid);
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (on_ring(f.grid, order[i])) throw std::runtime_error(kMarginError);
    out.v[order[i]] = vals[i];
  }
  return out;
}

GridSet transport_set(const Rearrangement& t, const GridSet& a) {
  const auto order = global_ordering(a.grid, t);
  const std::size_t m = a.count();
  GridSet out(a.grid);
  for (std::size_t i = 0; i < m; ++i) {
    if (on_ring(a.grid, order[i])) throw std::runtime_error(kMarginError);
    out.m[order[i]] = 1;
  }
  return out;
}

// Shared line ordering for the Steiner kinds (keys are independent of the
// transverse coordinate).
std::vector<int> line_ordering(const Grid& g, int axis, double line) {
  const int n = g.n[axis];
  std::vector<double> key(n);
  for (int i = 0; i < n; ++i) {
    const double d = cell_delta(line, g.origin[axis], g.h, i);
    key[i] = d * d;
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (key[a] != key[b]) return key[a] < key[b];
    return a < b;
  });
  return order;
}

void check_axis(const Grid& g, int axis, const char* who) {
  if (axis < 0 || axis >= g.dim)
    throw std::invalid_argument(std::string(who) + ": axis out of range for this grid");
}

GridFunction steiner_fn(const Rearrangement& t, const GridFunction& f) {
  const Grid& g = f.grid;
  check_axis(g, t.axis, "steiner");
  const auto order = line_ordering(g, t.axis, t.line);
  const int n = g.n[t.axis];
  const int m = t.axis == 0 ? g.n[1] : g.n[0];
  GridFunction out(g);
  std::vector<double> vals;
  for (int j = 0; j < m; ++j) {
    const auto idx_of = [&](int i) { return t.axis == 0 ? g.idx(i, j) : g.idx(j, i); };
    vals.clear();
    for (int i = 0; i < n; ++i) {
      const double x = f.v[idx_of(i)];
      if (x > 0) vals.push_back(x);
    }
    std::sort(vals.begin(), vals.end(), std::greater<>());
    for (std::size_t k = 0; k < vals.size(); ++k) {
      const int pos = order[k];
      if (pos == 0 || pos == n - 1) throw std::runtime_error(kMarginError);
      out.v[idx_of(pos)] = vals[k];
    }
  }
  return out;
}

GridSet steiner_set(const Rearrangement& t, const GridSet& a) {
  const Grid& g = a.grid;
  check_axis(g, t.axis, "steiner");
  const auto order = line_ordering(g, t.axis, t.line);
  const int n = g.n[t.axis];
  const int m = t.axis == 0 ? g.n[1] : g.n[0];
  GridSet out(g);
  for (int j = 0; j < m; ++j) {
    const auto idx_of = [&](int i) { return t.axis == 0 ? g.idx(i, j) : g.idx(j, i); };
    int cnt = 0;
    for (int i = 0; i < n; ++i) cnt += a.m[idx_of(i)] ? 1 : 0;
    for (int k = 0; k < cnt; ++k) {
      const int pos = order[k];
      if (pos == 0 || pos == n - 1) throw std::runtime_error(kMarginError);
      out.m[idx_of(pos)] = 1;
    }
  }
  return out;
}

// Doubled index coordinate of the reflection hyperplane; throws unless the
// offset is a multiple of 1/2 (grid-exact reflection).
int doubled_plane(double offset) {
  const double two = 2 * offset;
  const long long j2 = std::llround(two);
  if (std::abs(two - static_cast<double>(j2)) > 1e-9)
    throw std::invalid_argument("polarization: offset must be a multiple of 1/2");
  return static_cast<int>(j2);
}

// Runs the two-point exchange over every reflected pair of one line.
// `get` / `put` access position i of the line; `n` is the line length.
template <class Get, class Put, class VMax, class VMin>
void polarize_line(int n, int j2, bool positive_side, const char* overflow, Get&& get,
                   Put&& put, VMax&& vmax, VMin&& vmin) {
  for (int i = 0; i < n; ++i) {
    const int ir = j2 - 1 - i;
    if (ir == i) continue;  // the cell sits on the hyperplane
    const bool keeps = ((2 * i + 1 > j2) == positive_side);
    if (ir >= 0 && ir < n) {
      if (i > ir) continue;  // handle each pair at its smaller index
      const auto vi = get(i), vr = get(ir);
      const auto hi = vmax(vi, vr), lo = vmin(vi, vr);
      put(i, keeps ? hi : lo);
      put(ir, keeps ? lo : hi);
    } else if (!keeps && get(i) > 0) {
      // A positive value on the discarded side must travel to its mirror
      // cell, which lies outside the grid.
      throw std::runtime_error(overflow);
    }
  }
}

constexpr const char* kPolarOverflow =
    "polarization: margin overflow (kept value would leave the grid)";

}  // namespace

Rearrangement sym_decreasing(const Vec& center) {
  Rearrangement t;
  t.kind = Rearrangement::Kind::sym_decreasing;
  t.center = center;
  return t;
}

Rearrangement steiner(int axis, double line) {
  if (axis != 0 && axis != 1) throw std::invalid_argument("steiner: axis must be 0 or 1");
  Rearrangement t;
  t.kind = Rearrangement::Kind::steiner;
  t.axis = axis;
  t.line = line;
  return t;
}

Rearrangement schwarz(const Vec& center) {
  Rearrangement t;
  t.kind = Rearrangement::Kind::schwarz;
  t.center = center;
  return t;
}

Rearrangement k_schwarz(const ConvexBody& k) {
  if (!(inradius_at_o(k) > 0))
    throw std::invalid_argument("k_schwarz: body must contain the origin in its interior");
  Rearrangement t;
  t.kind = Rearrangement::Kind::k_schwarz;
  t.body = k;
  return t;
}

Rearrangement polarization(int axis, double offset, bool positive_side) {
  if (axis != 0 && axis != 1) throw std::invalid_argument("polarization: axis must be 0 or 1");
  doubled_plane(offset);  // validates
  Rearrangement t;
  t.kind = Rearrangement::Kind::polarization;
  t.axis = axis;
  t.offset = offset;
  t.positive_side = positive_side;
  return t;
}

Rearrangement composite(std::vector<Rearrangement> parts) {
  if (parts.empty()) throw std::invalid_argument("composite: needs at least one part");
  Rearrangement t;
  t.kind = Rearrangement::Kind::composite;
  t.parts = std::move(parts);
  return t;
}

GridFunction polarize(const GridFunction& f, int axis, double offset, bool positive_side) {
  validate_nonneg(f);
  const Grid& g = f.grid;
  check_axis(g, axis, "polarization");
  const int j2 = doubled_plane(offset);
  GridFunction out = f;
  const auto dmax = [](double a, double b) { return std::max(a, b); };
  const auto dmin = [](double a, double b) { return std::min(a, b); };
  const int n = g.n[axis];
  const int m = axis == 0 ? g.n[1] : g.n[0];
  for (int j = 0; j < m; ++j) {
    const auto idx_of = [&](int i) { return axis == 0 ? g.idx(i, j) : g.idx(j, i); };
    polarize_line(
        n, j2, positive_side, kPolarOverflow, [&](int i) { return f.v[idx_of(i)]; },
        [&](int i, double v) { out.v[idx_of(i)] = v; }, dmax, dmin);
  }
  return out;
}

namespace {

GridSet polarize_set(const GridSet& a, int axis, double offset, bool positive_side) {
  const Grid& g = a.grid;
  check_axis(g, axis, "polarization");
  const int j2 = doubled_plane(offset);
  GridSet out = a;
  const auto bor = [](int x, int y) { return x | y; };
  const auto band = [](int x, int y) { return x & y; };
  const int n = g.n[axis];
  const int m = axis == 0 ? g.n[1] : g.n[0];
  for (int j = 0; j < m; ++j) {
    const auto idx_of = [&](int i) { return axis == 0 ? g.idx(i, j) : g.idx(j, i); };
    polarize_line(
        n, j2, positive_side, kPolarOverflow,
        [&](int i) { return static_cast<int>(a.m[idx_of(i)]); },
        [&](int i, int v) { out.m[idx_of(i)] = static_cast<std::uint8_t>(v); }, bor, band);
  }
  return out;
}

}  // namespace

GridSet apply_set(const Rearrangement& t, const GridSet& a) {
  switch (t.kind) {
    case Rearrangement::Kind::sym_decreasing:
    case Rearrangement::Kind::schwarz:
    case Rearrangement::Kind::k_schwarz:
      return transport_set(t, a);
    case Rearrangement::Kind::steiner:
      return steiner_set(t, a);
    case Rearrangement::Kind::polarization:
      return polarize_set(a, t.axis, t.offset, t.positive_side);
    case Rearrangement::Kind::composite: {
      GridSet cur = a;
      for (const auto& part : t.parts) cur = apply_set(part, cur);
      return cur;
    }
  }
  throw std::logic_error("apply_set: unknown kind");
}

GridFunction apply(const Rearrangement& t, const GridFunction& f) {
  validate_nonneg(f);
  switch (t.kind) {
    case Rearrangement::Kind::sym_decreasing:
    case Rearrangement::Kind::schwarz:
    case Rearrangement::Kind::k_schwarz:
      return transport_fn(t, f);
    case Rearrangement::Kind::steiner:
      return steiner_fn(t, f);
    case Rearrangement::Kind::polarization:
      return polarize(f, t.axis, t.offset, t.positive_side);
    case Rearrangement::Kind::composite: {
      GridFunction cur = f;
      for (const auto& part : t.parts) cur = apply(part, cur);
      return cur;
    }
  }
  throw std::logic_error("apply: unknown kind");
}

SetMap set_map(const Rearrangement& t) {
  return SetMap{[t](const GridSet& a) { return apply_set(t, a); }};
}

GridFunction layer_cake_reconstruct(const SetMap& s, const GridFunction& f) {
  validate_nonneg(f);
  const auto vals = distinct_values(f);  // ascending, positive
  GridFunction out(f.grid);
  GridSet prev;
  bool have_prev = false;
  for (auto it = vals.rbegin(); it != vals.rend(); ++it) {
    GridSet b = s.map(superlevel(f, *it));
    if (!(b.grid == f.grid))
      throw std::invalid_argument("layer_cake: set map changed the grid");
    if (have_prev)
      for (std::size_t i = 0; i < b.m.size(); ++i)
        if (prev.m[i] && !b.m[i])
          throw std::runtime_error("layer_cake: set images are not nested");
    for (std::size_t i = 0; i < b.m.size(); ++i)
      if (b.m[i] && out.v[i] == 0) out.v[i] = *it;
    prev = std::move(b);
    have_prev = true;
  }
  return out;
}

FlowTrace polarization_flow(const GridFunction& f, int steps, std::uint64_t seed) {
  if (steps < 1) throw std::invalid_argument("polarization_flow: steps must be >= 1");
  validate_nonneg(f);
  const GridFunction target = apply(sym_decreasing(), f);
  Rng rng{seed};
  GridFunction cur = f;
  FlowTrace out;
  out.distance.reserve(static_cast<std::size_t>(steps) + 1);
  out.reference_defect.reserve(static_cast<std::size_t>(steps));
  out.distance.push_back(l2_distance(cur, target));
  for (int s = 0; s < steps; ++s) {
    const int axis = f.grid.dim == 2 ? static_cast<int>(rng.uniform_int(0, 1)) : 0;
    const int n = f.grid.n[axis];
    const double mu = 0.5 * static_cast<double>(rng.uniform_int(1, 2 * n - 1));
    const double pos = f.grid.origin[axis] + mu * f.grid.h;
    // Orient the keep side toward the origin; planes through it keep "+".
    const bool positive_side = !(pos > 0);
    cur = polarize(cur, axis, mu, positive_side);
    out.distance.push_back(l2_distance(cur, target));
    out.reference_defect.push_back(
        l2_distance(polarize(target, axis, mu, positive_side), target));
  }
  return out;
}

}  // namespace symlab
