#include "symlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "symlab/rng.hpp"

namespace symlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

CheckReport::Verdict verdict_from(bool holds, bool expect_violation) {
  if (holds) return CheckReport::Verdict::holds;
  return expect_violation ? CheckReport::Verdict::violated_as_expected
                          : CheckReport::Verdict::violated;
}

// lhs <= rhs + tol with infinity handled (an infinite right side holds
// vacuously).
bool le_tol(double lhs, double rhs, double tol) {
  if (std::isinf(rhs) && rhs > 0) return true;
  if (std::isinf(lhs) && lhs > 0) return false;
  return lhs <= rhs + tol;
}

// Perimeter of the support bounding box: the scale factor of the
// discretization tolerances (1D support has two endpoints).
double support_scale(const GridFunction& f) {
  const int nx = f.grid.n[0], ny = f.grid.n[1];
  int x0 = nx, x1 = -1, y0 = ny, y1 = -1;
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix)
      if (f.at(ix, iy) != 0) {
        x0 = std::min(x0, ix);
        x1 = std::max(x1, ix);
        y0 = std::min(y0, iy);
        y1 = std::max(y1, iy);
      }
  if (x1 < 0) return 0;
  if (f.grid.dim == 1) return 2.0;
  return 2.0 * ((x1 - x0 + 1) + (y1 - y0 + 1)) * f.grid.h;
}

double measure_above(const GridFunction& f, double t) {
  std::size_t c = 0;
  for (double x : f.v)
    if (x > t) ++c;
  return static_cast<double>(c) * f.grid.cell_measure();
}

std::string num_key(const char* base, std::size_t i) {
  std::ostringstream os;
  os << base << '_' << i;
  return os.str();
}

// The same rearrangement acting on the half-spacing grid: polarization
// offsets are grid coordinates and must double to keep the same physical
// hyperplane; every other parameter is physical already.
Rearrangement refined(const Rearrangement& t) {
  Rearrangement out = t;
  if (out.kind == Rearrangement::Kind::polarization) out.offset *= 2;
  for (auto& part : out.parts) part = refined(part);
  return out;
}

// Squared center distance in index units with exact integer ties for
// grid-aligned centers (mirrors the transport ordering's key).
double cell_delta(double c, double origin, double h, int i) {
  const double raw = (c - origin) / h - 0.5;
  const double snapped = std::round(raw);
  const double ci = std::abs(raw - snapped) < 1e-9 ? snapped : raw;
  return i - ci;
}

}  // namespace

const char* to_string(CheckReport::Verdict v) {
  switch (v) {
    case CheckReport::Verdict::holds:
      return "holds";
    case CheckReport::Verdict::violated:
      return "violated";
    case CheckReport::Verdict::violated_as_expected:
      return "violated_as_expected";
    case CheckReport::Verdict::error:
      return "error";
  }
  return "error";
}

std::vector<CheckInfo> list_checks() {
  return {
      {"content_formula",
       "the subgraph boundary content from volume quotients matches the graph integral"},
      {"crz", "supermodular functionals do not decrease under rearrangement"},
      {"equimeasurable", "rearrangement preserves the distribution function exactly"},
      {"isoperimetric", "the induced set map does not increase boundary content"},
      {"kschwarz_energy_gap",
       "convex symmetrization toward a square raises p-Dirichlet energies of the cone"},
      {"lp_contraction", "rearrangement contracts every convex integral distance"},
      {"modulus_reduction", "rearrangement does not raise the K-modulus of continuity"},
      {"polarization_flow",
       "random center-oriented polarizations approach the symmetric rearrangement"},
      {"polya_szego", "gradient energies do not increase under rearrangement"},
      {"smoothing", "dilation of the rearranged set stays inside the rearranged dilation"},
      {"subgraph_core", "dilated truncated subgraphs shrink in volume under rearrangement"},
  };
}

CheckReport check_equimeasurable(const Rearrangement& t, const GridFunction& f) {
  CheckReport r;
  r.check = "equimeasurable";
  r.statement = "measure{Tf > s} = measure{f > s} at every level s";
  r.h = f.grid.h;
  const GridFunction tf = apply(t, f);
  double sup = 0;
  if (value_multiset(f) != value_multiset(tf)) {
    std::vector<double> levels = distinct_values(f);
    const std::vector<double> more = distinct_values(tf);
    levels.insert(levels.end(), more.begin(), more.end());
    levels.push_back(0);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    for (double s : levels)
      sup = std::max(sup, std::abs(measure_above(f, s) - measure_above(tf, s)));
  }
  r.lhs = sup;
  r.rhs = 0;
  r.tolerance = 0;
  r.details["distinct_values"] = static_cast<double>(distinct_values(f).size());
  r.verdict = verdict_from(sup <= 0, false);
  return r;
}

CheckReport check_lp_contraction(const Rearrangement& t, const GridFunction& f,
                                 const GridFunction& g, const YoungFunction& j) {
  if (!(f.grid == g.grid))
    throw std::invalid_argument("lp_contraction: functions live on different grids");
  CheckReport r;
  r.check = "lp_contraction";
  r.statement = "sum j(|Tf - Tg|) <= sum j(|f - g|) for convex j with j(0) = 0";
  r.h = f.grid.h;
  const GridFunction tf = apply(t, f), tg = apply(t, g);
  const double cm = f.grid.cell_measure();
  double lhs = 0, rhs = 0;
  for (int iy = 0; iy < f.grid.n[1]; ++iy) {
    double rl = 0, rr = 0;
    for (int ix = 0; ix < f.grid.n[0]; ++ix) {
      const std::size_t i = f.grid.idx(ix, iy);
      rl += yeval(j, std::abs(tf.v[i] - tg.v[i]));
      rr += yeval(j, std::abs(f.v[i] - g.v[i]));
    }
    lhs += rl * cm;
    rhs += rr * cm;
  }
  r.lhs = lhs;
  r.rhs = rhs;
  r.tolerance = 1e-9 * (1 + std::abs(std::isfinite(rhs) ? rhs : 0.0));
  if (std::isinf(rhs) && rhs > 0) r.note = "right side infinite: holds vacuously";
  r.verdict = verdict_from(le_tol(lhs, rhs, r.tolerance), false);
  return r;
}

CheckReport check_crz(const Rearrangement& t, const GridFunction& f, const GridFunction& g,
                      const std::function<double(double, double)>& func,
                      const std::string& func_name) {
  if (!(f.grid == g.grid)) throw std::invalid_argument("crz: functions live on different grids");
  const double top = std::max({sup_value(f), sup_value(g), 1e-9});
  if (std::abs(func(0, 0)) > 1e-12)
    throw std::invalid_argument("crz: hypothesis failed: F(0,0) must be 0");
  double prev_s = func(0, 0), prev_t = prev_s;
  for (int k = 1; k <= 100; ++k) {
    const double s = top * k / 100;
    const double vs = func(s, 0), vt = func(0, s);
    if (vs > prev_s + 1e-12)
      throw std::invalid_argument("crz: hypothesis failed: F(s,0) must be nonincreasing");
    if (vt > prev_t + 1e-12)
      throw std::invalid_argument("crz: hypothesis failed: F(0,t) must be nonincreasing");
    prev_s = vs;
    prev_t = vt;
  }
  Rng rng{0xC125EEDull};
  for (int k = 0; k < 10000; ++k) {
    double a = rng.uniform(0, top), b = rng.uniform(0, top);
    double c = rng.uniform(0, top), d = rng.uniform(0, top);
    if (a > b) std::swap(a, b);
    if (c > d) std::swap(c, d);
    const double gain = func(b, d) + func(a, c) - func(b, c) - func(a, d);
    if (gain < -1e-12 * std::max(1.0, std::abs(func(b, d))))
      throw std::invalid_argument("crz: hypothesis failed: F is not supermodular");
  }

  CheckReport r;
  r.check = "crz";
  r.statement = "sum F(f, g) <= sum F(Tf, Tg) for supermodular F (F = " + func_name + ")";
  r.h = f.grid.h;
  const GridFunction tf = apply(t, f), tg = apply(t, g);
  const double cm = f.grid.cell_measure();
  double lhs = 0, rhs = 0;
  for (int iy = 0; iy < f.grid.n[1]; ++iy) {
    double rl = 0, rr = 0;
    for (int ix = 0; ix < f.grid.n[0]; ++ix) {
      const std::size_t i = f.grid.idx(ix, iy);
      rl += func(f.v[i], g.v[i]);
      rr += func(tf.v[i], tg.v[i]);
    }
    lhs += rl * cm;
    rhs += rr * cm;
  }
  r.lhs = lhs;
  r.rhs = rhs;
  r.tolerance = 1e-9 * (1 + std::abs(rhs));
  r.verdict = verdict_from(le_tol(lhs, rhs, r.tolerance), false);
  return r;
}

CheckReport check_smoothing(const Rearrangement& t, const GridSet& a, const ConvexBody& k,
                            double d, bool expect_violation) {
  if (k.dim != a.grid.dim) throw std::invalid_argument("smoothing: dimension mismatch");
  const double h = a.grid.h;
  if (!(d * inradius_at_o(k) >= 4 * h))
    throw std::invalid_argument("smoothing: dilation radius too small for this grid");

  CheckReport r;
  r.check = "smoothing";
  r.statement = "dilate(T A, K, d) is contained in T(dilate(A, K, d)) up to a 2h layer";
  r.h = h;
  const GridSet ta = apply_set(t, a);
  const GridSet lhs_set = dilate_set(ta, k, d);
  const GridSet rhs_set = apply_set(t, dilate_set(a, k, d));
  const ConvexBody ball = make_ball(a.grid.dim, Vec{{0, 0, 0}}, 1.0);
  const GridSet allowed = dilate_set(rhs_set, ball, 2 * h);

  const Grid& g = a.grid;
  std::vector<std::array<int, 2>> viol;
  for (int iy = 0; iy < g.n[1]; ++iy)
    for (int ix = 0; ix < g.n[0]; ++ix)
      if (lhs_set.m[g.idx(ix, iy)] && !allowed.m[g.idx(ix, iy)]) viol.push_back({ix, iy});

  double max_depth = 0;
  if (!viol.empty()) {
    // Depth = distance to the boundary cells of the right side.
    std::vector<std::array<int, 2>> boundary;
    for (int iy = 0; iy < g.n[1]; ++iy)
      for (int ix = 0; ix < g.n[0]; ++ix) {
        if (!rhs_set.m[g.idx(ix, iy)]) continue;
        const bool edge = !rhs_set.has(ix - 1, iy) || !rhs_set.has(ix + 1, iy) ||
                          (g.dim == 2 && (!rhs_set.has(ix, iy - 1) || !rhs_set.has(ix, iy + 1)));
        if (edge) boundary.push_back({ix, iy});
      }
    for (const auto& v : viol) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& b : boundary) {
        const double dx = (v[0] - b[0]) * h, dy = (v[1] - b[1]) * h;
        best = std::min(best, std::sqrt(dx * dx + dy * dy));
      }
      if (std::isfinite(best)) max_depth = std::max(max_depth, best);
    }
  }
  r.lhs = static_cast<double>(viol.size()) * g.cell_measure();
  r.rhs = 0;
  r.tolerance = 0;
  r.details["violating_cells"] = static_cast<double>(viol.size());
  r.details["max_depth"] = max_depth;
  r.details["boundary_layer"] = 2 * h;
  r.verdict = verdict_from(viol.empty(), expect_violation);
  return r;
}

CheckReport check_modulus_reduction(const Rearrangement& t, const GridFunction& f,
                                    const ConvexBody& k, const std::vector<double>& d_list,
                                    bool expect_violation) {
  if (d_list.empty()) throw std::invalid_argument("modulus_reduction: empty d list");
  CheckReport r;
  r.check = "modulus_reduction";
  r.statement = "modulus(Tf, K, d) <= modulus(f, K, d) + 4h Lip(f) for each d";
  r.h = f.grid.h;
  const GridFunction tf = apply(t, f);
  const double tol = 4 * f.grid.h * lip_bound(f);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < d_list.size(); ++i) {
    const double d = d_list[i];
    const double wf = modulus(f, k, d);
    const double wtf = modulus(tf, k, d);
    r.details[num_key("d", i)] = d;
    r.details[num_key("omega_f", i)] = wf;
    r.details[num_key("omega_tf", i)] = wtf;
    worst = std::max(worst, wtf - wf);
  }
  r.lhs = worst;
  r.rhs = 0;
  r.tolerance = tol;

  const bool sym = is_o_symmetric(k);
  r.details["o_symmetric"] = sym ? 1 : 0;
  bool ring_ok = true;
  if (!sym) {
    // The inradius/circumradius form must hold for every K.
    const double rr = inradius_at_o(k), cr = circumradius(k);
    const ConvexBody ball = make_ball(k.dim, Vec{{0, 0, 0}}, 1.0);
    for (std::size_t i = 0; i < d_list.size(); ++i) {
      const double lw = modulus(tf, ball, d_list[i] * rr);
      const double rw = modulus(f, ball, d_list[i] * cr);
      r.details[num_key("omega_tf_ball_r", i)] = lw;
      r.details[num_key("omega_f_ball_R", i)] = rw;
      if (!(lw <= rw + tol)) ring_ok = false;
    }
  }
  const bool sharp = worst <= tol;
  if (!ring_ok) {
    r.verdict = CheckReport::Verdict::violated;
    r.note = "the inradius/circumradius form failed; this holds for every K";
  } else {
    r.verdict = verdict_from(sharp, expect_violation);
    if (!sharp && !sym)
      r.note = "sharp form violated for a non-symmetric K (outside the theorem's hypothesis)";
  }
  return r;
}

CheckReport check_polya_szego(const Rearrangement& t, const GridFunction& f,
                              const YoungFunction& phi, const PolyaSzegoOptions& opt) {
  CheckReport r;
  r.check = "polya_szego";
  {
    std::string s = opt.p_inf ? "sup-gradient of Tf <= sup-gradient of f"
                              : "gradient energy of Tf <= gradient energy of f";
    if (opt.anis) s += " (anisotropic integrand)";
    if (opt.level > 0) s += " restricted to the superlevel set";
    r.statement = s;
  }
  r.h = f.grid.h;
  const double level = opt.level > 0 ? snap_level(f, opt.level) : 0.0;
  const GridFunction tf = apply(t, f);
  const double lhs = gradient_energy(tf, phi, opt.anis, opt.p_inf, level);
  const double rhs = gradient_energy(f, phi, opt.anis, opt.p_inf, level);
  r.lhs = lhs;
  r.rhs = rhs;

  const double arg_sup = gradient_energy(f, phi, opt.anis, true, 0.0);
  if (opt.p_inf) {
    // Discrete corner cells overshoot the continuum sup-gradient by a
    // bounded geometric factor independent of h.
    r.tolerance = 0.35 * (std::isfinite(rhs) ? rhs : 0.0) + 4 * f.grid.h;
    r.note = "sup form: refinement assertion not applicable";
    r.verdict = verdict_from(le_tol(lhs, rhs, r.tolerance), opt.expect_violation);
    return r;
  }
  const double phi_top = yeval(phi, arg_sup);
  r.tolerance = std::isfinite(phi_top) ? 2.0 * f.grid.h * phi_top * support_scale(f) : 0.0;
  bool ok = le_tol(lhs, rhs, r.tolerance);
  if (std::isinf(rhs) && rhs > 0) r.note = "right side infinite: holds vacuously";

  const double deficit = (std::isfinite(lhs) && std::isfinite(rhs)) ? lhs - rhs : 0.0;
  r.details["deficit"] = deficit;
  if (deficit > 1e-12) {
    // Any discrete deficit must shrink by >= 1.5x at half the spacing,
    // otherwise it is a genuine violation, not a discretization artifact.
    const GridFunction f2 = refine_half(f);
    const GridFunction tf2 = apply(refined(t), f2);
    const double level2 = level > 0 ? snap_level(f2, level) : 0.0;
    const double lhs2 = gradient_energy(tf2, phi, opt.anis, false, level2);
    const double rhs2 = gradient_energy(f2, phi, opt.anis, false, level2);
    const double deficit2 = lhs2 - rhs2;
    r.details["deficit_half_h"] = deficit2;
    if (!(deficit2 <= deficit / 1.5 + 1e-12)) {
      ok = false;
      if (r.note.empty()) r.note = "deficit persists under refinement";
    }
  }
  r.verdict = verdict_from(ok, opt.expect_violation);
  return r;
}

// Largest dilation ladder that keeps the content walk inside the grid: start
// from the default ladder and drop rungs the margin around the occupied bbox
// cannot absorb; if fewer than two survive, fall back to a geometric ladder
// under the margin.
std::vector<double> content_ladder_for(const GridSet& s, const ConvexBody& c) {
  const Grid& g = s.grid;
  const double h = g.h;
  int lo[2] = {g.n[0], g.n[1]}, hi[2] = {-1, -1};
  for (int iy = 0; iy < g.n[1]; ++iy)
    for (int ix = 0; ix < g.n[0]; ++ix)
      if (s.m[g.idx(ix, iy)]) {
        lo[0] = std::min(lo[0], ix);
        hi[0] = std::max(hi[0], ix);
        lo[1] = std::min(lo[1], iy);
        hi[1] = std::max(hi[1], iy);
      }
  if (hi[0] < 0) throw std::invalid_argument("content ladder: empty set");
  int margin_cells = std::min(lo[0], g.n[0] - 1 - hi[0]);
  if (g.dim == 2) margin_cells = std::min({margin_cells, lo[1], g.n[1] - 1 - hi[1]});
  const double emax = (margin_cells * h - 2 * h) / circumradius(c);
  std::vector<double> eps;
  for (double e : default_content_eps(h, g.dim))
    if (e <= emax) eps.push_back(e);
  if (eps.size() < 2) {
    eps.clear();
    for (double e : {emax, 0.71 * emax, 0.5 * emax})
      if (e >= 2 * h) eps.push_back(e);
  }
  if (eps.size() < 2)
    throw std::invalid_argument("content ladder: grid margin too small for dilation");
  return eps;
}

CheckReport check_isoperimetric(const Rearrangement& t, const ConvexBody& k_test,
                                const Grid& grid, std::uint64_t seed) {
  if (k_test.dim != grid.dim) throw std::invalid_argument("isoperimetric: dimension mismatch");
  CheckReport r;
  r.check = "isoperimetric";
  r.statement = "the induced set map does not increase boundary content";
  r.h = grid.h;

  GridSet a(grid);
  for (int iy = 0; iy < grid.n[1]; ++iy)
    for (int ix = 0; ix < grid.n[0]; ++ix)
      if (gauge(k_test, grid.center(ix, iy)) <= 1 + 1e-12) a.m[grid.idx(ix, iy)] = 1;
  if (a.count() == 0)
    throw std::invalid_argument("isoperimetric: test body contains no cell center");

  const ConvexBody ball = make_ball(grid.dim, Vec{{0, 0, 0}}, 1.0);
  const GridSet ta = apply_set(t, a);
  const double content_a = outer_minkowski_content(a, ball, content_ladder_for(a, ball)).value;
  const double content_ta =
      outer_minkowski_content(ta, ball, content_ladder_for(ta, ball)).value;
  r.lhs = content_ta;
  r.rhs = content_a;
  r.tolerance = 0.08 * content_a;
  bool ok = content_ta <= content_a + r.tolerance;

  // The symmetric kinds must map a centered discrete ball to itself.
  if (t.kind == Rearrangement::Kind::sym_decreasing ||
      t.kind == Rearrangement::Kind::schwarz) {
    double half = std::abs(grid.origin[0]);
    if (grid.dim == 2) half = std::min(half, std::abs(grid.origin[1]));
    const double r0 = 0.35 * half;
    const double key_max = (r0 / grid.h) * (r0 / grid.h);
    GridSet b(grid);
    for (int iy = 0; iy < grid.n[1]; ++iy) {
      const double dy =
          grid.dim == 2 ? cell_delta(t.center[1], grid.origin[1], grid.h, iy) : 0;
      for (int ix = 0; ix < grid.n[0]; ++ix) {
        const double dx = cell_delta(t.center[0], grid.origin[0], grid.h, ix);
        if (dx * dx + dy * dy <= key_max) b.m[grid.idx(ix, iy)] = 1;
      }
    }
    const GridSet tb = apply_set(t, b);
    const bool exact = tb.m == b.m;
    r.details["ball_maps_to_ball"] = exact ? 1 : 0;
    ok = ok && exact;
  }

  // Content reduction on five seeded random blobs (unions of three balls).
  Rng rng{seed};
  double scale = std::abs(grid.origin[0]);
  if (grid.dim == 2) scale = std::min(scale, std::abs(grid.origin[1]));
  for (int blob = 0; blob < 5; ++blob) {
    GridSet s(grid);
    for (int part = 0; part < 3; ++part) {
      Vec c{{0, 0, 0}};
      for (int dim = 0; dim < grid.dim; ++dim) c[dim] = rng.uniform(-0.35, 0.35) * scale;
      const double rad = rng.uniform(0.1, 0.2) * scale;
      for (int iy = 0; iy < grid.n[1]; ++iy)
        for (int ix = 0; ix < grid.n[0]; ++ix) {
          const Vec p = grid.center(ix, iy);
          if (norm(vsub(p, c), grid.dim) <= rad) s.m[grid.idx(ix, iy)] = 1;
        }
    }
    if (s.count() == 0) continue;
    const GridSet ts = apply_set(t, s);
    const double cb = outer_minkowski_content(s, ball, content_ladder_for(s, ball)).value;
    const double ct = outer_minkowski_content(ts, ball, content_ladder_for(ts, ball)).value;
    r.details[num_key("blob_content", static_cast<std::size_t>(blob))] = cb;
    r.details[num_key("blob_content_t", static_cast<std::size_t>(blob))] = ct;
    ok = ok && ct <= cb + 0.08 * cb;
  }
  r.verdict = verdict_from(ok, false);
  return r;
}

CheckReport check_subgraph_core(const Rearrangement& t, const GridFunction& f, double a,
                                double d, const AnyBody& c) {
  if (f.grid.dim != 2) throw std::invalid_argument("subgraph_core: needs a 2D function");
  const double h = f.grid.h;
  if (!(d >= 4 * h))
    throw std::invalid_argument("subgraph_core: dilation radius must be at least 4h");
  CheckReport r;
  r.check = "subgraph_core";
  r.statement = "volume of dilate(subgraph(Tf, a), d C) <= volume of dilate(subgraph(f, a), d C)";
  r.h = h;
  const double level = snap_level(f, a);
  const GridFunction tf = apply(t, f);
  const int margin = static_cast<int>(std::ceil(d * circumradius(c) / h)) + 2;
  const VoxelSet vf = voxelize_subgraph(f, level, margin);
  const VoxelSet vtf = voxelize_subgraph(tf, level, margin);
  const double vol_f = measure(vf);
  r.lhs = measure(dilate(vtf, c, d));
  r.rhs = measure(dilate(vf, c, d));
  r.tolerance = 6 * h * (r.rhs - vol_f) / d;
  r.details["subgraph_volume_f"] = vol_f;
  r.details["subgraph_volume_tf"] = measure(vtf);
  r.details["level"] = level;
  r.verdict = verdict_from(le_tol(r.lhs, r.rhs, r.tolerance), false);
  return r;
}

std::vector<CheckReport> kschwarz_energy_gap(const std::vector<double>& p_list, double h) {
  if (p_list.empty()) throw std::invalid_argument("kschwarz_energy_gap: empty p list");
  // Margin: the translated-disk image reaches |x| = 1.3, so pad past that.
  const Grid g = centered_grid(2, h, 1.5);
  GridFunction f(g);
  for (int iy = 0; iy < g.n[1]; ++iy)
    for (int ix = 0; ix < g.n[0]; ++ix) {
      const Vec p = g.center(ix, iy);
      f.v[g.idx(ix, iy)] = std::max(0.0, 1.0 - norm(p, 2));
    }

  const double half_side = std::sqrt(kPi) / 2;
  const ConvexBody square =
      make_box(2, Vec{{-half_side, -half_side, 0}}, Vec{{half_side, half_side, 0}});
  const ConvexBody disk = make_ball(2, Vec{{0.3, 0, 0}}, 1.0);
  const GridFunction tf_square = apply(k_schwarz(square), f);
  const GridFunction tf_disk = apply(k_schwarz(disk), f);

  std::vector<CheckReport> out;
  for (double p : p_list) {
    CheckReport r;
    r.check = "kschwarz_energy_gap";
    std::ostringstream name;
    name << "kschwarz_energy_gap_square_p" << p;
    r.name = name.str();
    r.statement =
        "the p-Dirichlet energy of the cone strictly increases under convex "
        "symmetrization toward the centered square of area pi";
    r.h = h;
    const YoungFunction pw = young_power(p);
    r.lhs = gradient_energy(tf_square, pw);
    r.rhs = gradient_energy(f, pw);
    r.tolerance = 0.02 * r.rhs;
    if (p == 1.0) {
      r.details["reference_lhs"] = 2 * std::sqrt(kPi);
      r.details["reference_rhs"] = kPi;
    } else if (p == 2.0) {
      r.details["reference_lhs"] = 4.0;
      r.details["reference_rhs"] = kPi;
    }
    r.verdict = verdict_from(le_tol(r.lhs, r.rhs, r.tolerance), true);
    out.push_back(std::move(r));
  }

  CheckReport rd;
  rd.check = "kschwarz_energy_gap";
  rd.name = "kschwarz_energy_gap_translated_disk_p1";
  rd.statement =
      "the 1-Dirichlet energy of the cone is preserved under convex symmetrization "
      "toward a translated disk";
  rd.h = h;
  const YoungFunction p1 = young_power(1);
  rd.lhs = gradient_energy(tf_disk, p1);
  rd.rhs = gradient_energy(f, p1);
  rd.tolerance = 0.025 * rd.rhs;
  rd.details["reference_both_sides"] = kPi;
  rd.verdict = verdict_from(le_tol(rd.lhs, rd.rhs, rd.tolerance), false);
  out.push_back(std::move(rd));
  return out;
}

CheckReport check_content_formula(const GridFunction& f, double a, const AnyBody& c,
                                  std::vector<double> eps) {
  CheckReport r;
  r.check = "content_formula";
  r.statement =
      "boundary content of the truncated subgraph: volume quotients = graph integral";
  r.h = f.grid.h;
  const double level = snap_level(f, a);
  const SubgraphContent sc = subgraph_content(f, level, c, std::move(eps));
  r.lhs = std::abs(sc.dilation.value - sc.graph_integral);
  r.rhs = 0;
  r.tolerance = 0.05 * std::abs(sc.graph_integral);
  r.details["dilation_estimate"] = sc.dilation.value;
  r.details["graph_integral"] = sc.graph_integral;
  r.details["level"] = level;
  for (std::size_t i = 0; i < sc.dilation.quotients.size(); ++i) {
    r.details[num_key("eps", i)] = sc.dilation.epsilons[i];
    r.details[num_key("quotient", i)] = sc.dilation.quotients[i];
  }
  r.verdict = verdict_from(r.lhs <= r.tolerance, false);
  return r;
}

CheckReport check_polarization_flow(const GridFunction& f, int steps, std::uint64_t seed) {
  CheckReport r;
  r.check = "polarization_flow";
  r.statement =
      "the L2 distance to the symmetric decreasing rearrangement never increases "
      "along a random center-oriented polarization flow";
  r.h = f.grid.h;
  const FlowTrace flow = polarization_flow(f, steps, seed);
  const std::vector<double>& dist = flow.distance;
  // Each step contracts toward any polarization-invariant reference; the
  // rank-filled grid rearrangement misses invariance by reference_defect,
  // which bounds the admissible growth per step.
  double max_excess = -std::numeric_limits<double>::infinity();
  double max_defect = 0;
  for (std::size_t i = 0; i + 1 < dist.size(); ++i) {
    max_excess = std::max(max_excess, dist[i + 1] - dist[i] - flow.reference_defect[i]);
    max_defect = std::max(max_defect, flow.reference_defect[i]);
  }
  r.lhs = max_excess;
  r.rhs = 0;
  r.tolerance = 1e-9 * (1 + dist.front());
  const bool mono = max_excess <= r.tolerance;
  const bool decreased = dist.front() <= 1e-12 || dist.back() < dist.front() - 1e-9;
  r.details["initial_distance"] = dist.front();
  r.details["final_distance"] = dist.back();
  r.details["max_reference_defect"] = max_defect;
  r.details["steps"] = static_cast<double>(steps);
  if (!decreased && mono) r.note = "flow made no strict progress from an asymmetric start";
  r.verdict = verdict_from(mono && decreased, false);
  return r;
}

}  // namespace symlab
