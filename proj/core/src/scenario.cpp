#include "symlab/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "symlab/rng.hpp"

namespace symlab {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ScenarioError(path + ": " + msg);
}

std::string sub(const std::string& path, const std::string& k) { return path + "." + k; }
std::string item(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

const json* find(const json& j, const char* k) {
  if (!j.is_object()) return nullptr;
  auto it = j.find(k);
  return it == j.end() ? nullptr : &*it;
}

const json& need(const json& j, const char* k, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(k);
  if (it == j.end()) fail(sub(path, k), "missing required field");
  return *it;
}

double as_num(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

long as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long>();
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected true or false");
  return j.get<bool>();
}

std::string as_str(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

const json& as_arr(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

double need_num(const json& j, const char* k, const std::string& path) {
  return as_num(need(j, k, path), sub(path, k));
}
long need_int(const json& j, const char* k, const std::string& path) {
  return as_int(need(j, k, path), sub(path, k));
}
std::string need_str(const json& j, const char* k, const std::string& path) {
  return as_str(need(j, k, path), sub(path, k));
}

double opt_num(const json& j, const char* k, const std::string& path, double def) {
  const json* p = find(j, k);
  return p ? as_num(*p, sub(path, k)) : def;
}
long opt_int(const json& j, const char* k, const std::string& path, long def) {
  const json* p = find(j, k);
  return p ? as_int(*p, sub(path, k)) : def;
}
bool opt_bool(const json& j, const char* k, const std::string& path, bool def) {
  const json* p = find(j, k);
  return p ? as_bool(*p, sub(path, k)) : def;
}

Vec parse_vec(const json& j, int dim, const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    fail(path, "expected an array of " + std::to_string(dim) + " coordinate(s)");
  Vec v{{0, 0, 0}};
  for (int i = 0; i < dim; ++i) v[static_cast<std::size_t>(i)] = as_num(j[i], item(path, i));
  return v;
}

// Splits {"kind": {...}} into its single key/value pair.
std::pair<std::string, const json*> one_key(const json& j, const std::string& path,
                                            const char* what) {
  if (!j.is_object() || j.size() != 1)
    fail(path, std::string("expected a one-key object describing a ") + what);
  auto it = j.begin();
  return {it.key(), &it.value()};
}

ConvexBody parse_body(const json& j, int dim, const std::string& path) {
  const auto [kind, a] = one_key(j, path, "body (ball | box | polytope)");
  const std::string p = sub(path, kind);
  try {
    if (kind == "ball") {
      Vec c{{0, 0, 0}};
      if (const json* jc = find(*a, "center")) c = parse_vec(*jc, dim, sub(p, "center"));
      return make_ball(dim, c, need_num(*a, "radius", p));
    }
    if (kind == "box") {
      return make_box(dim, parse_vec(need(*a, "lo", p), dim, sub(p, "lo")),
                      parse_vec(need(*a, "hi", p), dim, sub(p, "hi")));
    }
    if (kind == "polytope") {
      const json& vj = as_arr(need(*a, "vertices", p), sub(p, "vertices"));
      std::vector<Vec> vs;
      for (std::size_t i = 0; i < vj.size(); ++i)
        vs.push_back(parse_vec(vj[i], dim, item(sub(p, "vertices"), i)));
      return make_polytope(dim, std::move(vs));
    }
  } catch (const std::invalid_argument& e) {
    fail(p, e.what());
  }
  fail(path, "unknown body kind '" + kind + "' (expected ball | box | polytope)");
}

YoungFunction parse_young(const json& j, const std::string& path) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "sqrt_shift") return young_sqrt_shift();
    if (s == "phi_min") return young_phi_min();
    if (s == "phi_max") return young_phi_max();
    fail(path, "unknown integrand '" + s + "' (expected sqrt_shift | phi_min | phi_max)");
  }
  const auto [kind, a] =
      one_key(j, path, "convex integrand (power | piecewise | conjugate | truncate)");
  const std::string p = sub(path, kind);
  try {
    if (kind == "power")
      return young_power(need_num(*a, "p", p), opt_num(*a, "scale", p, 1.0));
    if (kind == "piecewise") {
      const json& pts = as_arr(need(*a, "points", p), sub(p, "points"));
      std::vector<std::pair<double, double>> points;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const std::string pi = item(sub(p, "points"), i);
        if (!pts[i].is_array() || pts[i].size() != 2) fail(pi, "expected a pair [t, value]");
        points.emplace_back(as_num(pts[i][0], item(pi, 0)), as_num(pts[i][1], item(pi, 1)));
      }
      const json& fs = need(*a, "final_slope", p);
      double slope;
      if (fs.is_string() && fs.get<std::string>() == "inf")
        slope = std::numeric_limits<double>::infinity();
      else
        slope = as_num(fs, sub(p, "final_slope"));
      return young_piecewise(std::move(points), slope);
    }
    if (kind == "conjugate") return young_conjugate(parse_young(*a, p));
    if (kind == "truncate")
      return young_truncate(parse_young(need(*a, "of", p), sub(p, "of")),
                            need_num(*a, "r", p));
  } catch (const std::invalid_argument& e) {
    fail(p, e.what());
  }
  fail(path, "unknown integrand kind '" + kind + "'");
}

struct Ctx {
  Grid grid;
  std::uint64_t seed = 1;
  std::map<std::string, ConvexBody> bodies;
  std::map<std::string, GridFunction> functions;
  std::map<std::string, Rearrangement> operators;
};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t x = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    x ^= c;
    x *= 0x100000001b3ull;
  }
  return x;
}

// Per-check stream: stable under reordering and under adding other checks.
std::uint64_t check_seed(const Ctx& ctx, const std::string& name) {
  return Rng(ctx.seed).fork(fnv1a(name)).state;
}

const ConvexBody& named_body(const Ctx& ctx, const std::string& name,
                             const std::string& path) {
  auto it = ctx.bodies.find(name);
  if (it == ctx.bodies.end()) fail(path, "unknown body '" + name + "'");
  return it->second;
}

ConvexBody body_ref(const json& j, const Ctx& ctx, const std::string& path) {
  if (j.is_string()) return named_body(ctx, j.get<std::string>(), path);
  return parse_body(j, ctx.grid.dim, path);
}

GridSet discretize(const Grid& g, const ConvexBody& k) {
  GridSet a(g);
  for (int iy = 0; iy < g.n[1]; ++iy)
    for (int ix = 0; ix < g.n[0]; ++ix)
      if (gauge(k, g.center(ix, iy)) <= 1 + 1e-12) a.set(ix, iy);
  return a;
}

GridSet blob_set(const Grid& g, std::uint64_t seed, int pieces) {
  Rng rng(seed);
  double ext = 0.5 * (g.upper(0) - g.origin[0]);
  if (g.dim == 2) ext = std::min(ext, 0.5 * (g.upper(1) - g.origin[1]));
  std::vector<Vec> centers;
  std::vector<double> radii;
  for (int i = 0; i < pieces; ++i) {
    Vec c{{0, 0, 0}};
    for (int a = 0; a < g.dim; ++a)
      c[static_cast<std::size_t>(a)] = rng.uniform(-0.35, 0.35) * ext;
    centers.push_back(c);
    radii.push_back(rng.uniform(0.1, 0.2) * ext);
  }
  GridSet a(g);
  for (int iy = 0; iy < g.n[1]; ++iy)
    for (int ix = 0; ix < g.n[0]; ++ix) {
      const Vec x = g.center(ix, iy);
      for (int i = 0; i < pieces; ++i)
        if (norm(vsub(x, centers[static_cast<std::size_t>(i)]), g.dim) <=
            radii[static_cast<std::size_t>(i)]) {
          a.set(ix, iy);
          break;
        }
    }
  return a;
}

GridFunction parse_function(const json& j, const Ctx& ctx, const std::string& path);

GridSet parse_set(const json& j, const Ctx& ctx, const std::string& path) {
  const auto [kind, a] =
      one_key(j, path, "set (body | ball | box | blob | superlevel)");
  const std::string p = sub(path, kind);
  if (kind == "body") return discretize(ctx.grid, named_body(ctx, as_str(*a, p), p));
  if (kind == "ball" || kind == "box") return discretize(ctx.grid, parse_body(j, ctx.grid.dim, path));
  if (kind == "blob") {
    const long pieces = opt_int(*a, "pieces", p, 3);
    if (pieces < 1 || pieces > 64) fail(sub(p, "pieces"), "expected 1..64 pieces");
    const std::uint64_t seed =
        ctx.seed ^ fnv1a("blob") ^ static_cast<std::uint64_t>(opt_int(*a, "seed_offset", p, 0));
    return blob_set(ctx.grid, Rng(seed).next(), static_cast<int>(pieces));
  }
  if (kind == "superlevel") {
    const GridFunction f = parse_function(need(*a, "function", p), ctx, sub(p, "function"));
    const double level = need_num(*a, "level", p);
    return superlevel(f, snap_level(f, level));
  }
  fail(path, "unknown set kind '" + kind + "'");
}

template <class F>
GridFunction build_fn(const Grid& g, F&& eval) {
  GridFunction f(g);
  for (int iy = 0; iy < g.n[1]; ++iy)
    for (int ix = 0; ix < g.n[0]; ++ix) f.at(ix, iy) = std::max(0.0, eval(g.center(ix, iy)));
  return f;
}

GridFunction parse_function_literal(const json& j, const Ctx& ctx, const std::string& path) {
  const auto [kind, a] = one_key(
      j, path, "function (cone | gauge_cone | tent | bump | indicator | sum | max | samples)");
  const std::string p = sub(path, kind);
  const Grid& g = ctx.grid;
  if (kind == "cone") {
    Vec c{{0, 0, 0}};
    if (const json* jc = find(*a, "center")) c = parse_vec(*jc, g.dim, sub(p, "center"));
    const double r = need_num(*a, "radius", p);
    const double v = opt_num(*a, "height", p, 1.0);
    if (r <= 0) fail(sub(p, "radius"), "expected a positive radius");
    return build_fn(g, [&](const Vec& x) { return v * (1 - norm(vsub(x, c), g.dim) / r); });
  }
  if (kind == "gauge_cone") {
    const ConvexBody k = body_ref(need(*a, "body", p), ctx, sub(p, "body"));
    const double v = opt_num(*a, "height", p, 1.0);
    return build_fn(g, [&](const Vec& x) { return v * (1 - gauge(k, x)); });
  }
  if (kind == "tent") {
    Vec c{{0, 0, 0}};
    if (const json* jc = find(*a, "center")) c = parse_vec(*jc, g.dim, sub(p, "center"));
    const json& wj = need(*a, "half_widths", p);
    const Vec w = parse_vec(wj, g.dim, sub(p, "half_widths"));
    for (int i = 0; i < g.dim; ++i)
      if (w[static_cast<std::size_t>(i)] <= 0)
        fail(sub(p, "half_widths"), "expected positive half widths");
    const double v = opt_num(*a, "height", p, 1.0);
    return build_fn(g, [&](const Vec& x) {
      double m = 0;
      for (int i = 0; i < g.dim; ++i) {
        const std::size_t s = static_cast<std::size_t>(i);
        m = std::max(m, std::abs(x[s] - c[s]) / w[s]);
      }
      return v * (1 - m);
    });
  }
  if (kind == "bump") {
    Vec c{{0, 0, 0}};
    if (const json* jc = find(*a, "center")) c = parse_vec(*jc, g.dim, sub(p, "center"));
    const double r = need_num(*a, "radius", p);
    const double v = opt_num(*a, "height", p, 1.0);
    if (r <= 0) fail(sub(p, "radius"), "expected a positive radius");
    return build_fn(g, [&](const Vec& x) {
      const double d = norm(vsub(x, c), g.dim) / r;
      return d >= 1 ? 0.0 : v * (1 - d * d) * (1 - d * d);
    });
  }
  if (kind == "indicator") {
    const GridSet s = parse_set(need(*a, "of", p), ctx, sub(p, "of"));
    const double v = opt_num(*a, "height", p, 1.0);
    GridFunction f(g);
    for (int iy = 0; iy < g.n[1]; ++iy)
      for (int ix = 0; ix < g.n[0]; ++ix)
        if (s.has(ix, iy)) f.at(ix, iy) = v;
    return f;
  }
  if (kind == "sum" || kind == "max") {
    const json& items = as_arr(*a, p);
    if (items.empty()) fail(p, "expected at least one term");
    GridFunction out = parse_function(items[0], ctx, item(p, 0));
    for (std::size_t i = 1; i < items.size(); ++i) {
      const GridFunction t = parse_function(items[i], ctx, item(p, i));
      for (std::size_t c = 0; c < out.v.size(); ++c)
        out.v[c] = kind == "sum" ? out.v[c] + t.v[c] : std::max(out.v[c], t.v[c]);
    }
    return out;
  }
  if (kind == "samples") {
    const json& vals = as_arr(need(*a, "values", p), sub(p, "values"));
    GridFunction f(g);
    if (g.dim == 1) {
      if (static_cast<int>(vals.size()) != g.n[0])
        fail(sub(p, "values"), "expected " + std::to_string(g.n[0]) + " values");
      for (int ix = 0; ix < g.n[0]; ++ix)
        f.at(ix, 0) = as_num(vals[static_cast<std::size_t>(ix)],
                             item(sub(p, "values"), static_cast<std::size_t>(ix)));
    } else {
      if (static_cast<int>(vals.size()) != g.n[1])
        fail(sub(p, "values"), "expected " + std::to_string(g.n[1]) + " rows");
      for (int iy = 0; iy < g.n[1]; ++iy) {
        const std::string rp = item(sub(p, "values"), static_cast<std::size_t>(iy));
        const json& row = as_arr(vals[static_cast<std::size_t>(iy)], rp);
        if (static_cast<int>(row.size()) != g.n[0])
          fail(rp, "expected " + std::to_string(g.n[0]) + " values per row");
        for (int ix = 0; ix < g.n[0]; ++ix)
          f.at(ix, iy) =
              as_num(row[static_cast<std::size_t>(ix)], item(rp, static_cast<std::size_t>(ix)));
      }
    }
    return f;
  }
  fail(path, "unknown function kind '" + kind + "'");
}

GridFunction parse_function(const json& j, const Ctx& ctx, const std::string& path) {
  GridFunction f;
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    auto it = ctx.functions.find(name);
    if (it == ctx.functions.end()) fail(path, "unknown function '" + name + "'");
    return it->second;
  }
  f = parse_function_literal(j, ctx, path);
  try {
    validate_nonneg(f);
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  if (padding(f) < 1)
    fail(path, "the function's support touches the grid boundary; enlarge the extent");
  return f;
}

Rearrangement parse_operator(const json& j, const Ctx& ctx, const std::string& path) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    auto it = ctx.operators.find(name);
    if (it == ctx.operators.end()) fail(path, "unknown operator '" + name + "'");
    return it->second;
  }
  const auto [kind, a] =
      one_key(j, path,
              "rearrangement (sym_decreasing | steiner | schwarz | k_schwarz | "
              "polarization | composite)");
  const std::string p = sub(path, kind);
  const Grid& g = ctx.grid;
  try {
    if (kind == "sym_decreasing" || kind == "schwarz") {
      Vec c{{0, 0, 0}};
      if (const json* jc = find(*a, "center")) c = parse_vec(*jc, g.dim, sub(p, "center"));
      return kind == "schwarz" ? schwarz(c) : sym_decreasing(c);
    }
    if (kind == "steiner") {
      const long axis = need_int(*a, "axis", p);
      if (axis < 0 || axis >= g.dim) fail(sub(p, "axis"), "axis out of range for this grid");
      return steiner(static_cast<int>(axis), opt_num(*a, "line", p, 0.0));
    }
    if (kind == "k_schwarz")
      return k_schwarz(body_ref(need(*a, "body", p), ctx, sub(p, "body")));
    if (kind == "polarization") {
      const long axis = need_int(*a, "axis", p);
      if (axis < 0 || axis >= g.dim) fail(sub(p, "axis"), "axis out of range for this grid");
      const double pos = need_num(*a, "position", p);
      const double offset = (pos - g.origin[static_cast<std::size_t>(axis)]) / g.h;
      const double snapped = std::round(2 * offset) / 2;
      if (std::abs(offset - snapped) > 1e-6)
        fail(sub(p, "position"),
             "the reflection hyperplane must pass through cell centers or cell faces");
      const json& side = need(*a, "positive_side", p);
      bool positive;
      if (side.is_boolean())
        positive = side.get<bool>();
      else if (side.is_string() && (side.get<std::string>() == "+" || side.get<std::string>() == "-"))
        positive = side.get<std::string>() == "+";
      else
        fail(sub(p, "positive_side"), "expected true/false or \"+\"/\"-\"");
      return polarization(static_cast<int>(axis), snapped, positive);
    }
    if (kind == "composite") {
      const json& items = as_arr(*a, p);
      if (items.empty()) fail(p, "expected at least one part");
      std::vector<Rearrangement> parts;
      for (std::size_t i = 0; i < items.size(); ++i)
        parts.push_back(parse_operator(items[i], ctx, item(p, i)));
      return composite(std::move(parts));
    }
  } catch (const std::invalid_argument& e) {
    fail(p, e.what());
  }
  fail(path, "unknown rearrangement kind '" + kind + "'");
}

AnyBody parse_solid(const json& j, const Ctx& ctx, const std::string& path) {
  const auto [kind, a] = one_key(j, path, "solid (ball | phi_body)");
  const std::string p = sub(path, kind);
  try {
    if (kind == "ball") return make_ball(3, Vec{{0, 0, 0}}, need_num(*a, "radius", p));
    if (kind == "phi_body") {
      const YoungFunction phi = parse_young(need(*a, "phi", p), sub(p, "phi"));
      const ConvexBody k = body_ref(need(*a, "body", p), ctx, sub(p, "body"));
      return build_phi_body(phi, k, need_num(*a, "M", p));
    }
  } catch (const std::invalid_argument& e) {
    fail(p, e.what());
  }
  fail(path, "unknown solid kind '" + kind + "' (expected ball | phi_body)");
}

const char* kVerdictNames[] = {"holds", "violated", "violated_as_expected", "error"};

std::string parse_expect_one(const json& j, const std::string& path) {
  const std::string s = as_str(j, path);
  for (const char* v : kVerdictNames)
    if (s == v) return s;
  fail(path, "unknown verdict '" + s +
                 "' (expected holds | violated | violated_as_expected | error)");
}

struct JobOutput {
  std::vector<CheckReport> reports;
  std::map<std::string, std::vector<std::pair<double, double>>> curves;
};

struct Job {
  std::string name;
  std::string kind;
  std::function<JobOutput()> run;
  std::string expect_all;                        // applies to every report if non-empty
  std::map<std::string, std::string> expect_by;  // otherwise keyed by report name
  double tol_override = -1;
};

void check_fields(const json& j, std::initializer_list<const char*> allowed,
                  const std::string& path) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok) fail(sub(path, it.key()), "unknown field for this check");
  }
}

JobOutput single(CheckReport r) {
  JobOutput o;
  o.reports.push_back(std::move(r));
  return o;
}

Job parse_check(const json& j, const Ctx& ctx, const std::string& path) {
  Job job;
  job.name = need_str(j, "name", path);
  if (job.name.empty() ||
      job.name.find_first_not_of(
          "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_.-") !=
          std::string::npos)
    fail(sub(path, "name"), "names may use letters, digits, '_', '.', '-' only");
  job.kind = need_str(j, "check", path);
  const json& ex = need(j, "expect", path);
  if (ex.is_string()) {
    job.expect_all = parse_expect_one(ex, sub(path, "expect"));
  } else if (ex.is_object()) {
    for (auto it = ex.begin(); it != ex.end(); ++it)
      job.expect_by[it.key()] = parse_expect_one(it.value(), sub(sub(path, "expect"), it.key()));
    if (job.expect_by.empty()) fail(sub(path, "expect"), "expected at least one verdict");
  } else {
    fail(sub(path, "expect"), "expected a verdict string or a name-to-verdict object");
  }
  if (const json* t = find(j, "tolerance_override")) {
    job.tol_override = as_num(*t, sub(path, "tolerance_override"));
    if (job.tol_override < 0) fail(sub(path, "tolerance_override"), "expected a nonnegative number");
  }
  const bool expect_violation = job.expect_all == "violated_as_expected";
  const std::uint64_t seed = check_seed(ctx, job.name);
  const std::string& kind = job.kind;

  if (kind == "equimeasurable") {
    check_fields(j, {"check", "name", "expect", "tolerance_override", "operator", "function"},
                 path);
    auto t = parse_operator(need(j, "operator", path), ctx, sub(path, "operator"));
    auto f = parse_function(need(j, "function", path), ctx, sub(path, "function"));
    job.run = [t, f] { return single(check_equimeasurable(t, f)); };
  } else if (kind == "lp_contraction") {
    check_fields(j,
                 {"check", "name", "expect", "tolerance_override", "operator", "function",
                  "function2", "phi"},
                 path);
    auto t = parse_operator(need(j, "operator", path), ctx, sub(path, "operator"));
    auto f = parse_function(need(j, "function", path), ctx, sub(path, "function"));
    auto g = parse_function(need(j, "function2", path), ctx, sub(path, "function2"));
    auto phi = parse_young(need(j, "phi", path), sub(path, "phi"));
    job.run = [t, f, g, phi] { return single(check_lp_contraction(t, f, g, phi)); };
  } else if (kind == "crz") {
    check_fields(j,
                 {"check", "name", "expect", "tolerance_override", "operator", "function",
                  "function2", "bivariate"},
                 path);
    auto t = parse_operator(need(j, "operator", path), ctx, sub(path, "operator"));
    auto f = parse_function(need(j, "function", path), ctx, sub(path, "function"));
    auto g = parse_function(need(j, "function2", path), ctx, sub(path, "function2"));
    const json& bj = need(j, "bivariate", path);
    std::function<double(double, double)> func;
    std::string func_name;
    if (bj.is_string()) {
      func_name = bj.get<std::string>();
      if (func_name == "product")
        func = [](double s, double u) { return s * u; };
      else if (func_name == "min")
        func = [](double s, double u) { return std::min(s, u); };
      else
        fail(sub(path, "bivariate"), "unknown functional '" + func_name + "'");
    } else {
      const auto [bk, ba] = one_key(bj, sub(path, "bivariate"), "functional");
      if (bk != "neg_abs_diff")
        fail(sub(path, "bivariate"), "unknown functional '" + bk + "'");
      const double pw = need_num(*ba, "p", sub(sub(path, "bivariate"), bk));
      if (pw < 1) fail(sub(sub(path, "bivariate"), bk), "expected p >= 1");
      func = [pw](double s, double u) { return -std::pow(std::abs(s - u), pw); };
      std::ostringstream os;
      os << "neg_abs_diff_p" << pw;
      func_name = os.str();
    }
    job.run = [t, f, g, func, func_name] { return single(check_crz(t, f, g, func, func_name)); };
  } else if (kind == "smoothing") {
    check_fields(
        j, {"check", "name", "expect", "tolerance_override", "operator", "set", "body", "d"},
        path);
    auto t = parse_operator(need(j, "operator", path), ctx, sub(path, "operator"));
    auto a = parse_set(need(j, "set", path), ctx, sub(path, "set"));
    auto k = body_ref(need(j, "body", path), ctx, sub(path, "body"));
    const double d = need_num(j, "d", path);
    job.run = [t, a, k, d, expect_violation] {
      return single(check_smoothing(t, a, k, d, expect_violation));
    };
  } else if (kind == "modulus_reduction") {
    check_fields(j,
                 {"check", "name", "expect", "tolerance_override", "operator", "function",
                  "body", "d_list"},
                 path);
    auto t = parse_operator(need(j, "operator", path), ctx, sub(path, "operator"));
    auto f = parse_function(need(j, "function", path), ctx, sub(path, "function"));
    auto k = body_ref(need(j, "body", path), ctx, sub(path, "body"));
    const json& dj = as_arr(need(j, "d_list", path), sub(path, "d_list"));
    std::vector<double> ds;
    for (std::size_t i = 0; i < dj.size(); ++i)
      ds.push_back(as_num(dj[i], item(sub(path, "d_list"), i)));
    job.run = [t, f, k, ds, expect_violation] {
      return single(check_modulus_reduction(t, f, k, ds, expect_violation));
    };
  } else if (kind == "polya_szego") {
    check_fields(j,
                 {"check", "name", "expect", "tolerance_override", "operator", "function",
                  "phi", "anisotropic_body", "p_inf", "level"},
                 path);
    auto t = parse_operator(need(j, "operator", path), ctx, sub(path, "operator"));
    auto f = parse_function(need(j, "function", path), ctx, sub(path, "function"));
    auto phi = parse_young(need(j, "phi", path), sub(path, "phi"));
    std::shared_ptr<ConvexBody> anis;
    if (const json* aj = find(j, "anisotropic_body"))
      anis = std::make_shared<ConvexBody>(body_ref(*aj, ctx, sub(path, "anisotropic_body")));
    PolyaSzegoOptions opt;
    opt.p_inf = opt_bool(j, "p_inf", path, false);
    opt.level = opt_num(j, "level", path, 0.0);
    opt.expect_violation = expect_violation;
    job.run = [t, f, phi, anis, opt]() mutable {
      opt.anis = anis.get();
      return single(check_polya_szego(t, f, phi, opt));
    };
  } else if (kind == "isoperimetric") {
    check_fields(j, {"check", "name", "expect", "tolerance_override", "operator", "body"},
                 path);
    auto t = parse_operator(need(j, "operator", path), ctx, sub(path, "operator"));
    auto k = body_ref(need(j, "body", path), ctx, sub(path, "body"));
    const Grid g = ctx.grid;
    job.run = [t, k, g, seed] { return single(check_isoperimetric(t, k, g, seed)); };
  } else if (kind == "subgraph_core") {
    check_fields(j,
                 {"check", "name", "expect", "tolerance_override", "operator", "function",
                  "level", "d", "solid"},
                 path);
    auto t = parse_operator(need(j, "operator", path), ctx, sub(path, "operator"));
    auto f = parse_function(need(j, "function", path), ctx, sub(path, "function"));
    const double level = need_num(j, "level", path);
    const double d = need_num(j, "d", path);
    auto c = parse_solid(need(j, "solid", path), ctx, sub(path, "solid"));
    job.run = [t, f, level, d, c] { return single(check_subgraph_core(t, f, level, d, c)); };
  } else if (kind == "kschwarz_energy_gap") {
    check_fields(j, {"check", "name", "expect", "tolerance_override", "p_list"}, path);
    const json& pj = as_arr(need(j, "p_list", path), sub(path, "p_list"));
    std::vector<double> ps;
    for (std::size_t i = 0; i < pj.size(); ++i) {
      ps.push_back(as_num(pj[i], item(sub(path, "p_list"), i)));
      if (ps.back() < 1) fail(item(sub(path, "p_list"), i), "expected p >= 1");
    }
    const double h = ctx.grid.h;
    job.run = [ps, h] {
      JobOutput o;
      o.reports = kschwarz_energy_gap(ps, h);
      return o;
    };
  } else if (kind == "content_formula") {
    check_fields(j,
                 {"check", "name", "expect", "tolerance_override", "function", "level",
                  "solid", "eps"},
                 path);
    auto f = parse_function(need(j, "function", path), ctx, sub(path, "function"));
    const double level = need_num(j, "level", path);
    auto c = parse_solid(need(j, "solid", path), ctx, sub(path, "solid"));
    std::vector<double> eps;
    if (const json* ej = find(j, "eps")) {
      const json& ea = as_arr(*ej, sub(path, "eps"));
      for (std::size_t i = 0; i < ea.size(); ++i)
        eps.push_back(as_num(ea[i], item(sub(path, "eps"), i)));
    }
    job.run = [f, level, c, eps] { return single(check_content_formula(f, level, c, eps)); };
  } else if (kind == "polarization_flow") {
    check_fields(j, {"check", "name", "expect", "tolerance_override", "function", "steps"},
                 path);
    auto f = parse_function(need(j, "function", path), ctx, sub(path, "function"));
    const long steps = need_int(j, "steps", path);
    if (steps < 1 || steps > 1000000) fail(sub(path, "steps"), "expected 1..1000000 steps");
    const std::string name = job.name;
    job.run = [f, steps, seed, name] {
      JobOutput o;
      o.reports.push_back(check_polarization_flow(f, static_cast<int>(steps), seed));
      const FlowTrace flow = polarization_flow(f, static_cast<int>(steps), seed);
      auto& rows = o.curves["flow_" + name];
      for (std::size_t i = 0; i < flow.distance.size(); ++i)
        rows.emplace_back(static_cast<double>(i), flow.distance[i]);
      return o;
    };
  } else {
    std::string known;
    for (const CheckInfo& c : list_checks()) known += (known.empty() ? "" : ", ") + c.key;
    fail(sub(path, "check"), "unknown check '" + kind + "' (known: " + known + ")");
  }
  return job;
}

bool le_override(double lhs, double rhs, double tol) {
  if (std::isinf(rhs) && rhs > 0) return true;
  if (std::isinf(lhs) && lhs > 0) return false;
  return lhs <= rhs + tol;
}

std::string fmt_num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json jnum(double v) { return std::isfinite(v) ? json(v) : json(fmt_num(v)); }

void write_atomic(const std::filesystem::path& target, const std::string& content) {
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ScenarioError("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw ScenarioError("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

}  // namespace

ScenarioResult run_scenario(const std::string& json_text, const ScenarioOptions& opt,
                            const std::string& source) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(source + ": " + e.what());
  }
  if (!root.is_object()) fail(source, "the top level must be an object");

  Ctx ctx;
  const std::string gp = sub(source, "grid");
  const json& gj = need(root, "grid", source);
  double h = need_num(gj, "h", gp);
  if (opt.h_override > 0) h = opt.h_override;
  const double extent = need_num(gj, "extent", gp);
  const long dim = opt_int(gj, "dim", gp, 2);
  if (dim != 1 && dim != 2) fail(sub(gp, "dim"), "expected dimension 1 or 2");
  if (!(h > 0) || !std::isfinite(h)) fail(sub(gp, "h"), "expected a positive spacing");
  if (!(extent >= h) || !std::isfinite(extent))
    fail(sub(gp, "extent"), "expected extent >= h (the grid covers [-extent, extent])");
  if (extent / h > 4096) fail(gp, "grid too fine: extent/h must not exceed 4096");
  ctx.grid = centered_grid(static_cast<int>(dim), h, extent);

  if (opt.has_seed_override) {
    ctx.seed = opt.seed_override;
  } else if (const json* sj = find(root, "seed")) {
    const long s = as_int(*sj, sub(source, "seed"));
    if (s < 0) fail(sub(source, "seed"), "expected a nonnegative integer");
    ctx.seed = static_cast<std::uint64_t>(s);
  }

  if (const json* bj = find(root, "bodies")) {
    if (!bj->is_object()) fail(sub(source, "bodies"), "expected an object of named bodies");
    for (auto it = bj->begin(); it != bj->end(); ++it)
      ctx.bodies.emplace(it.key(),
                         parse_body(it.value(), ctx.grid.dim, sub(sub(source, "bodies"), it.key())));
  }
  if (const json* fj = find(root, "functions")) {
    if (!fj->is_object()) fail(sub(source, "functions"), "expected an object of named functions");
    for (auto it = fj->begin(); it != fj->end(); ++it)
      ctx.functions.emplace(it.key(),
                            parse_function(it.value(), ctx, sub(sub(source, "functions"), it.key())));
  }
  if (const json* oj = find(root, "operators")) {
    if (!oj->is_object()) fail(sub(source, "operators"), "expected an object of named operators");
    for (auto it = oj->begin(); it != oj->end(); ++it)
      ctx.operators.emplace(it.key(),
                            parse_operator(it.value(), ctx, sub(sub(source, "operators"), it.key())));
  }

  const std::string cp = sub(source, "checks");
  const json& cj = as_arr(need(root, "checks", source), cp);
  if (cj.empty()) fail(cp, "expected at least one check");
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < cj.size(); ++i) jobs.push_back(parse_check(cj[i], ctx, item(cp, i)));
  for (std::size_t i = 0; i < jobs.size(); ++i)
    for (std::size_t k = i + 1; k < jobs.size(); ++k)
      if (jobs[i].name == jobs[k].name)
        fail(item(cp, k), "duplicate check name '" + jobs[k].name + "'");

  std::vector<JobOutput> outs(jobs.size());
  std::atomic<std::size_t> cursor{0};
  auto work = [&] {
    for (std::size_t i; (i = cursor.fetch_add(1)) < jobs.size();) {
      const auto t0 = std::chrono::steady_clock::now();
      try {
        outs[i] = jobs[i].run();
      } catch (const std::exception& e) {
        CheckReport r;
        r.name = jobs[i].name;
        r.check = jobs[i].kind;
        r.verdict = CheckReport::Verdict::error;
        r.note = e.what();
        r.h = ctx.grid.h;
        outs[i] = JobOutput{};
        outs[i].reports.push_back(std::move(r));
      }
      const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      for (CheckReport& r : outs[i].reports) {
        r.runtime_sec = dt;
        if (r.name.empty()) r.name = jobs[i].name;
      }
    }
  };
  const int threads = std::clamp<int>(opt.threads, 1, 64);
  if (threads <= 1 || jobs.size() <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 1; i < std::min<int>(threads, static_cast<int>(jobs.size())); ++i)
      pool.emplace_back(work);
    work();
    for (std::thread& t : pool) t.join();
  }

  ScenarioResult res;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    for (CheckReport& r : outs[i].reports) {
      ScenarioEntry e;
      e.report = std::move(r);
      if (!jobs[i].expect_all.empty()) {
        e.expected = jobs[i].expect_all;
      } else {
        auto it = jobs[i].expect_by.find(e.report.name);
        if (it == jobs[i].expect_by.end()) {
          // An errored check cannot emit its per-report names; surface the
          // error as a mismatch instead of rejecting the scenario.
          if (e.report.verdict == CheckReport::Verdict::error)
            e.expected = "(per-report map)";
          else
            fail(item(cp, i) + ".expect",
                 "no expected verdict declared for report '" + e.report.name + "'");
        } else {
          e.expected = it->second;
        }
      }
      if (jobs[i].tol_override >= 0 && e.report.verdict != CheckReport::Verdict::error) {
        e.report.tolerance = jobs[i].tol_override;
        const bool ok = le_override(e.report.lhs, e.report.rhs, e.report.tolerance);
        e.report.verdict =
            ok ? CheckReport::Verdict::holds
               : (e.expected == "violated_as_expected" ? CheckReport::Verdict::violated_as_expected
                                                       : CheckReport::Verdict::violated);
        e.report.note =
            e.report.note.empty() ? "tolerance overridden" : e.report.note + "; tolerance overridden";
      }
      e.matched = to_string(e.report.verdict) == e.expected;
      res.entries.push_back(std::move(e));
    }
    for (auto& [k, v] : outs[i].curves) res.curves[k] = std::move(v);
  }

  std::sort(res.entries.begin(), res.entries.end(),
            [](const ScenarioEntry& a, const ScenarioEntry& b) {
              return a.report.name < b.report.name;
            });
  for (std::size_t i = 0; i + 1 < res.entries.size(); ++i)
    if (res.entries[i].report.name == res.entries[i + 1].report.name)
      fail(cp, "duplicate report name '" + res.entries[i].report.name + "'");

  for (const ScenarioEntry& e : res.entries) {
    if (e.report.check != "content_formula") continue;
    auto& rows = res.curves["quotients_" + e.report.name];
    for (std::size_t i = 0;; ++i) {
      std::ostringstream ek, qk;
      ek << "eps_" << i;
      qk << "quotient_" << i;
      auto ei = e.report.details.find(ek.str());
      auto qi = e.report.details.find(qk.str());
      if (ei == e.report.details.end() || qi == e.report.details.end()) break;
      rows.emplace_back(ei->second, qi->second);
    }
    if (rows.empty()) res.curves.erase("quotients_" + e.report.name);
  }

  res.all_matched = std::all_of(res.entries.begin(), res.entries.end(),
                                [](const ScenarioEntry& e) { return e.matched; });
  return res;
}

ScenarioResult run_scenario_file(const std::string& path, const ScenarioOptions& opt) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return run_scenario(buf.str(), opt, path);
}

void write_outputs(const ScenarioResult& r, const std::string& out_dir) {
  namespace fs = std::filesystem;
  const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec && !fs::is_directory(dir))
    throw ScenarioError("cannot create output directory " + dir.string());

  std::vector<std::pair<fs::path, std::string>> files;

  json reports = json::array();
  for (const ScenarioEntry& e : r.entries) {
    json o;
    o["name"] = e.report.name;
    o["check"] = e.report.check;
    o["statement"] = e.report.statement;
    o["verdict"] = to_string(e.report.verdict);
    o["expected"] = e.expected;
    o["matched"] = e.matched;
    o["lhs"] = jnum(e.report.lhs);
    o["rhs"] = jnum(e.report.rhs);
    o["tolerance"] = jnum(e.report.tolerance);
    o["h"] = jnum(e.report.h);
    json det = json::object();
    for (const auto& [k, v] : e.report.details) det[k] = jnum(v);
    o["details"] = std::move(det);
    o["note"] = e.report.note;
    reports.push_back(std::move(o));
  }
  files.emplace_back(dir / "reports.json", reports.dump(2) + "\n");

  std::ostringstream csv;
  csv << "name,check,verdict,expected,matched,lhs,rhs,tolerance,h\n";
  for (const ScenarioEntry& e : r.entries)
    csv << e.report.name << ',' << e.report.check << ',' << to_string(e.report.verdict) << ','
        << e.expected << ',' << (e.matched ? "true" : "false") << ',' << fmt_num(e.report.lhs)
        << ',' << fmt_num(e.report.rhs) << ',' << fmt_num(e.report.tolerance) << ','
        << fmt_num(e.report.h) << '\n';
  files.emplace_back(dir / "summary.csv", csv.str());

  std::ostringstream tim;
  tim << "name,runtime_sec\n";
  for (const ScenarioEntry& e : r.entries)
    tim << e.report.name << ',' << fmt_num(e.report.runtime_sec) << '\n';
  files.emplace_back(dir / "timings.csv", tim.str());

  for (const auto& [stem, rows] : r.curves) {
    std::ostringstream c;
    c << (stem.rfind("flow_", 0) == 0 ? "step,l2_distance" : "eps,quotient") << '\n';
    for (const auto& [x, y] : rows) c << fmt_num(x) << ',' << fmt_num(y) << '\n';
    files.emplace_back(dir / (stem + ".csv"), c.str());
  }

  for (const auto& [path, content] : files) write_atomic(path, content);
}

int scenario_exit_code(const ScenarioResult& r) { return r.all_matched ? 0 : 1; }

namespace {

const char* kDemoSchwarz = R"json({
  "grid": {"h": 0.05, "extent": 1.5, "dim": 2},
  "seed": 7,
  "bodies": {"disk": {"ball": {"center": [0, 0], "radius": 1.0}}},
  "functions": {
    "cone": {"cone": {"center": [0.2, -0.1], "radius": 1.0, "height": 1.0}},
    "hill": {"bump": {"center": [-0.3, 0.25], "radius": 0.9, "height": 0.8}}
  },
  "operators": {"round": {"schwarz": {"center": [0, 0]}}},
  "checks": [
    {"check": "equimeasurable", "name": "round_cone_equimeasurable", "expect": "holds",
     "operator": "round", "function": "cone"},
    {"check": "lp_contraction", "name": "round_l2_contraction", "expect": "holds",
     "operator": "round", "function": "cone", "function2": "hill",
     "phi": {"power": {"p": 2}}},
    {"check": "polya_szego", "name": "round_cone_dirichlet", "expect": "holds",
     "operator": "round", "function": "cone", "phi": {"power": {"p": 2}}},
    {"check": "isoperimetric", "name": "round_isoperimetric", "expect": "holds",
     "operator": "round", "body": "disk"}
  ]
})json";

const char* kDemoFlow = R"json({
  "grid": {"h": 0.0625, "extent": 2.0, "dim": 2},
  "seed": 42,
  "bodies": {"disk": {"ball": {"center": [0, 0], "radius": 1.0}}},
  "functions": {
    "blob": {"sum": [
      {"bump": {"center": [0.55, 0.3], "radius": 0.7, "height": 1.0}},
      {"bump": {"center": [-0.4, -0.45], "radius": 0.5, "height": 0.6}},
      {"cone": {"center": [0.1, -0.6], "radius": 0.45, "height": 0.5}}
    ]}
  },
  "checks": [
    {"check": "polarization_flow", "name": "flow_to_symmetric", "expect": "holds",
     "function": "blob", "steps": 400},
    {"check": "smoothing", "name": "polarize_smoothing_disk", "expect": "holds",
     "operator": {"polarization": {"axis": 0, "position": 0.25, "positive_side": false}},
     "set": {"ball": {"center": [0.3, 0.1], "radius": 0.6}}, "body": "disk", "d": 0.3}
  ]
})json";

const char* kDemoGap = R"json({
  "grid": {"h": 0.015625, "extent": 1.3, "dim": 2},
  "seed": 3,
  "checks": [
    {"check": "kschwarz_energy_gap", "name": "gap_battery", "p_list": [1, 2],
     "expect": {
       "kschwarz_energy_gap_square_p1": "violated_as_expected",
       "kschwarz_energy_gap_square_p2": "violated_as_expected",
       "kschwarz_energy_gap_translated_disk_p1": "holds"
     }}
  ]
})json";

const char* kDemoContent = R"json({
  "grid": {"h": 0.015625, "extent": 1.4, "dim": 2},
  "seed": 5,
  "functions": {"cone": {"cone": {"center": [0, 0], "radius": 1.0, "height": 1.0}}},
  "checks": [
    {"check": "content_formula", "name": "cone_content_ball", "expect": "holds",
     "function": "cone", "level": 0.5, "solid": {"ball": {"radius": 1.0}}}
  ]
})json";

}  // namespace

std::string demo_scenario(const std::string& name) {
  if (name == "schwarz") return kDemoSchwarz;
  if (name == "polarization_flow") return kDemoFlow;
  if (name == "kschwarz_counterexample") return kDemoGap;
  if (name == "content_identity") return kDemoContent;
  return {};
}

std::vector<std::string> demo_names() {
  return {"content_identity", "kschwarz_counterexample", "polarization_flow", "schwarz"};
}

}  // namespace symlab
