#include "symlab/support_body.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "symlab/rng.hpp"

namespace symlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kProfilePoints = 2049;

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

double psi_ext(const SupportBody& c, double s) {
  return s <= c.M ? yeval(c.phi, s) : c.m * s + c.q;
}

// Split z into the horizontal part (passed to K) and the vertical coordinate.
std::pair<Vec, double> split(const SupportBody& c, const Vec& z) {
  if (c.dim == 3) return {Vec{z[0], z[1], 0}, z[2]};
  return {Vec{z[0], 0, 0}, z[1]};
}

// Support evaluated along the fixed horizontal direction used to trace the
// section profile: F(v) = h_C(u0, v) - t v, convex in v.
double profile_objective(const SupportBody& c, double hk_u0, double t, double v) {
  double h;
  if (v == 0)
    h = c.b * c.m * hk_u0;
  else
    h = std::abs(v) * (1.0 + c.b * psi_ext(c, hk_u0 / std::abs(v)));
  return h - t * v;
}

void build_profile(const SupportBody& c) {
  if (!c.profile.empty()) return;
  Vec u0{1, 0, 0};
  const double hk = support(c.K, u0);
  c.profile.resize(kProfilePoints);
  const double phi0 = yright_deriv(c.phi, 0.0);
  for (int i = 0; i < kProfilePoints; ++i) {
    double t = static_cast<double>(i) / (kProfilePoints - 1);
    if (i == 0) {
      c.profile[i] = c.b * c.m;  // exact: the minimizer sits at v = 0
      continue;
    }
    if (i == kProfilePoints - 1) {
      c.profile[i] = c.b * phi0;  // exact limit of v Psi(hk/v) / hk as v -> inf
      continue;
    }
    // Golden-section search for min_v F(v); F is convex and coercive for
    // |t| < 1.  The minimizer is nonnegative (F is even at t = 0 and the
    // tilt -tv with t > 0 favors v >= 0).
    double lo = 0, hi = std::max(16.0, 4.0 * hk / (1.0 - t));
    while (profile_objective(c, hk, t, hi * 2) < profile_objective(c, hk, t, hi))
      hi *= 2;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b2 = hi;
    double x1 = b2 - gr * (b2 - a), x2 = a + gr * (b2 - a);
    double f1 = profile_objective(c, hk, t, x1), f2 = profile_objective(c, hk, t, x2);
    for (int it = 0; it < 160; ++it) {
      if (f1 <= f2) {
        b2 = x2;
        x2 = x1;
        f2 = f1;
        x1 = b2 - gr * (b2 - a);
        f1 = profile_objective(c, hk, t, x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b2 - a);
        f2 = profile_objective(c, hk, t, x2);
      }
    }
    c.profile[i] = profile_objective(c, hk, t, 0.5 * (a + b2)) / hk;
  }
}
}  // namespace

SupportBody build_phi_body(const YoungFunction& phi, const ConvexBody& k, double M) {
  require(M > 0 && std::isfinite(M), "phi body: M must be positive");
  require(k.dim >= 1 && k.dim <= 2, "phi body: base body must be 1D or 2D");
  const double vM = yeval(phi, M);
  require(std::isfinite(vM), "phi body: phi must be finite at M");

  double m = yright_deriv(phi, M);
  if (!(m > 0) || !std::isfinite(m)) {
    double t = zero_end(phi);
    m = yright_deriv(phi, t);
    for (int i = 0; i < 80 && !(m > 0 && std::isfinite(m)); ++i) {
      t = t == 0 ? 1e-9 : t * 1.5;
      m = yright_deriv(phi, t);
    }
  }
  require(m > 0 && std::isfinite(m), "phi body: no positive finite slope available");

  double q = std::min(0.0, vM - m * M);
  double b = q == 0 ? 1.0 : std::min(1.0, -1.0 / (2.0 * q));

  SupportBody c;
  c.dim = k.dim + 1;
  c.K = k;
  c.phi = phi;
  c.M = M;
  c.m = m;
  c.q = q;
  c.b = b;
  require(1.0 + b * q > 0, "phi body: incompatible affine extension");

  // Sampled sanity check: the support rule must be subadditive.
  Rng rng(0x5eedf00dULL);
  for (int i = 0; i < 256; ++i) {
    Vec z1{rng.uniform(-2, 2), rng.uniform(-2, 2), 0};
    Vec z2{rng.uniform(-2, 2), rng.uniform(-2, 2), 0};
    if (c.dim == 3) {
      z1[2] = rng.uniform(-2, 2);
      z2[2] = rng.uniform(-2, 2);
    }
    double lhs = support(c, vadd(z1, z2));
    double rhs = support(c, z1) + support(c, z2);
    if (lhs > rhs + 1e-9 * std::max(1.0, rhs))
      throw std::invalid_argument("phi body: support rule failed subadditivity");
  }
  return c;
}

double support(const SupportBody& c, const Vec& z) {
  auto [y, t] = split(c, z);
  const double hk = support(c.K, y);
  if (t == 0) return c.b * c.m * hk;
  const double at = std::abs(t);
  if (hk == 0) return at;
  return at * (1.0 + c.b * psi_ext(c, hk / at));
}

double section_scale(const SupportBody& c, double t) {
  require(std::abs(t) <= 1 + 1e-12, "section: |t| must be at most 1");
  build_profile(c);
  double x = std::min(1.0, std::abs(t)) * (kProfilePoints - 1);
  int i = std::min(static_cast<int>(x), kProfilePoints - 2);
  double w = x - i;
  return c.profile[i] * (1 - w) + c.profile[i + 1] * w;
}

double gauge(const SupportBody& c, const Vec& z) {
  auto [y, t] = split(c, z);
  const double at = std::abs(t);
  const double gk = gauge(c.K, y);
  if (gk == 0) return at;  // the body spans exactly {|t| <= 1} on the axis
  build_profile(c);
  const double lam0 = c.profile[0];
  if (at == 0) return gk / lam0;
  // mu K contains (y, t) iff |t| <= mu and gauge_K(y) <= mu lambda(|t|/mu);
  // the predicate is monotone in mu.
  auto inside = [&](double mu) { return gk <= mu * section_scale(c, at / mu); };
  double lo = std::max(at, gk / lam0);
  if (inside(lo)) return lo;
  double hi = lo;
  int guard = 0;
  while (!inside(hi)) {
    hi *= 2;
    if (++guard > 200) return kInf;
  }
  for (int it = 0; it < 100; ++it) {
    double mid = 0.5 * (lo + hi);
    (inside(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double support(const AnyBody& b, const Vec& z) {
  return std::visit([&](const auto& k) { return support(k, z); }, b);
}

double gauge(const AnyBody& b, const Vec& z) {
  return std::visit([&](const auto& k) { return gauge(k, z); }, b);
}

double circumradius(const AnyBody& b) {
  if (std::holds_alternative<ConvexBody>(b))
    return circumradius(std::get<ConvexBody>(b));
  const SupportBody& c = std::get<SupportBody>(b);
  // Bound: C lies in the cylinder over lambda_max K of half-height 1, and
  // lambda is maximal at t = 0.
  return std::sqrt(1.0 + std::pow(c.b * c.m * circumradius(c.K), 2));
}

int body_dim(const AnyBody& b) {
  return std::holds_alternative<ConvexBody>(b) ? std::get<ConvexBody>(b).dim
                                               : std::get<SupportBody>(b).dim;
}

}  // namespace symlab
