#include "symlab/young.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace symlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// Geometric sampling grid shared by all numeric-conjugate evaluations.
constexpr int kConjSamples = 4096;
constexpr double kConjLo = 1e-6, kConjHi = 1e6;

double conj_sample(int j) {
  return kConjLo * std::pow(kConjHi / kConjLo, static_cast<double>(j) / (kConjSamples - 1));
}
}  // namespace

YoungFunction young_power(double p, double scale) {
  require(p >= 1 && std::isfinite(p), "young power: exponent must be >= 1");
  require(scale > 0 && std::isfinite(scale), "young power: scale must be positive");
  YoungFunction y;
  y.kind = YoungFunction::Kind::power;
  y.p = p;
  y.scale = scale;
  return y;
}

YoungFunction young_piecewise(std::vector<std::pair<double, double>> points,
                              double final_slope) {
  require(!points.empty(), "young piecewise: needs at least one point");
  require(points.front().first == 0 && points.front().second == 0,
          "young piecewise: first point must be (0, 0)");
  double prev_slope = 0;
  bool first = true;
  for (std::size_t i = 1; i < points.size(); ++i) {
    auto [t0, v0] = points[i - 1];
    auto [t1, v1] = points[i];
    require(t1 > t0, "young piecewise: abscissae must be strictly increasing");
    require(v1 >= v0 && std::isfinite(v1), "young piecewise: values must be finite and nondecreasing");
    double s = (v1 - v0) / (t1 - t0);
    require(first || s >= prev_slope - 1e-15, "young piecewise: slopes must be nondecreasing");
    prev_slope = s;
    first = false;
  }
  require(final_slope >= prev_slope - 1e-15 || final_slope == kInf,
          "young piecewise: final slope must not decrease");
  require(final_slope >= 0, "young piecewise: slopes must be nonnegative");
  bool all_zero = true;
  for (auto& [t, v] : points)
    if (v > 0) all_zero = false;
  require(!all_zero || final_slope > 0, "young piecewise: function must not vanish identically");
  YoungFunction y;
  y.kind = YoungFunction::Kind::piecewise;
  for (auto& [t, v] : points) {
    y.bt.push_back(t);
    y.bv.push_back(v);
  }
  y.final_slope = final_slope;
  return y;
}

YoungFunction young_sqrt_shift() {
  YoungFunction y;
  y.kind = YoungFunction::Kind::sqrt_shift;
  return y;
}

YoungFunction young_phi_min() {
  YoungFunction y;
  y.kind = YoungFunction::Kind::phi_min;
  return y;
}

YoungFunction young_phi_max() {
  YoungFunction y;
  y.kind = YoungFunction::Kind::phi_max;
  return y;
}

double yeval(const YoungFunction& phi, double t) {
  require(t >= 0, "young eval: argument must be nonnegative");
  switch (phi.kind) {
    case YoungFunction::Kind::power:
      return phi.scale * std::pow(t, phi.p);
    case YoungFunction::Kind::piecewise: {
      const auto& bt = phi.bt;
      const auto& bv = phi.bv;
      if (t >= bt.back()) {
        if (t == bt.back()) return bv.back();
        return phi.final_slope == kInf ? kInf : bv.back() + phi.final_slope * (t - bt.back());
      }
      auto it = std::upper_bound(bt.begin(), bt.end(), t);
      std::size_t i = static_cast<std::size_t>(it - bt.begin());  // bt[i-1] <= t < bt[i]
      double s = (bv[i] - bv[i - 1]) / (bt[i] - bt[i - 1]);
      return bv[i - 1] + s * (t - bt[i - 1]);
    }
    case YoungFunction::Kind::sqrt_shift:
      return std::sqrt(1.0 + t * t) - 1.0;
    case YoungFunction::Kind::phi_min:
      return t <= 1 ? 0.0 : t - 1.0;
    case YoungFunction::Kind::phi_max:
      return t <= 1 ? t : kInf;
    case YoungFunction::Kind::truncated: {
      double lam = t < phi.r ? yeval(*phi.base, t)
                             : phi.trunc_val + phi.trunc_slope * (t - phi.r);
      return std::max(0.0, lam - 1.0 / phi.r);
    }
    case YoungFunction::Kind::conjugated: {
      double best = 0;
      for (int j = 0; j < kConjSamples; ++j) {
        double s = conj_sample(j);
        double v = yeval(*phi.base, s);
        if (v == kInf) break;  // convex: infinite from here on
        best = std::max(best, s * t - v);
      }
      return best;
    }
  }
  return 0;
}

double yright_deriv(const YoungFunction& phi, double t) {
  require(t >= 0, "young deriv: argument must be nonnegative");
  switch (phi.kind) {
    case YoungFunction::Kind::power:
      return phi.p == 1 ? phi.scale : phi.scale * phi.p * std::pow(t, phi.p - 1);
    case YoungFunction::Kind::piecewise: {
      const auto& bt = phi.bt;
      const auto& bv = phi.bv;
      if (t >= bt.back()) return phi.final_slope;
      auto it = std::upper_bound(bt.begin(), bt.end(), t);
      std::size_t i = static_cast<std::size_t>(it - bt.begin());
      return (bv[i] - bv[i - 1]) / (bt[i] - bt[i - 1]);
    }
    case YoungFunction::Kind::sqrt_shift:
      return t / std::sqrt(1.0 + t * t);
    case YoungFunction::Kind::phi_min:
      return t < 1 ? 0.0 : 1.0;
    case YoungFunction::Kind::phi_max:
      return t < 1 ? 1.0 : kInf;
    case YoungFunction::Kind::truncated: {
      double lam = t < phi.r ? yeval(*phi.base, t)
                             : phi.trunc_val + phi.trunc_slope * (t - phi.r);
      if (lam - 1.0 / phi.r < 0) return 0.0;
      return t < phi.r ? yright_deriv(*phi.base, t) : phi.trunc_slope;
    }
    case YoungFunction::Kind::conjugated: {
      // Right derivative = largest maximizer of s t - base(s) on the grid.
      double best = 0, arg = 0;
      for (int j = 0; j < kConjSamples; ++j) {
        double s = conj_sample(j);
        double v = yeval(*phi.base, s);
        if (v == kInf) break;
        double cand = s * t - v;
        if (cand >= best) {
          best = cand;
          arg = s;
        }
      }
      return best > 0 ? arg : 0.0;
    }
  }
  return 0;
}

double zero_end(const YoungFunction& phi) {
  switch (phi.kind) {
    case YoungFunction::Kind::power:
    case YoungFunction::Kind::sqrt_shift:
    case YoungFunction::Kind::phi_max:
      return 0.0;
    case YoungFunction::Kind::phi_min:
      return 1.0;
    case YoungFunction::Kind::piecewise: {
      double z = 0;
      for (std::size_t i = 0; i < phi.bt.size(); ++i)
        if (phi.bv[i] == 0) z = phi.bt[i];
      return z;
    }
    case YoungFunction::Kind::truncated: {
      // Solve Lambda_r(t) = 1/r; Lambda_r is nondecreasing.
      const double target = 1.0 / phi.r;
      auto lam = [&](double t) {
        return t < phi.r ? yeval(*phi.base, t)
                         : phi.trunc_val + phi.trunc_slope * (t - phi.r);
      };
      double lo = 0, hi = phi.r;
      while (lam(hi) < target) hi = hi * 2 + 1;
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (lam(mid) < target ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
    case YoungFunction::Kind::conjugated: {
      // psi(t) = 0 iff t <= min over samples of base(s)/s.
      double z = kInf;
      for (int j = 0; j < kConjSamples; ++j) {
        double s = conj_sample(j);
        double v = yeval(*phi.base, s);
        if (v == kInf) break;
        z = std::min(z, v / s);
      }
      return z == kInf ? 0.0 : z;
    }
  }
  return 0;
}

YoungFunction young_conjugate(const YoungFunction& phi) {
  using K = YoungFunction::Kind;
  switch (phi.kind) {
    case K::power: {
      if (phi.p == 1)
        // sup_s s (t - scale): 0 up to t = scale, +inf beyond.
        return young_piecewise({{0, 0}, {phi.scale, 0}}, kInf);
      double pd = phi.p / (phi.p - 1);
      double sc = (1 - 1 / phi.p) * std::pow(phi.scale * phi.p, -1 / (phi.p - 1));
      return young_power(pd, sc);
    }
    case K::phi_min:
      return young_phi_max();
    case K::phi_max:
      return young_phi_min();
    case K::piecewise: {
      // Legendre transform of a convex piecewise-linear function: slopes and
      // breakpoint abscissae swap roles.
      const auto& bt = phi.bt;
      const auto& bv = phi.bv;
      std::vector<std::pair<double, double>> pts{{0.0, 0.0}};
      double cu = 0, cv = 0;  // current point of the conjugate
      for (std::size_t i = 0; i + 1 < bt.size(); ++i) {
        double s = (bv[i + 1] - bv[i]) / (bt[i + 1] - bt[i]);
        if (s > cu) {
          cv += bt[i] * (s - cu);
          cu = s;
          pts.emplace_back(cu, cv);
        }
      }
      if (phi.final_slope == kInf)
        return young_piecewise(std::move(pts), bt.back());
      if (phi.final_slope > cu) {
        cv += bt.back() * (phi.final_slope - cu);
        cu = phi.final_slope;
        pts.emplace_back(cu, cv);
      }
      return young_piecewise(std::move(pts), kInf);
    }
    default: {
      YoungFunction y;
      y.kind = K::conjugated;
      y.base = std::make_shared<YoungFunction>(phi);
      return y;
    }
  }
}

YoungFunction young_truncate(const YoungFunction& phi, double r) {
  require(r > 0 && std::isfinite(r), "young truncate: r must be positive");
  require(r > zero_end(phi), "young truncate: r must exceed the zero set of phi");
  double vr = yeval(phi, r);
  require(std::isfinite(vr), "young truncate: phi(r) must be finite");
  YoungFunction y;
  y.kind = YoungFunction::Kind::truncated;
  y.base = std::make_shared<YoungFunction>(phi);
  y.r = r;
  y.trunc_val = vr;
  y.trunc_slope = yright_deriv(phi, r);
  require(std::isfinite(y.trunc_slope) && y.trunc_slope > 0,
          "young truncate: phi must have positive finite slope at r");
  return y;
}

double luxemburg_norm(const YoungFunction& phi, const GridFunction& f) {
  const double cm = f.grid.cell_measure();
  double fmax = sup_value(f);
  if (fmax == 0) return 0;
  auto modular = [&](double lambda) {
    double total = 0;
    for (int iy = 0; iy < f.grid.n[1]; ++iy) {
      double row = 0;
      const double* p = f.v.data() + f.grid.idx(0, iy);
      for (int ix = 0; ix < f.grid.n[0]; ++ix) {
        if (p[ix] == 0) continue;
        double v = yeval(phi, p[ix] / lambda);
        if (v == kInf) return kInf;
        row += v;
      }
      total += row;
    }
    return total * cm;
  };
  // Bracket: hi with modular <= 1, lo with modular > 1.
  double hi = fmax;
  int guard = 0;
  while (modular(hi) > 1) {
    hi *= 2;
    if (++guard > 2000) return kInf;
  }
  double lo = hi;
  guard = 0;
  while (modular(lo) <= 1) {
    lo *= 0.5;
    if (++guard > 2000) return 0;  // modular stays <= 1 for all lambda > 0
  }
  while ((hi - lo) / hi > 1e-10) {
    double mid = 0.5 * (lo + hi);
    (modular(mid) <= 1 ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace symlab
