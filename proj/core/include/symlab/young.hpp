#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "symlab/grid.hpp"

namespace symlab {

// Left-continuous convex integrand Phi : [0, inf) -> [0, inf] with
// Phi(0) = 0, not identically zero and finite somewhere on (0, inf).
// +infinity is a first-class value.
struct YoungFunction {
  enum class Kind {
    power,       // scale * t^p with p >= 1
    piecewise,   // convex piecewise-linear; final_slope may be +inf
    sqrt_shift,  // sqrt(1 + t^2) - 1
    phi_min,     // 0 on [0,1], t - 1 beyond (minimal nontrivial integrand)
    phi_max,     // t on [0,1], +inf beyond (maximal nontrivial integrand)
    truncated,   // affine truncation transform of `base` at r
    conjugated   // numeric conjugate of `base` (sampled sup)
  };

  Kind kind = Kind::power;
  double p = 1.0, scale = 1.0;   // power
  std::vector<double> bt, bv;    // piecewise breakpoints: abscissae / values
  double final_slope = 0.0;      // piecewise slope beyond the last breakpoint
  std::shared_ptr<const YoungFunction> base;  // truncated / conjugated
  double r = 0.0;                             // truncated
  double trunc_slope = 0.0, trunc_val = 0.0;  // cached ray of the truncation
};

YoungFunction young_power(double p, double scale = 1.0);
// Points (t_i, v_i) with t_0 = 0, v_0 = 0, strictly increasing abscissae,
// nondecreasing convex values; final_slope >= the last interior slope
// (+infinity allowed, meaning the function jumps to +inf past the last point).
YoungFunction young_piecewise(std::vector<std::pair<double, double>> points,
                              double final_slope);
YoungFunction young_sqrt_shift();
YoungFunction young_phi_min();
YoungFunction young_phi_max();

// Evaluation; throws std::invalid_argument for t < 0.
double yeval(const YoungFunction& phi, double t);

// Analytic right derivative per variant (no finite differencing).
double yright_deriv(const YoungFunction& phi, double t);

// sup { t : phi(t) = 0 }.
double zero_end(const YoungFunction& phi);

// Conjugate psi(t) = sup_{s >= 0} (s t - phi(s)).  Exact closed form for
// power and piecewise variants and for the phi_min/phi_max pair; otherwise a
// sampled sup over a geometric grid of 4096 points in [1e-6, 1e6].
YoungFunction young_conjugate(const YoungFunction& phi);

// Affine truncation: Lambda_r equals phi below r and continues affinely with
// slope phi'+(r) beyond; the result is max{0, Lambda_r - 1/r}.  Requires
// r > zero_end(phi) and phi(r) finite.
YoungFunction young_truncate(const YoungFunction& phi, double r);

// Luxemburg functional: inf { lambda > 0 : sum phi(|f|/lambda) h^n <= 1 },
// resolved by bisection to relative tolerance 1e-10.  Returns 0 for f = 0
// and +infinity if no finite bracket can be established.
double luxemburg_norm(const YoungFunction& phi, const GridFunction& f);

}  // namespace symlab
