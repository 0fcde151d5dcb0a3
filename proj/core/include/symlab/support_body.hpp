#pragma once

#include <variant>

#include "symlab/convex.hpp"
#include "symlab/young.hpp"

namespace symlab {

// Convex body C in R^{n+1} encoding a convex integrand Phi over a base body
// K in R^n through its support function:
//
//   h_C(y, t) = |t| (1 + b Psi(h_K(y) / |t|))   for t != 0,
//   h_C(y, 0) = b m h_K(y),
//
// where Psi equals Phi on [0, M] and continues affinely (slope m > 0,
// intercept q <= 0) beyond, and b > 0 satisfies 1 + b q > 0.  Consequences
// used downstream: h_C(y, 1) = 1 + b Phi(h_K(y)) whenever h_K(y) <= M,
// C is supported by the hyperplanes {t = +-1}, and every horizontal section
// C cap {t = s} is the dilate lambda(s) K with lambda(0) = b m.
struct SupportBody {
  int dim = 3;  // K.dim + 1
  ConvexBody K;
  YoungFunction phi;
  double M = 0, m = 0, q = 0, b = 1;

  // Cached section profile lambda(t), t in [0, 1] (even in t), built lazily.
  mutable std::vector<double> profile;
};

// Construct the body for a given integrand, base body, and cutoff M > 0.
// The slope is m = phi'+(M) when positive, otherwise the smallest positive
// slope past the zero set of phi; q = phi(M) - m M; b = 1 if q = 0, else
// min(1, -1/(2q)).  Throws if phi(M) or the slope at M is not finite.
SupportBody build_phi_body(const YoungFunction& phi, const ConvexBody& k, double M);

double support(const SupportBody& c, const Vec& z);
double gauge(const SupportBody& c, const Vec& z);

// Dilation factor of the horizontal section at height t, |t| <= 1.
double section_scale(const SupportBody& c, double t);

// A body usable in R^3 voxel operations: a ball or a support body.
using AnyBody = std::variant<ConvexBody, SupportBody>;

double support(const AnyBody& b, const Vec& z);
double gauge(const AnyBody& b, const Vec& z);
double circumradius(const AnyBody& b);
int body_dim(const AnyBody& b);

}  // namespace symlab
