#pragma once

#include <string>

#include "symlab/convex.hpp"
#include "symlab/support_body.hpp"
#include "symlab/young.hpp"

namespace symlab {

// Boundary-content estimate from volume growth under dilation.
struct ContentEstimate {
  double value = 0;
  std::vector<double> epsilons;
  std::vector<double> quotients;  // (|A + eps C| - |A|) / eps
  std::string extrapolation;      // "none" (single eps) or "richardson"
};

// Integral of phi(|grad f|) over the grid, with the forward-difference
// gradient (zero extension outside).  When `anis` is given the integrand
// argument is the support value h_{-K}(grad f) instead of |grad f|.  In
// sup mode the maximum integrand argument is returned instead (no phi).
// A positive `level` restricts the integral (or sup) to cells {f >= level}.
double gradient_energy(const GridFunction& f, const YoungFunction& phi,
                       const ConvexBody* anis = nullptr, bool sup_mode = false,
                       double level = 0);

// Max forward-difference gradient norm (discrete Lipschitz bound).
double lip_bound(const GridFunction& f);

// Modulus of continuity at scale d relative to K: the maximum of
// |f(x) - f(y)| over ordered cell pairs with gauge(K, x - y) <= d, where a
// partner outside the grid counts as value zero.  Throws if no nonzero cell
// offset satisfies the gauge constraint (d is unresolvable at this h).
double modulus(const GridFunction& f, const ConvexBody& k, double d);

// The ramp function (d - dist_K(x, A))^+ with the exact brute-force
// distance dist_K(x, A) = min over cells a of A of gauge(K, x - a).
GridFunction kcontraction_test_fn(const GridSet& a, const ConvexBody& k, double d);

// Boundary content of A relative to C from dilation volume quotients, with
// a least-squares linear extrapolation to eps = 0 when several epsilons are
// given (single epsilon: the raw quotient).
ContentEstimate outer_minkowski_content(const GridSet& a, const ConvexBody& c,
                                        const std::vector<double>& eps);

// Default quotient ladder for content estimates at resolution h.
std::vector<double> default_content_eps(double h, int dim = 2);

// Area of the graph of f over {f >= a}: sum of sqrt(1 + |grad f|^2) h^n.
double graph_area(const GridFunction& f, double a);

// ---------- 3D voxel machinery for subgraph geometry ----------

struct VoxelSet {
  std::array<int, 3> n{{0, 0, 0}};
  std::array<double, 3> origin{{0, 0, 0}};
  double h = 0;
  std::vector<std::uint64_t> words;  // x-packed bit rows indexed by (y, z)

  std::size_t words_per_row() const {
    return static_cast<std::size_t>((n[0] + 63) / 64);
  }
  std::uint64_t* row(int y, int z) {
    return words.data() + (static_cast<std::size_t>(z) * n[1] + y) * words_per_row();
  }
  const std::uint64_t* row(int y, int z) const {
    return words.data() + (static_cast<std::size_t>(z) * n[1] + y) * words_per_row();
  }
  bool get(int x, int y, int z) const {
    return (row(y, z)[x >> 6] >> (x & 63)) & 1u;
  }
  void set_range(int y, int z, int x0, int x1);  // inclusive bit fill
  std::size_t count() const;
};

double measure(const VoxelSet& v);  // voxel count * h^3

// Voxelize the truncated subgraph {(x, t) : a <= t <= f(x)} of a 2D grid
// function at voxel centers (vertical spacing = horizontal spacing), with
// `margin_cells` empty layers on every side.
VoxelSet voxelize_subgraph(const GridFunction& f, double a, int margin_cells);

// Minkowski dilation by d * body; throws if the result would reach the
// outermost voxel layer.
VoxelSet dilate(const VoxelSet& v, const AnyBody& body, double d);

ContentEstimate outer_minkowski_content(const VoxelSet& v, const AnyBody& c,
                                        const std::vector<double>& eps);

struct SubgraphContent {
  ContentEstimate dilation;   // content via volume quotients in R^3
  double graph_integral = 0;  // sum over {f > a} of h_C(-grad f, 1) h^n
                              // plus measure{f >= a} (the bottom face)
};

// Both boundary-content routes for the truncated subgraph.  Pass a level
// already snapped between distinct values of f.  Epsilons default to the
// 3D ladder of default_content_eps.
SubgraphContent subgraph_content(const GridFunction& f, double a, const AnyBody& c,
                                 std::vector<double> eps = {});

}  // namespace symlab
