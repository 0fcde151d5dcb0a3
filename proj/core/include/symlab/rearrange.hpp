#pragma once

#include <cstdint>
#include <functional>

#include "symlab/convex.hpp"
#include "symlab/grid.hpp"

namespace symlab {

// Descriptor of a rearrangement operator.  Value-transport kinds
// (sym_decreasing, steiner, schwarz, k_schwarz) move the sorted values of
// the input onto a fixed cell ordering; polarization swaps values across a
// reflection; composite applies its parts first-to-last.
struct Rearrangement {
  enum class Kind { sym_decreasing, steiner, schwarz, k_schwarz, polarization, composite };

  Kind kind = Kind::sym_decreasing;
  Vec center{{0, 0, 0}};  // sym_decreasing / schwarz: center point
  int axis = 0;           // steiner / polarization: coordinate axis
  double line = 0;        // steiner: coordinate of the center line along axis
  ConvexBody body;        // k_schwarz: the convex body K (o in its interior)

  // Polarization: the reflection hyperplane sits at grid coordinate `offset`
  // (in units of h from the grid origin along `axis`); 2*offset must be an
  // integer so the reflection maps cell centers onto cell centers.  When
  // `positive_side` is true the half-space of larger coordinates keeps the
  // larger value of each reflected pair.
  double offset = 0;
  bool positive_side = true;

  std::vector<Rearrangement> parts;  // composite
};

Rearrangement sym_decreasing(const Vec& center = Vec{{0, 0, 0}});
Rearrangement steiner(int axis, double line = 0);
Rearrangement schwarz(const Vec& center = Vec{{0, 0, 0}});
Rearrangement k_schwarz(const ConvexBody& k);
Rearrangement polarization(int axis, double offset, bool positive_side);
Rearrangement composite(std::vector<Rearrangement> parts);

// Induced set map: occupied-cell count is preserved exactly for every kind.
// Throws "margin overflow" when the image would touch the outer cell ring
// (or, for polarization, when a kept value's image falls outside the grid).
GridSet apply_set(const Rearrangement& t, const GridSet& a);

// Rearranged function: the output value multiset equals the input one
// exactly for every kind (transport kinds sort values onto the ordering;
// polarization takes per-pair max/min).
GridFunction apply(const Rearrangement& t, const GridFunction& f);

// Two-point rearrangement across one hyperplane (see Rearrangement fields).
GridFunction polarize(const GridFunction& f, int axis, double offset, bool positive_side);

// A set map as a plain function, for layer-cake reconstruction; set_map
// wraps a rearrangement's apply_set.
struct SetMap {
  std::function<GridSet(const GridSet&)> map;
};

SetMap set_map(const Rearrangement& t);

// Rebuild a function from the images of its superlevel sets:
// out(x) = max { t in values(f) : x in S({f >= t}) }, zero elsewhere.
// Throws if the images fail to nest (a non-monotone set map).
GridFunction layer_cake_reconstruct(const SetMap& s, const GridFunction& f);

// Trace of a random polarization flow.  `distance` holds the L^2 distance
// to the symmetric decreasing rearrangement of f before the first step and
// after each step (steps + 1 entries).  The contraction argument compares
// against a reference invariant under each polarization; on a grid the
// rank-filled symmetric rearrangement can miss exact invariance where value
// ties straddle the reflecting plane, and `reference_defect[s]` records the
// L^2 size of that miss for the plane used at step s.  The distance may
// grow by at most reference_defect at any step.
struct FlowTrace {
  std::vector<double> distance;
  std::vector<double> reference_defect;
};

// Iteratively applies `steps` uniformly random admissible polarizations
// (random axis, random half-integer offset, oriented so the half-space
// containing the origin keeps the larger values).  Deterministic given the
// seed.
FlowTrace polarization_flow(const GridFunction& f, int steps, std::uint64_t seed);

}  // namespace symlab
