#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>

#include "symlab/convex.hpp"
#include "symlab/grid.hpp"
#include "symlab/gridfn.hpp"
#include "symlab/rearrange.hpp"
#include "symlab/support_body.hpp"
#include "symlab/young.hpp"

namespace symlab {

// One verification result.  `check` is the registry key of the check kind,
// `name` the instance label, `statement` the inequality or identity tested.
// The verdict is consistent with lhs <= rhs + tolerance; violated_as_expected
// marks registered counterexamples whose violation confirms the theory.
// `error` is a runner-level state for checks that threw.
struct CheckReport {
  std::string name;
  std::string check;
  std::string statement;
  double lhs = 0;
  double rhs = 0;
  double tolerance = 0;

  enum class Verdict { holds, violated, violated_as_expected, error };
  Verdict verdict = Verdict::holds;

  double h = 0;
  double runtime_sec = 0;  // informational only; never part of canonical output
  std::map<std::string, double> details;
  std::string note;
};

const char* to_string(CheckReport::Verdict v);

struct CheckInfo {
  std::string key;
  std::string summary;
};

// Registry of check kinds (keys usable in scenario files), sorted by key.
std::vector<CheckInfo> list_checks();

// distribution(apply(T, f)) == distribution(f); exact by construction for
// every kind, so the tolerance is zero.
CheckReport check_equimeasurable(const Rearrangement& t, const GridFunction& f);

// Sum j(|Tf - Tg|) h^n <= sum j(|f - g|) h^n for convex j with j(0) = 0.
CheckReport check_lp_contraction(const Rearrangement& t, const GridFunction& f,
                                 const GridFunction& g, const YoungFunction& j);

// Sum F(f, g) h^n <= sum F(Tf, Tg) h^n for supermodular F with F(0,0) = 0
// and F(s,0), F(0,t) nonincreasing.  The hypotheses are validated by
// sampling; a failed hypothesis throws naming the culprit.
CheckReport check_crz(const Rearrangement& t, const GridFunction& f, const GridFunction& g,
                      const std::function<double(double, double)>& func,
                      const std::string& func_name);

// dilate(T A, K, d) contained in T(dilate(A, K, d)), up to cells within 2h
// of the right side's boundary (grid boundaries are +-h ambiguous).  Reports
// the measure of genuinely violating cells and their maximum depth.
CheckReport check_smoothing(const Rearrangement& t, const GridSet& a, const ConvexBody& k,
                            double d, bool expect_violation = false);

// Sharp form (meaningful for o-symmetric K, computed for any K):
// modulus(Tf, K, d) <= modulus(f, K, d) + 4h Lip(f) for each d.  For
// non-symmetric K the report also carries the inradius/circumradius form
// modulus(Tf, B, d r) <= modulus(f, B, d R), which must hold regardless.
CheckReport check_modulus_reduction(const Rearrangement& t, const GridFunction& f,
                                    const ConvexBody& k, const std::vector<double>& d_list,
                                    bool expect_violation = false);

struct PolyaSzegoOptions {
  const ConvexBody* anis = nullptr;  // anisotropic integrand h_{-K}(grad f)
  bool p_inf = false;                // compare sup-gradients instead of integrals
  double level = 0;                  // restrict to {f >= level} when positive
  bool expect_violation = false;
};

// gradient_energy(apply(T, f), phi, ...) <= gradient_energy(f, phi, ...)
// + tol(h); integral forms rerun at h/2 (multilinear refinement) and require
// any deficit to shrink by >= 1.5x.
CheckReport check_polya_szego(const Rearrangement& t, const GridFunction& f,
                              const YoungFunction& phi, const PolyaSzegoOptions& opt = {});

// (a) boundary content does not increase when T is applied to the
// discretized k_test; (b) for the symmetric kinds, the image of a discrete
// ball about the center is exactly that ball; (c) content reduction on five
// seeded random blobs.
CheckReport check_isoperimetric(const Rearrangement& t, const ConvexBody& k_test,
                                const Grid& grid, std::uint64_t seed);

// measure(voxel dilation by dC of the truncated subgraph of Tf) <= same for
// f, plus an O(h * surface) tolerance.
CheckReport check_subgraph_core(const Rearrangement& t, const GridFunction& f, double a,
                                double d, const AnyBody& c);

// Registered counterexample battery: the convex symmetrization toward a
// centered square of area pi strictly increases every p-Dirichlet energy of
// the unit cone (p = 1: 2 sqrt(pi) vs pi; p = 2: 4 vs pi), while the same
// construction toward a translated disk keeps the p = 1 energy equal.
std::vector<CheckReport> kschwarz_energy_gap(const std::vector<double>& p_list, double h);

// The two boundary-content estimators of the truncated subgraph (volume
// quotients vs the graph integral) agree within 5%.
CheckReport check_content_formula(const GridFunction& f, double a, const AnyBody& c,
                                  std::vector<double> eps = {});

// The random polarization flow's L2 distance to the symmetric decreasing
// rearrangement never increases and ends strictly below its start.
CheckReport check_polarization_flow(const GridFunction& f, int steps, std::uint64_t seed);

}  // namespace symlab
