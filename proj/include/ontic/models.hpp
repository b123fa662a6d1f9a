#pragma once

#include "ontic/net.hpp"
#include "ontic/theory.hpp"

namespace ontic {

// ---- baseline --------------------------------------------------------------

// mu_psi = delta at psi, xi_k = |<phi_k|lambda>|^2. Every pair of distinct
// rays has disjoint measures.
TheoryHandle psi_ontic(int d);

// Negative control: xi identically 1/d. Fails Born verification by design.
TheoryHandle broken_uniform(int d);

// ---- d=2 closest-state model -----------------------------------------------

// lambda-density f = (2/pi)(x - 1/2) for x = |<lambda|psi>|^2 > 1/2 with
// respect to the unit-sphere area element; response picks the basis state
// closest to lambda, ties resolved toward the lower index.
TheoryHandle ks2d();

double ks_density(const ProjState& psi, const ProjState& lambda);
// density profile along the distance coordinate, (2/pi)(cos^2(pi r/2) - 1/2)+
double ks_density_at_distance(double r);
// quadrature of min(f_psi, f_phi) over the sphere, absolute error ~1e-9
double ks_overlap_quadrature(double inner_modulus);
// a point equidistant from both basis states (response tie)
ProjState ks_tie_point(const OrthoBasis& m);

// ---- pair theory -----------------------------------------------------------

// T(a, b): mixes the epistemic measures of every state within fs-distance
// epsilon/4 of a or b over the shared region [0, mix_bound], making the
// covered measures overlap while the Born rule stays exact.
struct PairTheory {
  ProjState a, b;
  double epsilon = 0.0;  // |<a|b>| / d
  int d = 0;

  // largest p for which (a, p) and (b, p) provably share the first sorted
  // outcome in every basis: the coverage margin gives first-cell mass
  // >= (1 - pi/8)^2 epsilon^2 > epsilon^2 / 4
  double mix_bound() const { return 0.25 * epsilon * epsilon; }
  double cover_radius() const { return 0.25 * epsilon; }

  TheoryHandle handle() const;
};

PairTheory make_pair_theory(const ProjState& a, const ProjState& b);

struct SortedBasis {
  OrthoBasis basis;            // states in sorted order
  std::vector<int> perm;       // perm[j] = original index of sorted slot j
  std::vector<double> keys;    // descending sort keys
};

// Stable sort by descending min(|<phi_i|a>|, |<phi_i|b>|); the first key is
// always >= |<a|b>|/d by the triangle inequality.
SortedBasis pair_sort_basis(const OrthoBasis& m, const ProjState& a,
                            const ProjState& b);

// 0-based outcome slot in the sorted basis: smallest j with
// cum_{j-1} <= p <= cum_j, cum_j = sum_{i<=j} |<phi_i|lambda>|^2. The last
// slot absorbs the floating-point tail so exactly one slot fires.
int pair_outcome_slot(const OrthoBasis& sorted, const ProjState& lambda,
                      double p);

// indicator that sorted slot k fires for the ontic point (lambda, p)
int pair_response(int k, const OrthoBasis& sorted, const OnticPoint& lam);

// Epistemic measure of T(a, b): states within fs-distance epsilon/4 of a or b
// put mass mix = epsilon^2/4 uniformly on both anchor fibers over [0, mix];
// everything else is a plain delta fiber.
FiberedMeasure pair_mu(const ProjState& psi, const ProjState& a,
                       const ProjState& b, double epsilon);

// ---- combinations ----------------------------------------------------------

// Tagged disjoint union: mu mixes with per-part tags, xi dispatches on the
// tag. Nested combinations are flattened. Coefficients in (0,1) summing to 1.
TheoryHandle convex_combine(
    const std::vector<std::pair<double, TheoryHandle>>& parts);

// ---- net theory ------------------------------------------------------------

struct NetTheoryBudget {
  NetBudget net;
  int max_total_pairs = 20000;
};

struct NetPairEntry {
  int level = 0;
  double weight = 0.0;
  PairTheory pt;
};

// Truncated series over 1/n-nets: every ordered non-degenerate pair of each
// net becomes a PairTheory; level weights proportional to 1/n^2, split evenly
// within a level, renormalized to sum to 1. A singleton net falls back to one
// slightly perturbed pair. Nontriviality is certified on the coverage set:
// pairs lying in the epsilon/4-balls of some net pair.
struct NetTheory {
  int d = 0;
  int levels = 0;
  std::vector<std::vector<ProjState>> nets;
  std::vector<NetPairEntry> pairs;
  TheoryHandle handle;

  bool covered(const ProjState& psi, const ProjState& phi) const;
  std::pair<ProjState, ProjState> sample_covered_pair(Rng& rng) const;
};

NetTheory net_theory(int d, int levels, Rng& rng,
                     const NetTheoryBudget& budget = {});

}  // namespace ontic
