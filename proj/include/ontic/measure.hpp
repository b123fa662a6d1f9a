#pragma once

#include <optional>
#include <vector>

#include "ontic/rng.hpp"
#include "ontic/state.hpp"

namespace ontic {

// Ontic point: a ray plus the auxiliary coordinate p in [0,1]; tag >= 0
// identifies the owning sub-theory inside a convex combination (-1 if none).
// Theories that do not use p simply ignore it.
struct OnticPoint {
  ProjState state;
  double p = 0.0;
  int tag = -1;
};

// One piece of a structured measure: `weight` of mass on the single ray
// `fiber`, spread uniformly over the p-interval [lo, hi]. Zero-length
// intervals are rejected; deltas in p are not representable by design.
struct FiberComponent {
  double weight = 0.0;
  ProjState fiber;
  double lo = 0.0;
  double hi = 1.0;
  int tag = -1;
};

class FiberedMeasure {
 public:
  FiberedMeasure() = default;
  explicit FiberedMeasure(std::vector<FiberComponent> components);  // validates

  const std::vector<FiberComponent>& components() const { return components_; }
  double total_mass() const;
  int d() const;

 private:
  std::vector<FiberComponent> components_;
};

// Canonical form: components grouped by (tag, fiber ray), each group reduced
// to sorted disjoint cells of constant density with equal-density neighbours
// merged. The unique normal form behind exact TV.
struct DensityCell {
  double lo, hi, density;
};
struct CanonicalGroup {
  int tag;
  ProjState fiber;
  std::vector<DensityCell> cells;
  double mass() const;
};
std::vector<CanonicalGroup> canonicalize(const FiberedMeasure& m);

// Exact total variation distance: (1/2) * integral |density1 - density2| over
// the refined common partition, unmatched fibers contributing their mass.
double total_variation(const FiberedMeasure& m1, const FiberedMeasure& m2);

// Exact shared mass, integral of min(density1, density2) over matched fibers.
// Equals 1 - total_variation for normalized measures, computed directly so
// overlaps near 0 keep full precision.
double overlap_mass(const FiberedMeasure& m1, const FiberedMeasure& m2);

OnticPoint sample(const FiberedMeasure& m, Rng& rng);

// Convex mixture with the parts kept on disjoint tagged copies of the space,
// so measures from different parts never overlap. Parts that already carry
// tags are flattened (their tags are offset into a single integer range).
FiberedMeasure tagged_mixture(
    const std::vector<std::pair<double, FiberedMeasure>>& parts);

// Same, with explicit base tags per part (rarely needed outside tests).
FiberedMeasure tagged_mixture(
    const std::vector<std::pair<double, FiberedMeasure>>& parts,
    const std::vector<int>& base_tags);

}  // namespace ontic
