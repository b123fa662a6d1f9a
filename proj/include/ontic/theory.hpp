#pragma once

#include <functional>
#include <memory>
#include <string>

#include "ontic/measure.hpp"
#include "ontic/rng.hpp"
#include "ontic/state.hpp"

namespace ontic {

// An ontological theory: epistemic measures mu_psi over the ontic space plus
// the response function xi_k(M, lambda). Measures are exact FiberedMeasures
// for every theory except the d=2 closest-state model, which carries its own
// density; that theory leaves `mu` empty and provides sample_mu/overlap
// directly.
struct TheoryHandle {
  std::string name;
  int d = 0;
  bool deterministic_xi = false;  // xi in {0,1} for every (k, M, lambda)
  bool exact_measures = false;    // mu is available

  std::function<FiberedMeasure(const ProjState&)> mu;
  std::function<double(int, const OrthoBasis&, const OnticPoint&)> xi;
  // writes all d response values at once (deterministic rules compute the
  // outcome a single time instead of d times); optional fast path
  std::function<void(const OrthoBasis&, const OnticPoint&, double*)> xi_all;
  std::function<OnticPoint(const ProjState&, Rng&)> sample_mu;
  // exact or quadrature overlap between mu_psi and mu_phi
  std::function<double(const ProjState&, const ProjState&)> overlap;
  // density of mu_psi as a function of fs distance from psi, for isotropic
  // theories with a continuous density; enables exact support-radius location
  std::function<double(double)> radial_density;
  // whether the theory's nontriviality guarantee applies to the pair
  std::function<bool(const ProjState&, const ProjState&)> covered;
  // draws a pair from the declared coverage set
  std::function<std::pair<ProjState, ProjState>(Rng&)> sample_covered_pair;

  // set only on convex combinations: the flattened (weight, elementary
  // theory) list, index = component tag
  std::shared_ptr<const std::vector<std::pair<double, TheoryHandle>>> leaves;
};

struct OutcomeCheck {
  double estimate = 0.0;
  double target = 0.0;
  double se = 0.0;
  double z = 0.0;
};

struct BornReport {
  std::string theory;
  int d = 0;
  int n = 0;
  double z_max = 4.0;
  std::uint64_t seed = 0;
  std::vector<OutcomeCheck> outcomes;
  bool pass = false;
};

inline constexpr int kChunks = 64;  // fixed reduction grid for MC estimates

// Mean of xi_k over n draws from mu_psi; the d-vector sums to 1 within 1e-12
// because each per-sample xi vector does. Samples are processed in kChunks
// independent sub-streams reduced in fixed order, so the result does not
// depend on `workers`.
std::vector<double> estimate_outcome_probs(const TheoryHandle& t,
                                           const ProjState& psi,
                                           const OrthoBasis& M, int n,
                                           Rng& rng, int workers = 1);

// Score-style z per outcome against the Born target |<phi_k|psi>|^2.
BornReport verify_born(const TheoryHandle& t, const ProjState& psi,
                       const OrthoBasis& M, int n, double z_max, Rng& rng,
                       int workers = 1);

// True iff sum_k xi_k(M, lambda) == 1 for every lambda: exactly when the
// theory declares a deterministic rule, within 1e-12 otherwise.
bool verify_normalization(const TheoryHandle& t, const OrthoBasis& M,
                          const std::vector<OnticPoint>& lambdas,
                          double* worst_deviation = nullptr);

// Exact overlap of the pair's epistemic measures; > 0 means nontrivial.
double check_nontrivial_pair(const TheoryHandle& t, const ProjState& psi,
                             const ProjState& phi);

struct NontrivialityReport {
  int n_pairs = 0;
  double min_overlap = 0.0;
  bool all_positive = false;
};

// Samples pairs from the theory's declared coverage set and asserts each has
// positive overlap.
NontrivialityReport check_max_nontrivial(const TheoryHandle& t, int n_pairs,
                                         Rng& rng);

// Random ontic point of the theory: a draw from mu at a Haar state.
OnticPoint random_ontic_point(const TheoryHandle& t, Rng& rng);

// Draw-closure bound to a fixed psi. For exact-measure theories the measure
// is built once here and reused across draws.
std::function<OnticPoint(Rng&)> sampler_for(const TheoryHandle& t,
                                            const ProjState& psi);

}  // namespace ontic
