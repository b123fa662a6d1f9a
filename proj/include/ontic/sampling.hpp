#pragma once

#include "ontic/rng.hpp"
#include "ontic/state.hpp"

namespace ontic {

// Haar-uniform ray on CP^{d-1}: d complex Gaussians, normalized, gauge-fixed.
ProjState haar_state(int d, Rng& rng);

// Haar-distributed orthonormal basis: QR of a Gaussian matrix with the phase
// correction that makes the distribution exactly Haar.
OrthoBasis haar_basis(int d, Rng& rng);

// Haar unitary matrix (same construction, no gauge fixing of columns).
UnitaryOp haar_unitary(int d, Rng& rng);

// Haar-uniform ray on the sphere orthogonal to `axis`.
ProjState haar_orthogonal_state(const ProjState& axis, Rng& rng);

// Uniform draw from the closed Fubini-Study ball B_eps(center), eps in (0, 1].
// Exact inverse-CDF sampler: under the Haar measure
//   P(fs_distance(lambda, center) <= r) = sin(pi r / 2)^{2(d-1)},
// so the conditional radial law inside the ball inverts in closed form and the
// direction is Haar on the orthocomplement sphere. No rejection loop.
ProjState ball_sample(const ProjState& center, double eps, Rng& rng);

// Haar mass of the ball, sin(pi r / 2)^{2(d-1)}.
double ball_haar_mass(int d, double r);

// Unitary M, Haar-distributed on the coset {M : M psi = lambda up to phase};
// built as W * U0 with U0 mapping psi to lambda and W Haar on the
// (projective) stabilizer of lambda.
UnitaryOp stabilizer_coset_unitary(const ProjState& psi, const ProjState& lambda,
                                   Rng& rng);

// Moves each state at most `delta` in fs_distance until all pairs satisfy
// |<a|b>| >= 1e-8. Inputs already satisfying the bound are returned unchanged.
std::vector<ProjState> perturb_to_nonorthogonal(std::vector<ProjState> states,
                                                double delta, Rng& rng);

inline constexpr double kNonOrthogonalFloor = 1e-8;

}  // namespace ontic
