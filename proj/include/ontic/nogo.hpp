#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "ontic/rng.hpp"
#include "ontic/state.hpp"
#include "ontic/theory.hpp"

namespace ontic {

using Rational = boost::multiprecision::cpp_rational;

// ---- the u_i family ---------------------------------------------------------

// d unit vectors, u_i orthogonal to basis vector phi_i yet all at alignment
// exactly 1/sqrt(2) with the uniform superposition alpha, whose tangent
// projections at alpha are linearly independent over the reals.
struct UiFamily {
  int d = 0;
  OrthoBasis basis;
  ProjState alpha;
  double a_coef = 0.0;
  double b_coef = 0.0;
  std::vector<ProjState> u;
  // real coordinates of t_i = u_i - <alpha|u_i> alpha in the
  // alpha-orthocomplement: row i = [Re z_i | Im z_i], a d x 2(d-1) matrix
  Eigen::MatrixXd tangents;
  Eigen::VectorXd singular_values;
  int tangent_rank = 0;
};

// Builds and validates the family; throws std::runtime_error if any of the
// three invariants (orthogonality to phi_i, alignment 1/sqrt(2), full tangent
// rank) fails, which signals a bug rather than bad data.
UiFamily build_ui_family(const OrthoBasis& m);

// ---- nullifying basis --------------------------------------------------------

struct DiscriminantError : std::runtime_error {
  double required_overlap;  // a valid input needs |<psi1|psi2>| strictly below
  double discriminant;
  DiscriminantError(double required, double disc);
};

// Orthonormal basis e_1..e_d with <e_1|psi1> = <e_2|psi2> = <e_3|psi3> = 0.
// Exists whenever psi2 is not parallel to psi1, psi3 leaves the plane of the
// first two, and the quadratic for the free parameter has a real root;
// otherwise throws (DiscriminantError reports the sharp overlap bound).
OrthoBasis build_nullifying_basis(const ProjState& psi1, const ProjState& psi2,
                                  const ProjState& psi3);

// ---- deficiency regions ------------------------------------------------------

struct FractionEstimate {
  long long hits = 0;
  long long n = 0;
  double fraction = 0.0;
  double lo = 0.0;  // Wilson 95% interval
  double hi = 0.0;
};

// lambda lies in the region where every outcome has squared amplitude < 1/2
bool in_deficiency_region(const OrthoBasis& m, const ProjState& lambda);

// Haar-measure estimate of the deficiency region of m; n >= 10^4 enforced.
FractionEstimate deficiency_fraction(const OrthoBasis& m, long long n, Rng& rng);

// exact Haar measure of the region: 1 - d / 2^{d-1}
double deficiency_exact(int d);

// ---- radii and support -------------------------------------------------------

// Largest fs distance from psi at which mu_psi keeps mass: exact component
// scan for structured measures, support-boundary bisection for radial
// densities, otherwise the maximum over n sampled points.
double estimate_radius(const TheoryHandle& t, const ProjState& psi,
                       long long n, Rng& rng);

// Draws n points from mu_phi and counts those with xi_psi(M, .) > 1e-20; the
// threshold separates real response mass from the squared residual of a pair
// that is orthogonal only to ~1e-16. Requires phi orthogonal to psi and psi a
// member of m; the contract is a zero count.
long long orthogonal_support_check(const TheoryHandle& t, const ProjState& phi,
                                   const ProjState& psi, const OrthoBasis& m,
                                   long long n, Rng& rng);

struct BallResponse {
  int j = -1;                  // smallest outcome with positive sampled mass
  std::vector<double> masses;  // mean response per outcome over the ball
};

// Samples n ontic points with state uniform in the closed fs-ball of radius
// eps around alpha; some outcome always carries positive mass because the
// response values sum to 1 pointwise.
BallResponse ball_response_check(const TheoryHandle& t, const OrthoBasis& m,
                                 const ProjState& alpha, double eps,
                                 long long n, Rng& rng);

// ---- interval sets and the evasion example -----------------------------------

// Finite union of closed intervals with positive length, kept sorted and
// disjoint; the construction merges overlapping or touching input intervals
// and drops degenerate ones.
class IntervalSet {
 public:
  IntervalSet() = default;
  explicit IntervalSet(std::vector<std::pair<double, double>> intervals);
  static IntervalSet interval(double lo, double hi);

  const std::vector<std::pair<double, double>>& intervals() const {
    return ivals_;
  }
  bool empty() const { return ivals_.empty(); }
  double measure() const;
  bool contains(double x) const;
  IntervalSet intersect(const IntervalSet& other) const;
  // closure of [lo, hi] minus this set
  IntervalSet complement_within(double lo, double hi) const;

 private:
  std::vector<std::pair<double, double>> ivals_;
};

inline constexpr int kMaxCantorDepth = 30;
// 2^depth intervals; past this cap only the exact measure is available
inline constexpr int kMaxCantorMaterializeDepth = 22;

// Step i (1-indexed) removes the open middle of relative length 4^{-i} from
// every remaining interval; the remainder is closed, nowhere dense, and keeps
// measure prod_{i<=depth} (1 - 4^{-i}).
IntervalSet fat_cantor(int depth);
Rational fat_cantor_measure(int depth);

struct EvasionCertificate {
  double x = 0.0;
  bool disjoint = false;   // support of mu_x never meets the excluded set
  double tail_mass = 0.0;  // support mass within delta of the far edge 1+x
  bool tail_positive = false;
  double support_measure = 0.0;
  bool pass = false;
};

struct EvasionReport {
  double excluded_measure = 0.0;
  bool excluded_positive = false;
  double delta = 0.0;
  std::vector<EvasionCertificate> certificates;
  bool all_pass = false;
};

// For each x the support of mu_x is [x-1, 1+x] minus b: certifies exact
// disjointness from b, positive mass within delta = 2/grid of the far edge,
// and positive measure of b itself.
EvasionReport evasion_demo(const IntervalSet& b, const std::vector<double>& xs,
                           int grid);

}  // namespace ontic
