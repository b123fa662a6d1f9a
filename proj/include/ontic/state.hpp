#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace ontic {

using cxd = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

inline constexpr int kMinDim = 2;
inline constexpr int kMaxDim = 16;  // desk-scale bound

inline constexpr double kUnitNormTol = 1e-12;
inline constexpr double kOrthoTol = 1e-10;
inline constexpr double kStateEqualTol = 1e-12;

// Gauge-fixed unit vector: one canonical representative per ray. The first
// component with modulus above 1e-12 is real and non-negative.
class ProjState {
 public:
  ProjState() = default;
  explicit ProjState(Vec amplitudes);  // normalizes and gauge-fixes

  // Normalizes but keeps the caller's phase. Escape hatch for the relative
  // gauge; everything else should use the gauge-fixing constructor.
  static ProjState raw(Vec amplitudes);

  int d() const { return static_cast<int>(amp_.size()); }
  const Vec& amp() const { return amp_; }
  cxd operator[](int i) const { return amp_(i); }

 private:
  Vec amp_;
};

cxd inner(const ProjState& a, const ProjState& b);

// (2/pi) * acos(clamp(|<a|b>|, 0, 1)); 0 for equal rays, 1 for orthogonal
double fs_distance(const ProjState& a, const ProjState& b);

// ray equality: |<a|b>| >= 1 - 1e-12
bool states_equal(const ProjState& a, const ProjState& b);

// Alternative gauge: phase chosen so <v|ref> is real and non-negative (falls
// back to the canonical gauge when v is orthogonal to ref).
ProjState gauge_relative(const Vec& v, const ProjState& ref);

class OrthoBasis {
 public:
  OrthoBasis() = default;
  explicit OrthoBasis(std::vector<ProjState> states);  // validates

  int d() const { return static_cast<int>(states_.size()); }
  const ProjState& operator[](int i) const { return states_[i]; }
  const std::vector<ProjState>& states() const { return states_; }
  Mat as_matrix() const;  // columns are the basis states

 private:
  std::vector<ProjState> states_;
};

class UnitaryOp {
 public:
  UnitaryOp() = default;
  explicit UnitaryOp(Mat m);  // validates ||U*U - I||_max <= 1e-10

  int d() const { return static_cast<int>(mat_.rows()); }
  const Mat& mat() const { return mat_; }
  Vec apply(const Vec& v) const { return mat_ * v; }
  Vec apply_adjoint(const Vec& v) const { return mat_.adjoint() * v; }

 private:
  Mat mat_;
};

// Order-preserving orthonormalization; throws on rank deficiency
// (residual norm <= 1e-10).
std::vector<ProjState> gram_schmidt(const std::vector<Vec>& vectors);

// Completes the given orthonormal prefix to a full orthonormal basis of C^d.
std::vector<ProjState> complete_basis(const std::vector<ProjState>& prefix);

OrthoBasis standard_basis(int d);

void require_dim(int d);
void require_same_dim(int da, int db, const std::string& where);

}  // namespace ontic
