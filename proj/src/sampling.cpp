#include "ontic/sampling.hpp"

#include <cmath>

namespace ontic {

namespace {

Vec gaussian_vec(int d, Rng& rng) {
  Vec v(d);
  for (int i = 0; i < d; ++i) v(i) = rng.gaussian_complex();
  return v;
}

Mat haar_matrix(int d, Rng& rng) {
  Mat g(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) g(i, j) = rng.gaussian_complex();
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the diagonal phases of R; without this QR is not Haar.
  for (int j = 0; j < d; ++j) {
    const cxd rj = r(j, j);
    const double m = std::abs(rj);
    q.col(j) *= (m > 0.0) ? rj / m : cxd(1.0, 0.0);
  }
  return q;
}

}  // namespace

ProjState haar_state(int d, Rng& rng) {
  require_dim(d);
  return ProjState(gaussian_vec(d, rng));
}

OrthoBasis haar_basis(int d, Rng& rng) {
  require_dim(d);
  const Mat q = haar_matrix(d, rng);
  std::vector<ProjState> states;
  states.reserve(d);
  for (int j = 0; j < d; ++j) states.emplace_back(Vec(q.col(j)));
  return OrthoBasis(std::move(states));
}

UnitaryOp haar_unitary(int d, Rng& rng) {
  require_dim(d);
  return UnitaryOp(haar_matrix(d, rng));
}

ProjState haar_orthogonal_state(const ProjState& axis, Rng& rng) {
  const int d = axis.d();
  if (d < 2) throw std::invalid_argument("haar_orthogonal_state: d < 2");
  for (int attempt = 0; attempt < 64; ++attempt) {
    Vec v = gaussian_vec(d, rng);
    v -= axis.amp().dot(v) * axis.amp();
    v -= axis.amp().dot(v) * axis.amp();
    if (v.norm() > 1e-8) return ProjState(std::move(v));
  }
  throw std::runtime_error("haar_orthogonal_state: degenerate draws");
}

double ball_haar_mass(int d, double r) {
  return std::pow(std::sin(M_PI * r / 2.0), 2.0 * (d - 1));
}

ProjState ball_sample(const ProjState& center, double eps, Rng& rng) {
  if (!(eps > 0.0) || eps > 1.0)
    throw std::invalid_argument("ball_sample: eps must be in (0, 1]");
  const int d = center.d();
  const double u = rng.uniform_open();
  const double s = std::sin(M_PI * eps / 2.0) *
                   std::pow(u, 1.0 / (2.0 * (d - 1)));
  const double r = (2.0 / M_PI) * std::asin(s);
  const ProjState chi = haar_orthogonal_state(center, rng);
  Vec v = std::cos(M_PI * r / 2.0) * center.amp() +
          std::sin(M_PI * r / 2.0) * chi.amp();
  return ProjState(std::move(v));
}

UnitaryOp stabilizer_coset_unitary(const ProjState& psi, const ProjState& lambda,
                                   Rng& rng) {
  require_same_dim(psi.d(), lambda.d(), "stabilizer_coset_unitary");
  const int d = psi.d();
  // orthonormal frames whose first columns are lambda and psi
  const auto frame_l = complete_basis({lambda});
  const auto frame_p = complete_basis({psi});
  Mat bl(d, d), bp(d, d);
  for (int j = 0; j < d; ++j) {
    bl.col(j) = frame_l[j].amp();
    bp.col(j) = frame_p[j].amp();
  }
  // Haar element of the stabilizer of lambda: phase on the lambda direction,
  // Haar U(d-1) on the orthocomplement, conjugated into position.
  Mat block = Mat::Zero(d, d);
  const double phi = rng.uniform() * 2.0 * M_PI;
  block(0, 0) = std::polar(1.0, phi);
  if (d > 1) {
    Mat g(d - 1, d - 1);
    for (int j = 0; j < d - 1; ++j)
      for (int i = 0; i < d - 1; ++i) g(i, j) = rng.gaussian_complex();
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ();
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < d - 1; ++j) {
      const cxd rj = r(j, j);
      const double m = std::abs(rj);
      q.col(j) *= (m > 0.0) ? rj / m : cxd(1.0, 0.0);
    }
    block.block(1, 1, d - 1, d - 1) = q;
  }
  const Mat w = bl * block * bl.adjoint();
  const Mat u0 = bl * bp.adjoint();  // maps psi to lambda
  return UnitaryOp(w * u0);
}

std::vector<ProjState> perturb_to_nonorthogonal(std::vector<ProjState> states,
                                                double delta, Rng& rng) {
  if (!(delta > 0.0) || delta > 0.01)
    throw std::invalid_argument("perturb_to_nonorthogonal: delta in (0, 0.01]");
  const std::size_t n = states.size();
  std::vector<ProjState> original = states;
  for (int attempt = 0; attempt < 200; ++attempt) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = i + 1; j < n && ok; ++j)
        if (std::abs(inner(states[i], states[j])) < kNonOrthogonalFloor)
          ok = false;
    if (ok) return states;
    // re-draw every state inside the delta-ball of its original position
    for (std::size_t i = 0; i < n; ++i)
      states[i] = ball_sample(original[i], delta, rng);
  }
  throw std::runtime_error(
      "perturb_to_nonorthogonal: retries exhausted on pathological input");
}

}  // namespace ontic
