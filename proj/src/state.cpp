#include "ontic/state.hpp"

#include <algorithm>
#include <cmath>

namespace ontic {

void require_dim(int d) {
  if (d < kMinDim || d > kMaxDim)
    throw std::invalid_argument("dimension " + std::to_string(d) +
                                " outside [" + std::to_string(kMinDim) + ", " +
                                std::to_string(kMaxDim) + "]");
}

void require_same_dim(int da, int db, const std::string& where) {
  if (da != db)
    throw std::invalid_argument(where + ": dimension mismatch " +
                                std::to_string(da) + " vs " +
                                std::to_string(db));
}

ProjState::ProjState(Vec amplitudes) : amp_(std::move(amplitudes)) {
  require_dim(static_cast<int>(amp_.size()));
  const double n = amp_.norm();
  if (n < 1e-12) throw std::invalid_argument("cannot normalize zero vector");
  amp_ /= n;
  for (int i = 0; i < amp_.size(); ++i) {
    const double m = std::abs(amp_(i));
    if (m > 1e-12) {
      amp_ *= std::conj(amp_(i)) / m;
      amp_(i) = cxd(m, 0.0);  // kill the rounding residue in Im
      break;
    }
  }
}

cxd inner(const ProjState& a, const ProjState& b) {
  require_same_dim(a.d(), b.d(), "inner");
  return a.amp().dot(b.amp());  // Eigen dot conjugates the left argument
}

double fs_distance(const ProjState& a, const ProjState& b) {
  const double m = std::clamp(std::abs(inner(a, b)), 0.0, 1.0);
  return (2.0 / M_PI) * std::acos(m);
}

bool states_equal(const ProjState& a, const ProjState& b) {
  if (a.d() != b.d()) return false;
  return std::abs(inner(a, b)) >= 1.0 - kStateEqualTol;
}

ProjState ProjState::raw(Vec amplitudes) {
  require_dim(static_cast<int>(amplitudes.size()));
  const double n = amplitudes.norm();
  if (n < 1e-12) throw std::invalid_argument("cannot normalize zero vector");
  ProjState s;
  s.amp_ = amplitudes / n;
  return s;
}

ProjState gauge_relative(const Vec& v, const ProjState& ref) {
  require_same_dim(static_cast<int>(v.size()), ref.d(), "gauge_relative");
  Vec w = v;
  const double n = w.norm();
  if (n < 1e-12) throw std::invalid_argument("cannot normalize zero vector");
  w /= n;
  const cxd ip = w.dot(ref.amp());  // <w|ref>
  if (std::abs(ip) <= 1e-12) return ProjState(std::move(w));
  w *= ip / std::abs(ip);  // now <w|ref> is real and positive
  return ProjState::raw(std::move(w));
}

std::vector<ProjState> gram_schmidt(const std::vector<Vec>& vectors) {
  if (vectors.empty()) return {};
  const int d = static_cast<int>(vectors.front().size());
  std::vector<Vec> ortho;
  ortho.reserve(vectors.size());
  for (const Vec& v : vectors) {
    require_same_dim(static_cast<int>(v.size()), d, "gram_schmidt");
    Vec w = v;
    for (const Vec& u : ortho) w -= u.dot(w) * u;
    // second pass for numerical orthogonality
    for (const Vec& u : ortho) w -= u.dot(w) * u;
    const double n = w.norm();
    if (n <= 1e-10)
      throw std::invalid_argument("gram_schmidt: rank-deficient input");
    ortho.push_back(w / n);
  }
  std::vector<ProjState> out;
  out.reserve(ortho.size());
  for (Vec& u : ortho) out.emplace_back(std::move(u));
  return out;
}

std::vector<ProjState> complete_basis(const std::vector<ProjState>& prefix) {
  if (prefix.empty()) throw std::invalid_argument("complete_basis: empty");
  const int d = prefix.front().d();
  std::vector<Vec> vs;
  for (const auto& s : prefix) vs.push_back(s.amp());
  std::vector<Vec> pool;
  for (int i = 0; i < d; ++i) {
    Vec e = Vec::Zero(d);
    e(i) = 1.0;
    pool.push_back(e);
  }
  // greedily add the standard vector with the largest residual until full
  std::vector<Vec> cur = vs;
  while (static_cast<int>(cur.size()) < d) {
    double best = -1.0;
    int pick = -1;
    for (int i = 0; i < d; ++i) {
      Vec r = pool[i];
      for (const Vec& u : cur) r -= u.dot(r) * u;
      const double n = r.norm();
      if (n > best) {
        best = n;
        pick = i;
      }
    }
    Vec r = pool[pick];
    for (const Vec& u : cur) r -= u.dot(r) * u;
    for (const Vec& u : cur) r -= u.dot(r) * u;
    cur.push_back(r / r.norm());
  }
  std::vector<ProjState> out;
  for (Vec& u : cur) out.emplace_back(std::move(u));
  return out;
}

OrthoBasis::OrthoBasis(std::vector<ProjState> states) : states_(std::move(states)) {
  const int d = static_cast<int>(states_.size());
  require_dim(d);
  for (const auto& s : states_)
    require_same_dim(s.d(), d, "OrthoBasis");
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (std::abs(inner(states_[i], states_[j])) > kOrthoTol)
        throw std::invalid_argument("OrthoBasis: states not orthogonal");
}

Mat OrthoBasis::as_matrix() const {
  const int n = d();
  Mat m(n, n);
  for (int j = 0; j < n; ++j) m.col(j) = states_[j].amp();
  return m;
}

UnitaryOp::UnitaryOp(Mat m) : mat_(std::move(m)) {
  if (mat_.rows() != mat_.cols())
    throw std::invalid_argument("UnitaryOp: non-square matrix");
  const Mat g = mat_.adjoint() * mat_;
  const Mat id = Mat::Identity(mat_.rows(), mat_.cols());
  if ((g - id).cwiseAbs().maxCoeff() > kOrthoTol)
    throw std::invalid_argument("UnitaryOp: not unitary");
}

OrthoBasis standard_basis(int d) {
  require_dim(d);
  std::vector<ProjState> states;
  for (int i = 0; i < d; ++i) {
    Vec e = Vec::Zero(d);
    e(i) = 1.0;
    states.emplace_back(std::move(e));
  }
  return OrthoBasis(std::move(states));
}

}  // namespace ontic
