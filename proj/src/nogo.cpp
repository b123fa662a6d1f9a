#include "ontic/nogo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ontic/measure.hpp"
#include "ontic/sampling.hpp"

namespace ontic {

// ---- u_i family --------------------------------------------------------------

UiFamily build_ui_family(const OrthoBasis& m) {
  const int d = m.d();
  if (d < 3) throw std::invalid_argument("build_ui_family: d >= 3 required");
  UiFamily f;
  f.d = d;
  f.basis = m;
  f.a_coef = std::sqrt(d / (2.0 * (d - 1) * (d - 1)));
  f.b_coef = std::sqrt((d - 2) / (4.0 * (d - 1)));

  Vec alpha_v = Vec::Zero(d);
  for (int j = 0; j < d; ++j) alpha_v += m[j].amp();
  f.alpha = ProjState::raw(alpha_v / std::sqrt(static_cast<double>(d)));

  const cxd ib(0.0, f.b_coef);
  for (int i = 0; i < d; ++i) {
    Vec v = Vec::Zero(d);
    for (int j = 0; j < d; ++j)
      if (j != i) v += f.a_coef * m[j].amp();
    if (i < d - 2) {
      v += ib * m[i + 1].amp() - ib * m[i + 2].amp();
    } else if (i == d - 2) {
      v += ib * m[d - 1].amp() - ib * m[0].amp();  // indices wrap
    } else {
      v += f.b_coef * m[0].amp() - f.b_coef * m[1].amp();  // real pattern
    }
    f.u.push_back(gauge_relative(v, f.alpha));
  }

  const double root_half = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < d; ++i) {
    if (std::abs(inner(f.u[i], m[i])) > 1e-12)
      throw std::runtime_error("build_ui_family: u_i not orthogonal to phi_i");
    if (std::abs(inner(f.u[i], f.alpha) - root_half) > 1e-12)
      throw std::runtime_error("build_ui_family: alignment with alpha broken");
  }

  // coordinates of the tangents in the alpha-orthocomplement
  const std::vector<ProjState> frame = complete_basis({f.alpha});
  f.tangents.resize(d, 2 * (d - 1));
  for (int i = 0; i < d; ++i) {
    const Vec t = f.u[i].amp() - inner(f.alpha, f.u[i]) * f.alpha.amp();
    for (int k = 1; k < d; ++k) {
      const cxd z = frame[k].amp().dot(t);
      f.tangents(i, k - 1) = z.real();
      f.tangents(i, d - 1 + k - 1) = z.imag();
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(f.tangents);
  f.singular_values = svd.singularValues();
  const double smax = f.singular_values(0);
  f.tangent_rank = 0;
  for (int i = 0; i < f.singular_values.size(); ++i)
    if (f.singular_values(i) > 1e-8 * smax) ++f.tangent_rank;
  if (f.tangent_rank != d)
    throw std::runtime_error("build_ui_family: tangents not full rank");
  return f;
}

// ---- nullifying basis --------------------------------------------------------

DiscriminantError::DiscriminantError(double required, double disc)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "build_nullifying_basis: no real root (discriminant " << disc
           << "); requires |<psi1|psi2>| < " << required;
        return os.str();
      }()),
      required_overlap(required),
      discriminant(disc) {}

OrthoBasis build_nullifying_basis(const ProjState& psi1, const ProjState& psi2,
                                  const ProjState& psi3) {
  const int d = psi1.d();
  require_same_dim(psi2.d(), d, "build_nullifying_basis");
  require_same_dim(psi3.d(), d, "build_nullifying_basis");
  if (d < 3)
    throw std::invalid_argument("build_nullifying_basis: d >= 3 required");
  if (!(std::abs(inner(psi1, psi2)) > 0.0))
    throw std::invalid_argument(
        "build_nullifying_basis: psi1 and psi2 are orthogonal");

  // raw Gram-Schmidt frame of the triple; the coefficient conventions below
  // depend on these exact phases, so no gauge fixing here
  const Vec u1 = psi1.amp();
  Vec r2 = psi2.amp() - u1.dot(psi2.amp()) * u1;
  r2 -= u1.dot(r2) * u1;
  const double n2 = r2.norm();
  if (n2 <= 1e-10)
    throw std::invalid_argument(
        "build_nullifying_basis: psi2 parallel to psi1");
  const Vec u2 = r2 / n2;
  Vec r3 = psi3.amp() - u1.dot(psi3.amp()) * u1 - u2.dot(psi3.amp()) * u2;
  r3 -= u1.dot(r3) * u1 + u2.dot(r3) * u2;
  const double n3 = r3.norm();
  if (n3 <= 1e-10)
    throw std::invalid_argument(
        "build_nullifying_basis: psi3 coplanar with psi1, psi2");
  const Vec u3 = r3 / n3;

  const cxd a = u1.dot(psi2.amp()) / n2;
  const cxd b = u1.dot(psi3.amp()) / n3;
  const cxd c = u2.dot(psi3.amp()) / n3;

  // free parameter x solving  conj(a) b (1 + |x|^2) + c - x = 0
  const cxd bigK = std::conj(a) * b;
  cxd x;
  if (std::abs(bigK) < 1e-14) {
    x = c;
  } else {
    const double k = std::abs(bigK);
    const cxd w = bigK / k;
    const cxd cw = c * std::conj(w);
    const double r = cw.real(), q = cw.imag();
    const double bigC = k * (1.0 + q * q) + r;
    const double disc = 1.0 - 4.0 * k * bigC;
    if (disc < 0.0) {
      // sharp existence bound on |a|, translated back to |<psi1|psi2>|
      const double tplus =
          (-r + std::sqrt(r * r + 1.0 + q * q)) / (2.0 * (1.0 + q * q));
      const double amax = tplus / std::abs(b);
      throw DiscriminantError(amax / std::sqrt(1.0 + amax * amax), disc);
    }
    const double p = 2.0 * bigC / (1.0 + std::sqrt(disc));  // smaller root
    x = w * cxd(p, q);
  }

  const double x2 = std::norm(x);
  Vec e1 = x * u2 + u3;
  Vec e2 = u1 - std::conj(a) * u2 + std::conj(a) * std::conj(x) * u3;
  Vec e3 = a * (1.0 + x2) * u1 + u2 - std::conj(x) * u3;
  std::vector<ProjState> basis;
  basis.emplace_back(std::move(e1));
  basis.emplace_back(std::move(e2));
  basis.emplace_back(std::move(e3));
  return OrthoBasis(complete_basis(basis));
}

// ---- deficiency regions ------------------------------------------------------

bool in_deficiency_region(const OrthoBasis& m, const ProjState& lambda) {
  for (int i = 0; i < m.d(); ++i) {
    const double a = std::abs(inner(m[i], lambda));
    if (a * a >= 0.5) return false;
  }
  return true;
}

FractionEstimate deficiency_fraction(const OrthoBasis& m, long long n,
                                     Rng& rng) {
  if (n < 10000)
    throw std::invalid_argument("deficiency_fraction: n >= 10^4 required");
  FractionEstimate est;
  est.n = n;
  for (long long i = 0; i < n; ++i)
    if (in_deficiency_region(m, haar_state(m.d(), rng))) ++est.hits;
  const double p = static_cast<double>(est.hits) / static_cast<double>(n);
  est.fraction = p;
  const double z = 1.959963984540054;  // 95%
  const double nn = static_cast<double>(n);
  const double denom = 1.0 + z * z / nn;
  const double center = (p + z * z / (2.0 * nn)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / denom;
  est.lo = std::max(0.0, center - half);
  est.hi = std::min(1.0, center + half);
  return est;
}

double deficiency_exact(int d) {
  require_dim(d);
  return 1.0 - d * std::pow(2.0, 1 - d);
}

// ---- radii and support -------------------------------------------------------

double estimate_radius(const TheoryHandle& t, const ProjState& psi,
                       long long n, Rng& rng) {
  if (t.exact_measures) {
    const FiberedMeasure mu = t.mu(psi);  // keep alive across the loop
    double r = 0.0;
    for (const auto& c : mu.components()) {
      if (!(c.weight > 0.0)) continue;
      // ray equality means distance exactly 0; acos would leave ~1e-8 of
      // rounding noise on a unit inner product
      if (states_equal(psi, c.fiber)) continue;
      r = std::max(r, fs_distance(psi, c.fiber));
    }
    return r;
  }
  if (t.radial_density) {
    if (t.radial_density(1.0) > 0.0) return 1.0;
    double lo = 0.0, hi = 1.0;  // density positive at lo, zero from hi on
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (t.radial_density(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }
  auto draw = sampler_for(t, psi);
  double r = 0.0;
  for (long long i = 0; i < n; ++i)
    r = std::max(r, fs_distance(psi, draw(rng).state));
  return r;
}

long long orthogonal_support_check(const TheoryHandle& t, const ProjState& phi,
                                   const ProjState& psi, const OrthoBasis& m,
                                   long long n, Rng& rng) {
  if (std::abs(inner(phi, psi)) > 1e-12)
    throw std::invalid_argument("orthogonal_support_check: pair not orthogonal");
  int k = -1;
  for (int i = 0; i < m.d(); ++i)
    if (states_equal(m[i], psi)) k = i;
  if (k < 0)
    throw std::invalid_argument("orthogonal_support_check: psi not in basis");
  auto draw = sampler_for(t, phi);
  long long violations = 0;
  // probabilistic rules square the residual of a numerically orthogonal pair
  // (~1e-16) into ~1e-32 of dust; anything below 1e-20 counts as exact zero
  for (long long i = 0; i < n; ++i)
    if (t.xi(k, m, draw(rng)) > 1e-20) ++violations;
  return violations;
}

namespace {

// ontic point at a prescribed state: auxiliary coordinate uniform, component
// tag drawn by weight for combined theories
OnticPoint point_at(const TheoryHandle& t, const ProjState& s, Rng& rng) {
  OnticPoint pt{s, rng.uniform(), -1};
  if (t.leaves) {
    double u = rng.uniform();
    double cum = 0.0;
    pt.tag = static_cast<int>(t.leaves->size()) - 1;
    for (std::size_t i = 0; i < t.leaves->size(); ++i) {
      cum += (*t.leaves)[i].first;
      if (u < cum) {
        pt.tag = static_cast<int>(i);
        break;
      }
    }
  }
  return pt;
}

}  // namespace

BallResponse ball_response_check(const TheoryHandle& t, const OrthoBasis& m,
                                 const ProjState& alpha, double eps,
                                 long long n, Rng& rng) {
  if (!(eps > 0.0))
    throw std::invalid_argument("ball_response_check: eps > 0 required");
  const int d = m.d();
  BallResponse out;
  out.masses.assign(d, 0.0);
  std::vector<double> row(d);
  for (long long i = 0; i < n; ++i) {
    const OnticPoint pt = point_at(t, ball_sample(alpha, eps, rng), rng);
    if (t.xi_all) {
      t.xi_all(m, pt, row.data());
    } else {
      for (int k = 0; k < d; ++k) row[k] = t.xi(k, m, pt);
    }
    for (int k = 0; k < d; ++k) out.masses[k] += row[k];
  }
  for (int k = 0; k < d; ++k) out.masses[k] /= static_cast<double>(n);
  for (int k = 0; k < d; ++k) {
    if (out.masses[k] > 0.0) {
      out.j = k;
      break;
    }
  }
  return out;
}

// ---- interval sets -----------------------------------------------------------

IntervalSet::IntervalSet(std::vector<std::pair<double, double>> intervals) {
  std::sort(intervals.begin(), intervals.end());
  for (const auto& [lo, hi] : intervals) {
    if (!(hi > lo)) continue;  // degenerate pieces carry no measure
    if (!ivals_.empty() && lo <= ivals_.back().second) {
      ivals_.back().second = std::max(ivals_.back().second, hi);
    } else {
      ivals_.emplace_back(lo, hi);
    }
  }
}

IntervalSet IntervalSet::interval(double lo, double hi) {
  return IntervalSet({{lo, hi}});
}

double IntervalSet::measure() const {
  double s = 0.0;
  for (const auto& [lo, hi] : ivals_) s += hi - lo;
  return s;
}

bool IntervalSet::contains(double x) const {
  auto it = std::upper_bound(ivals_.begin(), ivals_.end(),
                             std::make_pair(x, std::numeric_limits<double>::infinity()));
  if (it == ivals_.begin()) return false;
  --it;
  return x >= it->first && x <= it->second;
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
  std::vector<std::pair<double, double>> out;
  std::size_t i = 0, j = 0;
  while (i < ivals_.size() && j < other.ivals_.size()) {
    const double lo = std::max(ivals_[i].first, other.ivals_[j].first);
    const double hi = std::min(ivals_[i].second, other.ivals_[j].second);
    if (hi > lo) out.emplace_back(lo, hi);
    if (ivals_[i].second < other.ivals_[j].second) {
      ++i;
    } else {
      ++j;
    }
  }
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::complement_within(double lo, double hi) const {
  std::vector<std::pair<double, double>> out;
  double cursor = lo;
  for (const auto& [a, b] : ivals_) {
    if (b <= lo) continue;
    if (a >= hi) break;
    if (a > cursor) out.emplace_back(cursor, std::min(a, hi));
    cursor = std::max(cursor, b);
    if (cursor >= hi) break;
  }
  if (cursor < hi) out.emplace_back(cursor, hi);
  return IntervalSet(std::move(out));
}

// ---- fat Cantor set ----------------------------------------------------------

IntervalSet fat_cantor(int depth) {
  if (depth < 0 || depth > kMaxCantorDepth)
    throw std::invalid_argument("fat_cantor: depth outside [0, 30]");
  if (depth > kMaxCantorMaterializeDepth)
    throw std::invalid_argument(
        "fat_cantor: interval list infeasible past depth 22; "
        "use fat_cantor_measure for deeper exact measures");
  std::vector<std::pair<double, double>> cur = {{0.0, 1.0}};
  for (int i = 1; i <= depth; ++i) {
    const double keep = (1.0 - std::pow(4.0, -i)) / 2.0;  // per-side fraction
    std::vector<std::pair<double, double>> next;
    next.reserve(cur.size() * 2);
    for (const auto& [lo, hi] : cur) {
      const double len = hi - lo;
      next.emplace_back(lo, lo + keep * len);
      next.emplace_back(hi - keep * len, hi);
    }
    cur = std::move(next);
  }
  return IntervalSet(std::move(cur));
}

Rational fat_cantor_measure(int depth) {
  if (depth < 0 || depth > kMaxCantorDepth)
    throw std::invalid_argument("fat_cantor_measure: depth outside [0, 30]");
  Rational m = 1;
  Rational pow4 = 1;
  for (int i = 1; i <= depth; ++i) {
    pow4 *= 4;
    m *= 1 - Rational(1) / pow4;
  }
  return m;
}

// ---- evasion demo ------------------------------------------------------------

EvasionReport evasion_demo(const IntervalSet& b, const std::vector<double>& xs,
                           int grid) {
  if (grid < 2) throw std::invalid_argument("evasion_demo: grid >= 2 required");
  for (const auto& [lo, hi] : b.intervals())
    if (lo < 0.0 || hi > 1.0)
      throw std::invalid_argument("evasion_demo: excluded set outside [0,1]");
  EvasionReport rep;
  rep.excluded_measure = b.measure();
  rep.excluded_positive = rep.excluded_measure > 0.0;
  rep.delta = 2.0 / grid;
  rep.all_pass = true;
  for (const double x : xs) {
    EvasionCertificate cert;
    cert.x = x;
    const IntervalSet support = b.complement_within(x - 1.0, 1.0 + x);
    cert.disjoint = support.intersect(b).empty();
    cert.tail_mass =
        support.intersect(IntervalSet::interval(1.0 + x - rep.delta, 1.0 + x))
            .measure();
    cert.tail_positive = cert.tail_mass > 0.0;
    cert.support_measure = support.measure();
    cert.pass = cert.disjoint && cert.tail_positive && rep.excluded_positive;
    rep.all_pass = rep.all_pass && cert.pass;
    rep.certificates.push_back(cert);
  }
  return rep;
}

}  // namespace ontic
