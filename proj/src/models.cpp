#include "ontic/models.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "ontic/sampling.hpp"

namespace ontic {

// ---- baseline --------------------------------------------------------------

namespace {

FiberedMeasure delta_measure(const ProjState& psi) {
  return FiberedMeasure({FiberComponent{1.0, psi, 0.0, 1.0, -1}});
}

std::pair<ProjState, ProjState> haar_nonorthogonal_pair(int d, Rng& rng) {
  const ProjState psi = haar_state(d, rng);
  for (;;) {
    const ProjState phi = haar_state(d, rng);
    const double ov = std::abs(inner(psi, phi));
    if (ov > 1e-6 && ov < 1.0 - 1e-12) return {psi, phi};
  }
}

}  // namespace

TheoryHandle psi_ontic(int d) {
  require_dim(d);
  TheoryHandle t;
  t.name = "ontic";
  t.d = d;
  t.deterministic_xi = false;
  t.exact_measures = true;
  t.mu = delta_measure;
  t.xi = [](int k, const OrthoBasis& m, const OnticPoint& lam) {
    const double a = std::abs(inner(m[k], lam.state));
    return a * a;
  };
  t.xi_all = [d](const OrthoBasis& m, const OnticPoint& lam, double* row) {
    for (int k = 0; k < d; ++k) {
      const double a = std::abs(inner(m[k], lam.state));
      row[k] = a * a;
    }
  };
  t.sample_mu = [](const ProjState& psi, Rng& rng) {
    return OnticPoint{psi, rng.uniform(), -1};
  };
  t.overlap = [](const ProjState& psi, const ProjState& phi) {
    return overlap_mass(delta_measure(psi), delta_measure(phi));
  };
  t.covered = [](const ProjState&, const ProjState&) { return false; };
  t.sample_covered_pair = [d](Rng& rng) {
    return haar_nonorthogonal_pair(d, rng);
  };
  return t;
}

TheoryHandle broken_uniform(int d) {
  TheoryHandle t = psi_ontic(d);
  t.name = "broken-uniform";
  t.xi = [d](int, const OrthoBasis&, const OnticPoint&) { return 1.0 / d; };
  t.xi_all = [d](const OrthoBasis&, const OnticPoint&, double* row) {
    for (int k = 0; k < d; ++k) row[k] = 1.0 / d;
  };
  return t;
}

// ---- d=2 closest-state model -----------------------------------------------

namespace {

ProjState perp2(const ProjState& psi) {
  Vec v(2);
  v << -std::conj(psi[1]), std::conj(psi[0]);
  return ProjState(std::move(v));
}

}  // namespace

double ks_density(const ProjState& psi, const ProjState& lambda) {
  const double a = std::abs(inner(lambda, psi));
  const double x = a * a;
  return x > 0.5 ? (2.0 / M_PI) * (x - 0.5) : 0.0;
}

double ks_density_at_distance(double r) {
  const double c = std::cos(M_PI * r / 2.0);
  const double x = c * c;
  return x > 0.5 ? (2.0 / M_PI) * (x - 0.5) : 0.0;
}

double ks_overlap_quadrature(double inner_modulus) {
  const double ov = std::clamp(inner_modulus, 0.0, 1.0);
  const double beta = std::acos(ov);
  const double cb = std::cos(beta), sb = std::sin(beta);
  // azimuthal integral of min(f_psi, f_phi) in closed form, polar by Simpson
  auto ring = [&](double th) {
    const double A = std::cos(th) * cb;
    const double B = std::sin(th) * sb;
    if (A <= 0.0) return 0.0;
    double phi0 = 0.0;
    if (B > 0.0 && A < B) phi0 = std::acos(A / B);
    return 4.0 * (A * (M_PI / 2.0 - phi0) - B * (1.0 - std::sin(phi0)));
  };
  const int n = 40000;
  const double h = M_PI / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double th = i * h;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += w * std::sin(th) * ring(th) / M_PI;
  }
  return s * h / 3.0;
}

ProjState ks_tie_point(const OrthoBasis& m) {
  require_same_dim(m.d(), 2, "ks_tie_point");
  return ProjState(Vec(m[0].amp() + m[1].amp()));
}

TheoryHandle ks2d() {
  TheoryHandle t;
  t.name = "ks2";
  t.d = 2;
  t.deterministic_xi = true;
  t.exact_measures = false;
  auto closest = [](const OrthoBasis& m, const ProjState& lam) {
    const double x1 = std::abs(inner(lam, m[0]));
    const double x2 = std::abs(inner(lam, m[1]));
    return x1 >= x2 ? 0 : 1;  // tie goes to the lower index
  };
  t.xi = [closest](int k, const OrthoBasis& m, const OnticPoint& lam) {
    return closest(m, lam.state) == k ? 1.0 : 0.0;
  };
  t.xi_all = [closest](const OrthoBasis& m, const OnticPoint& lam,
                       double* row) {
    const int w = closest(m, lam.state);
    row[0] = w == 0 ? 1.0 : 0.0;
    row[1] = 1.0 - row[0];
  };
  t.sample_mu = [](const ProjState& psi, Rng& rng) {
    const double x = 0.5 + 0.5 * std::sqrt(rng.uniform_open());
    const double th = rng.uniform() * 2.0 * M_PI;
    Vec v = std::sqrt(x) * psi.amp() +
            std::sqrt(1.0 - x) * std::polar(1.0, th) * perp2(psi).amp();
    return OnticPoint{ProjState(std::move(v)), 0.0, -1};
  };
  t.overlap = [](const ProjState& psi, const ProjState& phi) {
    return ks_overlap_quadrature(std::abs(inner(psi, phi)));
  };
  t.radial_density = ks_density_at_distance;
  t.covered = [](const ProjState& psi, const ProjState& phi) {
    return std::abs(inner(psi, phi)) > 1e-12;
  };
  t.sample_covered_pair = [](Rng& rng) {
    return haar_nonorthogonal_pair(2, rng);
  };
  return t;
}

// ---- pair theory -----------------------------------------------------------

namespace {

// sorted outcome mapped back to the original basis index, allocation-free
int pair_outcome_original(const OrthoBasis& m, const ProjState& a,
                          const ProjState& b, const ProjState& lam, double p) {
  const int d = m.d();
  std::array<double, kMaxDim> key{};
  std::array<int, kMaxDim> idx{};
  for (int i = 0; i < d; ++i) {
    key[i] = std::min(std::abs(inner(m[i], a)), std::abs(inner(m[i], b)));
    idx[i] = i;
  }
  std::stable_sort(idx.begin(), idx.begin() + d,
                   [&](int i, int j) { return key[i] > key[j]; });
  double cum = 0.0;
  for (int j = 0; j < d - 1; ++j) {
    const double amp = std::abs(inner(m[idx[j]], lam));
    cum += amp * amp;
    if (p <= cum) return idx[j];
  }
  return idx[d - 1];  // last slot absorbs the floating-point tail
}

}  // namespace

SortedBasis pair_sort_basis(const OrthoBasis& m, const ProjState& a,
                            const ProjState& b) {
  if (!(std::abs(inner(a, b)) > 0.0))
    throw std::invalid_argument("pair_sort_basis: orthogonal anchors");
  const int d = m.d();
  std::vector<double> key(d);
  std::vector<int> idx(d);
  for (int i = 0; i < d; ++i) {
    key[i] = std::min(std::abs(inner(m[i], a)), std::abs(inner(m[i], b)));
    idx[i] = i;
  }
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int i, int j) { return key[i] > key[j]; });
  SortedBasis out;
  std::vector<ProjState> states;
  for (int j = 0; j < d; ++j) {
    states.push_back(m[idx[j]]);
    out.perm.push_back(idx[j]);
    out.keys.push_back(key[idx[j]]);
  }
  out.basis = OrthoBasis(std::move(states));
  return out;
}

int pair_outcome_slot(const OrthoBasis& sorted, const ProjState& lambda,
                      double p) {
  const int d = sorted.d();
  double cum = 0.0;
  for (int j = 0; j < d - 1; ++j) {
    const double amp = std::abs(inner(sorted[j], lambda));
    cum += amp * amp;
    if (p <= cum) return j;
  }
  return d - 1;
}

int pair_response(int k, const OrthoBasis& sorted, const OnticPoint& lam) {
  return pair_outcome_slot(sorted, lam.state, lam.p) == k ? 1 : 0;
}

FiberedMeasure pair_mu(const ProjState& psi, const ProjState& a,
                       const ProjState& b, double epsilon) {
  const int d = psi.d();
  require_same_dim(a.d(), d, "pair_mu");
  require_same_dim(b.d(), d, "pair_mu");
  if (!(epsilon > 0.0 && epsilon <= 1.0 / d))
    throw std::invalid_argument("pair_mu: epsilon outside (0, 1/d]");
  const double mix = 0.25 * epsilon * epsilon;
  const double r = 0.25 * epsilon;
  if (fs_distance(psi, a) <= r || fs_distance(psi, b) <= r) {
    return FiberedMeasure({FiberComponent{1.0 - mix, psi, mix, 1.0, -1},
                           FiberComponent{0.5 * mix, a, 0.0, mix, -1},
                           FiberComponent{0.5 * mix, b, 0.0, mix, -1}});
  }
  return FiberedMeasure({FiberComponent{1.0, psi, 0.0, 1.0, -1}});
}

PairTheory make_pair_theory(const ProjState& a, const ProjState& b) {
  require_same_dim(a.d(), b.d(), "make_pair_theory");
  const double ov = std::abs(inner(a, b));
  if (!(ov > 0.0))
    throw std::invalid_argument("make_pair_theory: anchors are orthogonal");
  if (states_equal(a, b))
    throw std::invalid_argument("make_pair_theory: anchors are equal");
  PairTheory pt;
  pt.a = a;
  pt.b = b;
  pt.d = a.d();
  pt.epsilon = ov / pt.d;
  return pt;
}

TheoryHandle PairTheory::handle() const {
  TheoryHandle t;
  t.name = "pair";
  t.d = d;
  t.deterministic_xi = true;
  t.exact_measures = true;
  const ProjState a_ = a, b_ = b;
  const double eps = epsilon;
  const double r = cover_radius();
  t.mu = [a_, b_, eps](const ProjState& psi) {
    return pair_mu(psi, a_, b_, eps);
  };
  t.xi = [a_, b_](int k, const OrthoBasis& m, const OnticPoint& lam) {
    return pair_outcome_original(m, a_, b_, lam.state, lam.p) == k ? 1.0 : 0.0;
  };
  t.xi_all = [a_, b_](const OrthoBasis& m, const OnticPoint& lam, double* row) {
    const int d = m.d();
    std::fill(row, row + d, 0.0);
    row[pair_outcome_original(m, a_, b_, lam.state, lam.p)] = 1.0;
  };
  t.sample_mu = [mu = t.mu](const ProjState& psi, Rng& rng) {
    return sample(mu(psi), rng);
  };
  t.overlap = [mu = t.mu](const ProjState& psi, const ProjState& phi) {
    return overlap_mass(mu(psi), mu(phi));
  };
  t.covered = [a_, b_, r](const ProjState& psi, const ProjState& phi) {
    return (fs_distance(psi, a_) <= r && fs_distance(phi, b_) <= r) ||
           (fs_distance(psi, b_) <= r && fs_distance(phi, a_) <= r);
  };
  t.sample_covered_pair = [a_, b_, r](Rng& rng) {
    return std::make_pair(ball_sample(a_, r, rng), ball_sample(b_, r, rng));
  };
  return t;
}

// ---- combinations ----------------------------------------------------------

TheoryHandle convex_combine(
    const std::vector<std::pair<double, TheoryHandle>>& parts) {
  if (parts.empty()) throw std::invalid_argument("convex_combine: no parts");
  const int d = parts.front().second.d;
  double csum = 0.0;
  for (const auto& [c, part] : parts) {
    if (!(c > 0.0 && c <= 1.0))
      throw std::invalid_argument("convex_combine: coefficient outside (0, 1]");
    require_same_dim(part.d, d, "convex_combine");
    csum += c;
  }
  if (std::abs(csum - 1.0) > 1e-12)
    throw std::invalid_argument("convex_combine: coefficients must sum to 1");

  auto leaves = std::make_shared<std::vector<std::pair<double, TheoryHandle>>>();
  std::string name = "convex(";
  for (const auto& [c, part] : parts) {
    if (part.leaves) {
      for (const auto& [w, leaf] : *part.leaves)
        leaves->emplace_back(c * w, leaf);
    } else {
      leaves->emplace_back(c, part);
    }
    if (name.back() != '(') name += ",";
    name += part.name;
  }
  name += ")";

  bool exact = true, det = true;
  for (const auto& [w, leaf] : *leaves) {
    exact = exact && leaf.exact_measures;
    det = det && leaf.deterministic_xi;
  }
  std::vector<double> cum;
  double acc = 0.0;
  for (const auto& [w, leaf] : *leaves) cum.push_back(acc += w);

  TheoryHandle t;
  t.name = std::move(name);
  t.d = d;
  t.deterministic_xi = det;
  t.exact_measures = exact;
  t.leaves = leaves;
  if (exact) {
    t.mu = [leaves](const ProjState& psi) {
      std::vector<std::pair<double, FiberedMeasure>> ms;
      std::vector<int> tags;
      for (std::size_t i = 0; i < leaves->size(); ++i) {
        ms.emplace_back((*leaves)[i].first, (*leaves)[i].second.mu(psi));
        tags.push_back(static_cast<int>(i));
      }
      return tagged_mixture(ms, tags);
    };
  }
  auto leaf_at = [leaves](const OnticPoint& lam) -> const TheoryHandle& {
    if (lam.tag < 0 || lam.tag >= static_cast<int>(leaves->size()))
      throw std::invalid_argument("convex_combine: ontic point tag invalid");
    return (*leaves)[lam.tag].second;
  };
  t.xi = [leaf_at](int k, const OrthoBasis& m, const OnticPoint& lam) {
    return leaf_at(lam).xi(k, m, lam);
  };
  t.xi_all = [leaf_at](const OrthoBasis& m, const OnticPoint& lam,
                       double* row) {
    const TheoryHandle& leaf = leaf_at(lam);
    if (leaf.xi_all) {
      leaf.xi_all(m, lam, row);
    } else {
      for (int k = 0; k < m.d(); ++k) row[k] = leaf.xi(k, m, lam);
    }
  };
  t.sample_mu = [leaves, cum](const ProjState& psi, Rng& rng) {
    const double u = rng.uniform() * cum.back();
    const std::size_t i = static_cast<std::size_t>(
        std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
    const std::size_t pick = std::min(i, leaves->size() - 1);
    OnticPoint lam = (*leaves)[pick].second.sample_mu(psi, rng);
    lam.tag = static_cast<int>(pick);
    return lam;
  };
  if (exact) {
    t.overlap = [mu = t.mu](const ProjState& psi, const ProjState& phi) {
      return overlap_mass(mu(psi), mu(phi));
    };
  } else {
    t.overlap = [leaves](const ProjState& psi, const ProjState& phi) {
      double s = 0.0;
      for (const auto& [w, leaf] : *leaves) s += w * leaf.overlap(psi, phi);
      return s;
    };
  }
  t.covered = [leaves](const ProjState& psi, const ProjState& phi) {
    for (const auto& [w, leaf] : *leaves)
      if (leaf.covered(psi, phi)) return true;
    return false;
  };
  t.sample_covered_pair = [leaves, cum](Rng& rng) {
    const double u = rng.uniform() * cum.back();
    const std::size_t i = static_cast<std::size_t>(
        std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
    const std::size_t pick = std::min(i, leaves->size() - 1);
    return (*leaves)[pick].second.sample_covered_pair(rng);
  };
  return t;
}

// ---- net theory ------------------------------------------------------------

bool NetTheory::covered(const ProjState& psi, const ProjState& phi) const {
  return handle.covered(psi, phi);
}

std::pair<ProjState, ProjState> NetTheory::sample_covered_pair(Rng& rng) const {
  return handle.sample_covered_pair(rng);
}

NetTheory net_theory(int d, int levels, Rng& rng,
                     const NetTheoryBudget& budget) {
  require_dim(d);
  if (levels < 1) throw std::invalid_argument("net_theory: levels >= 1");
  NetTheory nt;
  nt.d = d;
  nt.levels = levels;
  double raw_total = 0.0;
  std::vector<double> raw;
  for (int n = 1; n <= levels; ++n) {
    Rng level_rng = rng.split();
    auto net = epsilon_net(d, n, level_rng, budget.net);
    nt.nets.push_back(net);
    std::vector<std::pair<ProjState, ProjState>> level_pairs;
    if (net.size() == 1) {
      // degenerate level: a single point has no ordered pairs; use one
      // slightly perturbed companion instead
      const ProjState companion = ball_sample(net[0], 1e-3, level_rng);
      level_pairs.emplace_back(net[0], companion);
    } else {
      for (std::size_t i = 0; i < net.size(); ++i)
        for (std::size_t j = 0; j < net.size(); ++j)
          if (i != j) level_pairs.emplace_back(net[i], net[j]);
    }
    if (nt.pairs.size() + level_pairs.size() >
        static_cast<std::size_t>(budget.max_total_pairs))
      throw std::runtime_error("net_theory: pair budget exceeded");
    const double level_weight = 1.0 / (static_cast<double>(n) * n);
    for (const auto& [a, b] : level_pairs) {
      NetPairEntry e;
      e.level = n;
      e.pt = make_pair_theory(a, b);
      const double w = level_weight / static_cast<double>(level_pairs.size());
      raw.push_back(w);
      raw_total += w;
      nt.pairs.push_back(std::move(e));
    }
  }
  std::vector<std::pair<double, TheoryHandle>> parts;
  for (std::size_t i = 0; i < nt.pairs.size(); ++i) {
    nt.pairs[i].weight = raw[i] / raw_total;
    parts.emplace_back(nt.pairs[i].weight, nt.pairs[i].pt.handle());
  }
  nt.handle = convex_combine(parts);
  nt.handle.name = "net-d" + std::to_string(d) + "-N" + std::to_string(levels);
  return nt;
}

}  // namespace ontic
