#include <cmath>
#include <numeric>

#include "doctest.h"
#include "ontic/models.hpp"
#include "ontic/rng.hpp"
#include "ontic/sampling.hpp"
#include "ontic/theory.hpp"

using namespace ontic;

namespace {

ProjState st2(double x0, double x1) {
  Vec v(2);
  v << x0, x1;
  return ProjState(v);
}

ProjState st3(double x0, double x1, double x2) {
  Vec v(3);
  v << x0, x1, x2;
  return ProjState(v);
}

// analytic outcome distribution of the pair theory: integrate the slot
// indicator over each measure component's p-interval
std::vector<double> integrated_outcomes(const PairTheory& pt,
                                        const ProjState& psi,
                                        const OrthoBasis& m) {
  const SortedBasis sb = pair_sort_basis(m, pt.a, pt.b);
  const FiberedMeasure mu = pair_mu(psi, pt.a, pt.b, pt.epsilon);
  std::vector<double> out(m.d(), 0.0);
  for (const auto& c : mu.components()) {
    std::vector<double> cum(m.d());
    double acc = 0.0;
    for (int j = 0; j < m.d(); ++j) {
      acc += std::norm(inner(sb.basis[j], c.fiber));
      cum[j] = acc;
    }
    cum.back() = std::max(cum.back(), 1.0);  // the last slot absorbs the tail
    double prev = 0.0;
    for (int j = 0; j < m.d(); ++j) {
      const double lo = std::max(c.lo, prev);
      const double hi = std::min(c.hi, cum[j]);
      if (hi > lo) out[sb.perm[j]] += c.weight * (hi - lo) / (c.hi - c.lo);
      prev = cum[j];
    }
  }
  return out;
}

}  // namespace

// ---- baseline ---------------------------------------------------------------

TEST_CASE("psi_ontic reproduces Born weights exactly per sample") {
  Rng rng(41);
  const TheoryHandle t = psi_ontic(4);
  CHECK(t.exact_measures);
  CHECK_FALSE(t.deterministic_xi);
  for (int trial = 0; trial < 10; ++trial) {
    const ProjState psi = haar_state(4, rng);
    const OrthoBasis m = haar_basis(4, rng);
    const OnticPoint lam = t.sample_mu(psi, rng);
    CHECK(states_equal(lam.state, psi));
    for (int k = 0; k < 4; ++k) {
      CHECK(std::abs(t.xi(k, m, lam) - std::norm(inner(m[k], psi))) < 1e-12);
    }
  }
  // distinct rays have disjoint measures
  const ProjState a = haar_state(4, rng);
  const ProjState b = haar_state(4, rng);
  CHECK(t.overlap(a, b) == 0.0);
  CHECK(t.overlap(a, a) == 1.0);
  CHECK_FALSE(t.covered(a, b));
}

TEST_CASE("broken_uniform is flat by construction") {
  Rng rng(42);
  const TheoryHandle t = broken_uniform(3);
  const OrthoBasis m = haar_basis(3, rng);
  const OnticPoint lam = random_ontic_point(t, rng);
  for (int k = 0; k < 3; ++k) CHECK(t.xi(k, m, lam) == 1.0 / 3.0);
}

// ---- d=2 closest-state model -------------------------------------------------

TEST_CASE("ks2d sampler matches its density law") {
  Rng rng(43);
  const TheoryHandle t = ks2d();
  const ProjState psi = haar_state(2, rng);
  const int n = 40000;
  double mean_x = 0.0;
  for (int i = 0; i < n; ++i) {
    const OnticPoint lam = t.sample_mu(psi, rng);
    const double x = std::norm(inner(lam.state, psi));
    CHECK(x >= 0.5 - 1e-12);  // support is the half-sphere nearer psi
    mean_x += x;
  }
  mean_x /= n;
  // x = 1/2 + sqrt(u)/2 for u uniform: E x = 5/6, Var x = 1/72
  CHECK(std::abs(mean_x - 5.0 / 6.0) < 5.0 * std::sqrt(1.0 / 72.0 / n));
}

TEST_CASE("ks2d density profile is consistent along the distance coordinate") {
  Rng rng(44);
  const TheoryHandle t = ks2d();
  const ProjState psi = haar_state(2, rng);
  for (double r : {0.0, 0.1, 0.25, 0.4, 0.49}) {
    // rotate away from psi by arc r inside a fixed great circle
    const ProjState perp = haar_orthogonal_state(psi, rng);
    Vec v = std::cos(M_PI * r / 2.0) * psi.amp() +
            std::sin(M_PI * r / 2.0) * perp.amp();
    const ProjState lam = ProjState::raw(v);
    CHECK(std::abs(ks_density(psi, lam) - ks_density_at_distance(r)) < 1e-12);
    CHECK(t.radial_density(r) == ks_density_at_distance(r));
  }
  // cos^2(pi/4) misses 1/2 by an ulp, so the boundary value is fp dust
  CHECK(ks_density_at_distance(0.5) <= 1e-15);
  CHECK(ks_density_at_distance(0.8) == 0.0);
  CHECK(ks_density_at_distance(0.0) ==
        doctest::Approx(1.0 / M_PI).epsilon(1e-14));
}

TEST_CASE("ks2d overlap quadrature agrees with the closed form") {
  // min-density mass between mu_psi and mu_phi is 1 - sqrt(1 - s^2) for
  // s = |<psi|phi>|
  for (double s : {0.3, 1.0 / std::sqrt(2.0), 0.9, 0.99}) {
    const double closed = 1.0 - std::sqrt(1.0 - s * s);
    CHECK(std::abs(ks_overlap_quadrature(s) - closed) < 1e-6);
  }
  CHECK(std::abs(ks_overlap_quadrature(1.0) - 1.0) < 1e-9);
  CHECK(ks_overlap_quadrature(0.0) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("ks2d response breaks ties toward the lower index") {
  const TheoryHandle t = ks2d();
  // in the standard basis both tie amplitudes are bitwise equal, so the
  // tie-break is exercised deterministically
  const OrthoBasis e = standard_basis(2);
  const ProjState tie = ks_tie_point(e);
  CHECK(std::abs(std::norm(inner(e[0], tie)) - 0.5) < 1e-12);
  const OnticPoint pt{tie, 0.0, -1};
  CHECK(t.xi(0, e, pt) == 1.0);
  CHECK(t.xi(1, e, pt) == 0.0);

  // at a generic basis's tie point normalization still holds exactly
  Rng rng(45);
  const OrthoBasis m = haar_basis(2, rng);
  const OnticPoint pt2{ks_tie_point(m), 0.0, -1};
  const double x0 = t.xi(0, m, pt2);
  const double x1 = t.xi(1, m, pt2);
  CHECK(x0 + x1 == 1.0);
  CHECK((x0 == 0.0 || x0 == 1.0));
}

// ---- pair theory ------------------------------------------------------------

TEST_CASE("pair theory construction guards its preconditions") {
  const OrthoBasis e = standard_basis(3);
  CHECK_THROWS_AS(make_pair_theory(e[0], e[1]), std::invalid_argument);
  CHECK_THROWS_AS(make_pair_theory(e[0], e[0]), std::invalid_argument);
  const ProjState b = st3(0.6, 0.8, 0.0);
  const PairTheory pt = make_pair_theory(e[0], b);
  CHECK(pt.epsilon == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(pt.mix_bound() == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(pt.cover_radius() == doctest::Approx(0.05).epsilon(1e-14));
  // epsilon above 1/d cannot arise from a valid pair and is rejected
  CHECK_THROWS_AS(pair_mu(e[0], e[0], b, 0.5), std::invalid_argument);
}

TEST_CASE("sorted basis keys are descending and the first is at least epsilon") {
  Rng rng(46);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + int(rng.uniform_index(4));
    ProjState a = haar_state(d, rng);
    ProjState b = haar_state(d, rng);
    if (std::abs(inner(a, b)) < 1e-6) continue;
    const PairTheory pt = make_pair_theory(a, b);
    const SortedBasis sb = pair_sort_basis(haar_basis(d, rng), a, b);
    for (std::size_t j = 1; j < sb.keys.size(); ++j)
      CHECK(sb.keys[j - 1] >= sb.keys[j]);
    CHECK(sb.keys[0] >= pt.epsilon - 1e-12);
  }
}

TEST_CASE("naive p-threshold fails while the corrected bound holds") {
  // the counterexample pair: a = e1, b = 0.1 e1 + sqrt(0.99) e2
  const ProjState a = st2(1.0, 0.0);
  const ProjState b = st2(0.1, std::sqrt(0.99));
  const PairTheory pt = make_pair_theory(a, b);
  CHECK(pt.epsilon == doctest::Approx(0.05).epsilon(1e-13));

  const SortedBasis sb = pair_sort_basis(standard_basis(2), a, b);
  // p = 0.03 is below epsilon, yet the outcomes differ: the first sorted
  // cell of b is |<e1|b>|^2 = 0.01 < 0.03
  CHECK(pair_outcome_slot(sb.basis, a, 0.03) == 0);
  CHECK(pair_outcome_slot(sb.basis, b, 0.03) == 1);

  // below mix_bound = epsilon^2/4 the outcomes agree everywhere
  for (int i = 1; i <= 20; ++i) {
    const double p = pt.mix_bound() * i / 20.0;
    CHECK(pair_outcome_slot(sb.basis, a, p) ==
          pair_outcome_slot(sb.basis, b, p));
  }
}

TEST_CASE("covered states keep the first sorted cell above mix_bound") {
  Rng rng(47);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + int(rng.uniform_index(3));
    ProjState a = haar_state(d, rng);
    ProjState b = haar_state(d, rng);
    if (std::abs(inner(a, b)) < 1e-3) continue;
    const PairTheory pt = make_pair_theory(a, b);
    const ProjState anchor = (rng.uniform() < 0.5) ? a : b;
    const ProjState lam = ball_sample(anchor, pt.cover_radius(), rng);
    const SortedBasis sb = pair_sort_basis(haar_basis(d, rng), a, b);
    const double first_cell = std::norm(inner(sb.basis[0], lam));
    CHECK(first_cell >= pt.mix_bound());
  }
}

TEST_CASE("pair measures have the documented structure") {
  Rng rng(48);
  const ProjState a = st3(1.0, 0.0, 0.0);
  const ProjState b = st3(0.6, 0.8, 0.0);
  const PairTheory pt = make_pair_theory(a, b);
  const double m = pt.mix_bound();

  const FiberedMeasure on_a = pair_mu(a, a, b, pt.epsilon);
  REQUIRE(on_a.components().size() == 3);
  CHECK(on_a.components()[0].weight == doctest::Approx(1.0 - m));
  CHECK(states_equal(on_a.components()[0].fiber, a));
  CHECK(on_a.components()[0].lo == m);
  CHECK(on_a.components()[0].hi == 1.0);
  CHECK(on_a.components()[1].weight == m / 2.0);
  CHECK(states_equal(on_a.components()[1].fiber, a));
  CHECK(states_equal(on_a.components()[2].fiber, b));
  CHECK(on_a.components()[2].lo == 0.0);
  CHECK(on_a.components()[2].hi == m);

  const ProjState near_b = ball_sample(b, pt.cover_radius(), rng);
  CHECK(pair_mu(near_b, a, b, pt.epsilon).components().size() == 3);

  const ProjState far = st3(0.0, 0.0, 1.0);
  const FiberedMeasure plain = pair_mu(far, a, b, pt.epsilon);
  REQUIRE(plain.components().size() == 1);
  CHECK(plain.components()[0].weight == 1.0);
  CHECK(plain.components()[0].lo == 0.0);
  CHECK(plain.components()[0].hi == 1.0);
}

TEST_CASE("pair theory is Born-exact by analytic integration") {
  Rng rng(49);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 2 + int(rng.uniform_index(3));
    ProjState a = haar_state(d, rng);
    ProjState b = haar_state(d, rng);
    if (std::abs(inner(a, b)) < 1e-3) continue;
    const PairTheory pt = make_pair_theory(a, b);
    // probe anchors, covered states and generic states
    std::vector<ProjState> probes = {
        a, b, ball_sample(a, pt.cover_radius(), rng), haar_state(d, rng)};
    const OrthoBasis m = haar_basis(d, rng);
    for (const auto& psi : probes) {
      const auto got = integrated_outcomes(pt, psi, m);
      for (int k = 0; k < d; ++k) {
        CHECK(std::abs(got[k] - std::norm(inner(m[k], psi))) < 1e-12);
      }
    }
  }
}

TEST_CASE("handle xi agrees with the slot kernel") {
  Rng rng(50);
  const ProjState a = st3(1.0, 0.0, 0.0);
  const ProjState b = st3(0.6, 0.8, 0.0);
  const PairTheory pt = make_pair_theory(a, b);
  const TheoryHandle t = pt.handle();
  CHECK(t.deterministic_xi);
  CHECK(t.exact_measures);
  for (int trial = 0; trial < 50; ++trial) {
    const OrthoBasis m = haar_basis(3, rng);
    const OnticPoint lam{haar_state(3, rng), rng.uniform(), -1};
    const SortedBasis sb = pair_sort_basis(m, a, b);
    double sum = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double x = t.xi(k, m, lam);
      sum += x;
      const int slot = pair_outcome_slot(sb.basis, lam.state, lam.p);
      CHECK(x == ((sb.perm[slot] == k) ? 1.0 : 0.0));
    }
    CHECK(sum == 1.0);
    double all[3];
    t.xi_all(m, lam, all);
    for (int k = 0; k < 3; ++k) CHECK(all[k] == t.xi(k, m, lam));
  }
}

TEST_CASE("pair overlaps are exactly the mixing mass") {
  Rng rng(51);
  const ProjState a = st3(1.0, 0.0, 0.0);
  const ProjState b = st3(0.6, 0.8, 0.0);
  const PairTheory pt = make_pair_theory(a, b);
  const TheoryHandle t = pt.handle();
  const double m = pt.mix_bound();

  CHECK(t.overlap(a, b) == m);
  CHECK(t.covered(a, b));
  CHECK(t.covered(b, a));

  // both states merely near the anchors still share exactly the mixing mass
  const ProjState pa = ball_sample(a, pt.cover_radius(), rng);
  const ProjState pb = ball_sample(b, pt.cover_radius(), rng);
  CHECK(t.overlap(pa, pb) == m);
  CHECK(t.covered(pa, pb));

  // a state outside both balls shares nothing
  const ProjState far = st3(0.0, 0.0, 1.0);
  CHECK(t.overlap(far, b) == 0.0);
  CHECK_FALSE(t.covered(far, b));

  // sampled coverage pairs are always inside the balls
  for (int i = 0; i < 20; ++i) {
    const auto [x, y] = t.sample_covered_pair(rng);
    CHECK(t.covered(x, y));
    CHECK(t.overlap(x, y) == m);
  }
}

// ---- convex combinations ----------------------------------------------------

TEST_CASE("convex_combine validates and flattens") {
  const ProjState a = st3(1.0, 0.0, 0.0);
  const ProjState b = st3(0.6, 0.8, 0.0);
  const ProjState c = st3(0.0, 0.6, 0.8);
  const TheoryHandle ab = make_pair_theory(a, b).handle();
  const TheoryHandle bc = make_pair_theory(b, c).handle();

  CHECK_THROWS_AS(convex_combine({}), std::invalid_argument);
  CHECK_THROWS_AS(convex_combine({{0.4, ab}, {0.4, bc}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(convex_combine({{0.0, ab}, {1.0, bc}}),
                  std::invalid_argument);

  // single part with coefficient 1 behaves like the part
  const TheoryHandle one = convex_combine({{1.0, ab}});
  REQUIRE(one.leaves);
  CHECK(one.leaves->size() == 1);
  CHECK(one.overlap(a, b) == ab.overlap(a, b));

  // nesting flattens into weighted leaves
  const TheoryHandle nested =
      convex_combine({{0.5, ab}, {0.5, convex_combine({{0.5, ab}, {0.5, bc}})}});
  REQUIRE(nested.leaves);
  REQUIRE(nested.leaves->size() == 3);
  CHECK((*nested.leaves)[0].first == doctest::Approx(0.5));
  CHECK((*nested.leaves)[1].first == doctest::Approx(0.25));
  CHECK((*nested.leaves)[2].first == doctest::Approx(0.25));
}

TEST_CASE("convex combination scales overlaps by part weight") {
  const ProjState a = st3(1.0, 0.0, 0.0);
  const ProjState b = st3(0.6, 0.8, 0.0);
  // second part anchored far from (a, b) so only part one contributes
  const ProjState c = st3(0.0, 0.6, 0.8);
  const ProjState e3 = st3(0.0, 0.0, 1.0);
  const PairTheory p1 = make_pair_theory(a, b);
  const TheoryHandle mix = convex_combine(
      {{0.5, p1.handle()}, {0.5, make_pair_theory(c, e3).handle()}});
  CHECK(mix.exact_measures);
  CHECK(mix.overlap(a, b) == doctest::Approx(0.5 * p1.mix_bound()).epsilon(1e-15));
  CHECK(mix.covered(a, b));

  // mu carries the part tags and xi dispatches on them
  Rng rng(52);
  const FiberedMeasure mu = mix.mu(a);
  bool saw_tag1 = false;
  for (const auto& comp : mu.components()) {
    CHECK(comp.tag >= 0);
    CHECK(comp.tag <= 1);
    saw_tag1 |= comp.tag == 1;
  }
  CHECK(saw_tag1);
  const OrthoBasis m = haar_basis(3, rng);
  for (int i = 0; i < 50; ++i) {
    const OnticPoint pt = mix.sample_mu(a, rng);
    double sum = 0.0;
    for (int k = 0; k < 3; ++k) sum += mix.xi(k, m, pt);
    CHECK(sum == 1.0);
  }
}

// ---- net theory ---------------------------------------------------------------

TEST_CASE("net theory assembles normalized weights and positive coverage") {
  Rng rng(53);
  const NetTheory nt = net_theory(3, 2, rng);
  CHECK(nt.d == 3);
  CHECK(nt.levels == 2);
  REQUIRE_FALSE(nt.pairs.empty());
  double wsum = 0.0;
  for (const auto& e : nt.pairs) {
    CHECK(e.weight > 0.0);
    wsum += e.weight;
  }
  CHECK(std::abs(wsum - 1.0) < 1e-12);
  CHECK(nt.handle.name == "net-d3-N2");
  REQUIRE(nt.handle.leaves);
  CHECK(nt.handle.leaves->size() == nt.pairs.size());

  for (int i = 0; i < 30; ++i) {
    const auto [x, y] = nt.sample_covered_pair(rng);
    CHECK(nt.covered(x, y));
    CHECK(nt.handle.overlap(x, y) > 0.0);
  }
}

TEST_CASE("net theory passes a Born spot check") {
  Rng rng(54);
  const NetTheory nt = net_theory(3, 2, rng);
  const ProjState psi = haar_state(3, rng);
  const OrthoBasis m = haar_basis(3, rng);
  const BornReport rep = verify_born(nt.handle, psi, m, 30000, 4.5, rng);
  CHECK(rep.pass);
}
