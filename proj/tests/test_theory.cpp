#include <cmath>
#include <numeric>

#include "doctest.h"
#include "ontic/models.hpp"
#include "ontic/rng.hpp"
#include "ontic/sampling.hpp"
#include "ontic/theory.hpp"

using namespace ontic;

TEST_CASE("outcome estimates always sum to one") {
  Rng rng(31);
  for (const TheoryHandle& t :
       {psi_ontic(3), broken_uniform(3), ks2d()}) {
    Rng sub = rng.split();
    const ProjState psi = haar_state(t.d, sub);
    const OrthoBasis m = haar_basis(t.d, sub);
    const auto probs = estimate_outcome_probs(t, psi, m, 5000, sub);
    const double s = std::accumulate(probs.begin(), probs.end(), 0.0);
    CHECK(std::abs(s - 1.0) < 1e-12);
  }
}

TEST_CASE("estimates are identical for any worker count") {
  Rng setup(132);
  const TheoryHandle t = ks2d();
  const ProjState psi = haar_state(2, setup);
  const OrthoBasis m = haar_basis(2, setup);
  Rng r1(32), r2(32), r4(32);
  const auto a = estimate_outcome_probs(t, psi, m, 20000, r1, 1);
  const auto b = estimate_outcome_probs(t, psi, m, 20000, r2, 2);
  const auto c = estimate_outcome_probs(t, psi, m, 20000, r4, 4);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k] == b[k]);  // bitwise: fixed chunk reduction order
    CHECK(a[k] == c[k]);
  }
}

TEST_CASE("verify_born passes a quantum-complete rule and flags a broken one") {
  Rng rng(33);
  const OrthoBasis m = standard_basis(3);
  Vec v(3);
  v << 0.8, 0.6, 0.0;
  const ProjState psi(v);

  const BornReport good = verify_born(psi_ontic(3), psi, m, 50000, 4.0, rng);
  CHECK(good.pass);
  for (const auto& oc : good.outcomes) CHECK(std::abs(oc.z) <= 4.0);

  // the sabotaged rule returns 1/d regardless of lambda; outcome 0 has Born
  // weight 0.64, so the z-score is enormous
  const BornReport bad = verify_born(broken_uniform(3), psi, m, 50000, 4.0, rng);
  CHECK_FALSE(bad.pass);
  double worst = 0.0;
  for (const auto& oc : bad.outcomes) worst = std::max(worst, std::abs(oc.z));
  CHECK(worst > 10.0);
}

TEST_CASE("verify_normalization distinguishes exact and approximate rules") {
  Rng rng(34);
  const TheoryHandle det = psi_ontic(4);  // probabilistic xi, 1e-12 tolerance
  const OrthoBasis m = haar_basis(4, rng);
  std::vector<OnticPoint> pts;
  for (int i = 0; i < 500; ++i) pts.push_back(random_ontic_point(det, rng));
  double worst = -1.0;
  CHECK(verify_normalization(det, m, pts, &worst));
  CHECK(worst >= 0.0);
  CHECK(worst < 1e-12);

  // deterministic rules must hit exactly zero deviation
  const TheoryHandle ks = ks2d();
  const OrthoBasis m2 = haar_basis(2, rng);
  std::vector<OnticPoint> pts2;
  for (int i = 0; i < 500; ++i) pts2.push_back(random_ontic_point(ks, rng));
  double worst2 = -1.0;
  CHECK(verify_normalization(ks, m2, pts2, &worst2));
  CHECK(worst2 == 0.0);

  // negative control: a rule losing 0.2 of its mass
  TheoryHandle leaky = psi_ontic(4);
  leaky.deterministic_xi = false;
  leaky.xi = [](int, const OrthoBasis&, const OnticPoint&) { return 0.2; };
  leaky.xi_all = nullptr;
  CHECK_FALSE(verify_normalization(leaky, m, pts, &worst));
}

TEST_CASE("check_nontrivial_pair reports exact overlaps") {
  Vec a(3), b(3);
  a << 1.0, 0.0, 0.0;
  b << 0.6, 0.8, 0.0;
  const TheoryHandle t = make_pair_theory(ProjState(a), ProjState(b)).handle();
  const double ov = check_nontrivial_pair(t, ProjState(a), ProjState(b));
  CHECK(ov > 0.0);
  CHECK(ov == t.overlap(ProjState(a), ProjState(b)));
}

TEST_CASE("check_max_nontrivial samples the declared coverage set") {
  Rng rng(36);
  Vec a(3), b(3);
  a << 1.0, 0.0, 0.0;
  b << 0.6, 0.8, 0.0;
  const TheoryHandle t = make_pair_theory(ProjState(a), ProjState(b)).handle();
  const auto rep = check_max_nontrivial(t, 50, rng);
  CHECK(rep.n_pairs == 50);
  CHECK(rep.all_positive);
  CHECK(rep.min_overlap > 0.0);
}

TEST_CASE("random_ontic_point carries the component tag for mixtures") {
  Rng rng(37);
  Vec a(3), b(3), c(3);
  a << 1.0, 0.0, 0.0;
  b << 0.6, 0.8, 0.0;
  c << 0.0, 0.6, 0.8;
  const TheoryHandle mix = convex_combine(
      {{0.5, make_pair_theory(ProjState(a), ProjState(b)).handle()},
       {0.5, make_pair_theory(ProjState(b), ProjState(c)).handle()}});
  bool saw0 = false, saw1 = false;
  for (int i = 0; i < 200; ++i) {
    const OnticPoint pt = random_ontic_point(mix, rng);
    CHECK(pt.tag >= 0);
    CHECK(pt.tag <= 1);
    saw0 |= pt.tag == 0;
    saw1 |= pt.tag == 1;
  }
  CHECK(saw0);
  CHECK(saw1);
}

TEST_CASE("sampler_for draws from the same measure as sample_mu") {
  Rng rng(38);
  // delta measure: both paths must land on psi every time, whatever rng
  // shortcuts sample_mu takes
  const TheoryHandle t = psi_ontic(3);
  const ProjState psi = haar_state(3, rng);
  auto bound = sampler_for(t, psi);
  for (int i = 0; i < 20; ++i) {
    const OnticPoint a = bound(rng);
    const OnticPoint b = t.sample_mu(psi, rng);
    CHECK(states_equal(a.state, psi));
    CHECK(states_equal(b.state, psi));
    CHECK((a.p >= 0.0 && a.p <= 1.0));
    CHECK((b.p >= 0.0 && b.p <= 1.0));
  }
  // the pair theory runs the generic measure sampler on both paths, so two
  // equal streams stay in lockstep draw for draw
  const ProjState a2 = haar_state(3, rng);
  ProjState b2 = haar_state(3, rng);
  while (std::abs(inner(a2, b2)) < 0.05) b2 = haar_state(3, rng);
  const TheoryHandle pt = make_pair_theory(a2, b2).handle();
  Rng r1(39), r2(39);
  auto bound2 = sampler_for(pt, a2);
  for (int i = 0; i < 20; ++i) {
    const OnticPoint u = bound2(r1);
    const OnticPoint v = pt.sample_mu(a2, r2);
    CHECK(states_equal(u.state, v.state));
    CHECK(u.p == v.p);
  }
}
