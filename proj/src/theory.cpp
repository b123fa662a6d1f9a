#include "ontic/theory.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "ontic/sampling.hpp"

namespace ontic {

std::vector<double> estimate_outcome_probs(const TheoryHandle& t,
                                           const ProjState& psi,
                                           const OrthoBasis& M, int n,
                                           Rng& rng, int workers) {
  require_same_dim(t.d, psi.d(), "estimate_outcome_probs");
  require_same_dim(t.d, M.d(), "estimate_outcome_probs");
  if (n < 1000)
    throw std::invalid_argument("estimate_outcome_probs: n >= 1000 required");
  const int d = t.d;

  // split all chunk streams up front; workers only affect scheduling
  std::vector<Rng> streams;
  streams.reserve(kChunks);
  for (int c = 0; c < kChunks; ++c) streams.push_back(rng.split());
  std::vector<int> counts(kChunks, n / kChunks);
  for (int c = 0; c < n % kChunks; ++c) ++counts[c];

  const auto draw = sampler_for(t, psi);
  std::vector<std::vector<long double>> sums(
      kChunks, std::vector<long double>(d, 0.0L));
  auto run_chunk = [&](int c) {
    Rng& s = streams[c];
    std::vector<long double>& acc = sums[c];
    std::vector<double> row(d);
    for (int i = 0; i < counts[c]; ++i) {
      const OnticPoint lam = draw(s);
      if (t.xi_all) {
        t.xi_all(M, lam, row.data());
        for (int k = 0; k < d; ++k) acc[k] += row[k];
      } else {
        for (int k = 0; k < d; ++k) acc[k] += t.xi(k, M, lam);
      }
    }
  };

  workers = std::max(1, workers);
  if (workers == 1) {
    for (int c = 0; c < kChunks; ++c) run_chunk(c);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int c = next.fetch_add(1); c < kChunks; c = next.fetch_add(1))
          run_chunk(c);
      });
    for (auto& th : pool) th.join();
  }

  std::vector<double> est(d, 0.0);
  for (int k = 0; k < d; ++k) {
    long double s = 0.0L;
    for (int c = 0; c < kChunks; ++c) s += sums[c][k];  // fixed order
    est[k] = static_cast<double>(s / n);
  }
  return est;
}

BornReport verify_born(const TheoryHandle& t, const ProjState& psi,
                       const OrthoBasis& M, int n, double z_max, Rng& rng,
                       int workers) {
  const auto est = estimate_outcome_probs(t, psi, M, n, rng, workers);
  BornReport rep;
  rep.theory = t.name;
  rep.d = t.d;
  rep.n = n;
  rep.z_max = z_max;
  rep.pass = true;
  for (int k = 0; k < t.d; ++k) {
    OutcomeCheck oc;
    oc.estimate = est[k];
    const double a = std::abs(inner(M[k], psi));
    oc.target = a * a;
    double se = std::sqrt(std::max(oc.target * (1.0 - oc.target), 0.0) / n);
    if (se == 0.0) se = 1e-15;  // exact target 0 or 1: any deviation is huge
    oc.se = se;
    oc.z = (oc.estimate - oc.target) / se;
    if (std::abs(oc.z) > z_max) rep.pass = false;
    rep.outcomes.push_back(oc);
  }
  return rep;
}

bool verify_normalization(const TheoryHandle& t, const OrthoBasis& M,
                          const std::vector<OnticPoint>& lambdas,
                          double* worst_deviation) {
  const double tol = t.deterministic_xi ? 0.0 : 1e-12;
  double worst = 0.0;
  bool ok = true;
  for (const auto& lam : lambdas) {
    double s = 0.0;
    for (int k = 0; k < t.d; ++k) s += t.xi(k, M, lam);
    const double dev = std::abs(s - 1.0);
    worst = std::max(worst, dev);
    if (dev > tol) ok = false;
  }
  if (worst_deviation) *worst_deviation = worst;
  return ok;
}

double check_nontrivial_pair(const TheoryHandle& t, const ProjState& psi,
                             const ProjState& phi) {
  if (states_equal(psi, phi))
    throw std::invalid_argument("check_nontrivial_pair: states are equal");
  return t.overlap(psi, phi);
}

NontrivialityReport check_max_nontrivial(const TheoryHandle& t, int n_pairs,
                                         Rng& rng) {
  NontrivialityReport rep;
  rep.n_pairs = n_pairs;
  rep.min_overlap = 2.0;
  rep.all_positive = true;
  for (int i = 0; i < n_pairs; ++i) {
    const auto [psi, phi] = t.sample_covered_pair(rng);
    const double ov = t.overlap(psi, phi);
    rep.min_overlap = std::min(rep.min_overlap, ov);
    if (!(ov > 0.0)) rep.all_positive = false;
  }
  return rep;
}

OnticPoint random_ontic_point(const TheoryHandle& t, Rng& rng) {
  const ProjState psi = haar_state(t.d, rng);
  return t.sample_mu(psi, rng);
}

std::function<OnticPoint(Rng&)> sampler_for(const TheoryHandle& t,
                                            const ProjState& psi) {
  if (t.exact_measures && t.mu) {
    auto measure = std::make_shared<FiberedMeasure>(t.mu(psi));
    return [measure](Rng& rng) { return sample(*measure, rng); };
  }
  return [&t, psi](Rng& rng) { return t.sample_mu(psi, rng); };
}

}  // namespace ontic
