#include "ontic/net.hpp"

#include <algorithm>
#include <stdexcept>

namespace ontic {

double net_audit_gap(const std::vector<ProjState>& net, int d, int probes,
                     Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < probes; ++i) {
    const ProjState probe = haar_state(d, rng);
    double best = 2.0;
    for (const auto& s : net) best = std::min(best, fs_distance(probe, s));
    worst = std::max(worst, best);
  }
  return worst;
}

std::vector<ProjState> epsilon_net(int d, int n, Rng& rng,
                                   const NetBudget& budget) {
  require_dim(d);
  if (n < 1) throw std::invalid_argument("epsilon_net: n >= 1 required");
  const double radius = 1.0 / static_cast<double>(n);
  // keep a safety margin so the later non-orthogonality perturbation cannot
  // push a tight cover past the radius
  const double delta = std::min(1e-3, radius / 64.0);
  const double target = radius - 2.0 * delta;

  std::vector<ProjState> net{haar_state(d, rng)};
  for (int round = 0; round < budget.max_rounds; ++round) {
    // fresh probe cloud; insert the farthest uncovered probe, repeat
    std::vector<ProjState> probes;
    std::vector<double> dist;
    probes.reserve(budget.audit_probes);
    Rng probe_rng = rng.split();
    for (int i = 0; i < budget.audit_probes; ++i)
      probes.push_back(haar_state(d, probe_rng));
    dist.assign(probes.size(), 2.0);
    for (std::size_t i = 0; i < probes.size(); ++i)
      for (const auto& s : net)
        dist[i] = std::min(dist[i], fs_distance(probes[i], s));

    bool inserted = false;
    for (;;) {
      const auto it = std::max_element(dist.begin(), dist.end());
      const std::size_t worst = static_cast<std::size_t>(it - dist.begin());
      if (*it <= target) break;
      net.push_back(probes[worst]);
      if (static_cast<int>(net.size()) > budget.max_points)
        throw std::runtime_error("epsilon_net: point budget exceeded");
      inserted = true;
      for (std::size_t i = 0; i < probes.size(); ++i)
        dist[i] = std::min(dist[i], fs_distance(probes[i], net.back()));
    }
    if (inserted) continue;  // net grew; audit against a fresh cloud

    auto candidate = perturb_to_nonorthogonal(net, delta, rng);
    Rng audit_rng = rng.split();
    if (net_audit_gap(candidate, d, budget.audit_probes, audit_rng) <= radius)
      return candidate;
    // perturbation or probe refresh exposed a gap; grow further
  }
  throw std::runtime_error("epsilon_net: round budget exceeded");
}

}  // namespace ontic
