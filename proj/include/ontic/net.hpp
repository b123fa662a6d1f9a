#pragma once

#include "ontic/rng.hpp"
#include "ontic/sampling.hpp"
#include "ontic/state.hpp"

namespace ontic {

struct NetBudget {
  int max_points = 4096;
  int max_rounds = 512;
  int audit_probes = 10000;
};

// Finite set A such that every ray lies within fs_distance 1/n of a member
// (verified by randomized audit with `audit_probes` Haar probes), with all
// members pairwise non-orthogonal. Greedy farthest-point insertion.
// Throws std::runtime_error when the budget is exhausted before coverage.
std::vector<ProjState> epsilon_net(int d, int n, Rng& rng,
                                   const NetBudget& budget = {});

// Largest min-distance to the net over `probes` Haar draws (audit statistic).
double net_audit_gap(const std::vector<ProjState>& net, int d, int probes,
                     Rng& rng);

}  // namespace ontic
