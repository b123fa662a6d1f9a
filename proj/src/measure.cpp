#include "ontic/measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ontic {

FiberedMeasure::FiberedMeasure(std::vector<FiberComponent> components)
    : components_(std::move(components)) {
  if (components_.empty())
    throw std::invalid_argument("FiberedMeasure: no components");
  const int dim = components_.front().fiber.d();
  for (const auto& c : components_) {
    if (!(c.weight >= 0.0))
      throw std::invalid_argument("FiberedMeasure: negative weight");
    if (!(c.lo >= 0.0 && c.lo < c.hi && c.hi <= 1.0))
      throw std::invalid_argument(
          "FiberedMeasure: interval must satisfy 0 <= lo < hi <= 1");
    require_same_dim(c.fiber.d(), dim, "FiberedMeasure");
  }
}

double FiberedMeasure::total_mass() const {
  double s = 0.0;
  for (const auto& c : components_) s += c.weight;
  return s;
}

int FiberedMeasure::d() const {
  return components_.empty() ? 0 : components_.front().fiber.d();
}

double CanonicalGroup::mass() const {
  double s = 0.0;
  for (const auto& c : cells) s += c.density * (c.hi - c.lo);
  return s;
}

std::vector<CanonicalGroup> canonicalize(const FiberedMeasure& m) {
  std::vector<CanonicalGroup> groups;
  std::vector<std::vector<const FiberComponent*>> members;
  for (const auto& c : m.components()) {
    if (c.weight == 0.0) continue;
    std::size_t g = groups.size();
    for (std::size_t i = 0; i < groups.size(); ++i) {
      if (groups[i].tag == c.tag && states_equal(groups[i].fiber, c.fiber)) {
        g = i;
        break;
      }
    }
    if (g == groups.size()) {
      groups.push_back({c.tag, c.fiber, {}});
      members.emplace_back();
    }
    members[g].push_back(&c);
  }
  for (std::size_t g = 0; g < groups.size(); ++g) {
    std::vector<double> cuts;
    for (const auto* c : members[g]) {
      cuts.push_back(c->lo);
      cuts.push_back(c->hi);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<DensityCell> cells;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double lo = cuts[i], hi = cuts[i + 1];
      double density = 0.0;
      for (const auto* c : members[g])
        if (c->lo <= lo && hi <= c->hi) density += c->weight / (c->hi - c->lo);
      if (density <= 0.0) continue;
      if (!cells.empty() && cells.back().hi == lo &&
          std::abs(cells.back().density - density) <=
              1e-12 * std::max(1.0, density)) {
        cells.back().hi = hi;  // merge equal-density neighbours
      } else {
        cells.push_back({lo, hi, density});
      }
    }
    groups[g].cells = std::move(cells);
  }
  groups.erase(std::remove_if(groups.begin(), groups.end(),
                              [](const CanonicalGroup& g) {
                                return g.cells.empty();
                              }),
               groups.end());
  return groups;
}

namespace {

// integral of |d1 - d2| (mode 0) or min(d1, d2) (mode 1) over the union of
// cell supports of two groups on the same fiber
double integrate_pair(const std::vector<DensityCell>& a,
                      const std::vector<DensityCell>& b, int mode) {
  std::vector<double> cuts;
  for (const auto& c : a) {
    cuts.push_back(c.lo);
    cuts.push_back(c.hi);
  }
  for (const auto& c : b) {
    cuts.push_back(c.lo);
    cuts.push_back(c.hi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  auto density_at = [](const std::vector<DensityCell>& cells, double lo,
                       double hi) {
    for (const auto& c : cells)
      if (c.lo <= lo && hi <= c.hi) return c.density;
    return 0.0;
  };
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    const double d1 = density_at(a, lo, hi);
    const double d2 = density_at(b, lo, hi);
    const double v = (mode == 0) ? std::abs(d1 - d2) : std::min(d1, d2);
    acc += v * (hi - lo);
  }
  return acc;
}

void check_comparable(const FiberedMeasure& m1, const FiberedMeasure& m2) {
  require_same_dim(m1.d(), m2.d(), "total_variation");
  if (std::abs(m1.total_mass() - 1.0) > 1e-12 ||
      std::abs(m2.total_mass() - 1.0) > 1e-12)
    throw std::invalid_argument("total_variation: measures must be normalized");
}

// pair up groups across the two canonical forms by (tag, fiber ray)
std::vector<std::pair<int, int>> match_groups(
    const std::vector<CanonicalGroup>& g1,
    const std::vector<CanonicalGroup>& g2) {
  std::vector<std::pair<int, int>> matches;
  std::vector<bool> used(g2.size(), false);
  for (std::size_t i = 0; i < g1.size(); ++i) {
    for (std::size_t j = 0; j < g2.size(); ++j) {
      if (used[j]) continue;
      if (g1[i].tag == g2[j].tag && states_equal(g1[i].fiber, g2[j].fiber)) {
        matches.emplace_back(static_cast<int>(i), static_cast<int>(j));
        used[j] = true;
        break;
      }
    }
  }
  return matches;
}

}  // namespace

double total_variation(const FiberedMeasure& m1, const FiberedMeasure& m2) {
  check_comparable(m1, m2);
  const auto g1 = canonicalize(m1);
  const auto g2 = canonicalize(m2);
  const auto matches = match_groups(g1, g2);
  std::vector<bool> m1_matched(g1.size(), false), m2_matched(g2.size(), false);
  double acc = 0.0;
  for (const auto& [i, j] : matches) {
    m1_matched[i] = true;
    m2_matched[j] = true;
    acc += integrate_pair(g1[i].cells, g2[j].cells, 0);
  }
  for (std::size_t i = 0; i < g1.size(); ++i)
    if (!m1_matched[i]) acc += g1[i].mass();
  for (std::size_t j = 0; j < g2.size(); ++j)
    if (!m2_matched[j]) acc += g2[j].mass();
  return 0.5 * acc;
}

double overlap_mass(const FiberedMeasure& m1, const FiberedMeasure& m2) {
  check_comparable(m1, m2);
  const auto g1 = canonicalize(m1);
  const auto g2 = canonicalize(m2);
  double acc = 0.0;
  for (const auto& [i, j] : match_groups(g1, g2))
    acc += integrate_pair(g1[i].cells, g2[j].cells, 1);
  return acc;
}

OnticPoint sample(const FiberedMeasure& m, Rng& rng) {
  const auto& comps = m.components();
  if (comps.empty()) throw std::invalid_argument("sample: empty measure");
  const double total = m.total_mass();
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("sample: measure not normalized");
  const double u = rng.uniform() * total;
  double cum = 0.0;
  std::size_t pick = comps.size() - 1;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    cum += comps[i].weight;
    if (u < cum) {
      pick = i;
      break;
    }
  }
  const auto& c = comps[pick];
  return OnticPoint{c.fiber, rng.uniform_in(c.lo, c.hi), c.tag};
}

namespace {

int part_tag_span(const FiberedMeasure& m) {
  int max_tag = -1;
  bool any_untagged = false;
  for (const auto& c : m.components()) {
    if (c.tag < 0)
      any_untagged = true;
    else
      max_tag = std::max(max_tag, c.tag);
  }
  if (max_tag >= 0 && any_untagged)
    throw std::invalid_argument(
        "tagged_mixture: part mixes tagged and untagged components");
  return max_tag + 1;  // 0 means untagged leaf, occupies one slot
}

}  // namespace

FiberedMeasure tagged_mixture(
    const std::vector<std::pair<double, FiberedMeasure>>& parts,
    const std::vector<int>& base_tags) {
  if (parts.empty()) throw std::invalid_argument("tagged_mixture: no parts");
  if (base_tags.size() != parts.size())
    throw std::invalid_argument("tagged_mixture: tag list size mismatch");
  double csum = 0.0;
  for (const auto& [c, m] : parts) {
    if (!(c >= 0.0))
      throw std::invalid_argument("tagged_mixture: negative coefficient");
    csum += c;
  }
  if (std::abs(csum - 1.0) > 1e-12)
    throw std::invalid_argument("tagged_mixture: coefficients must sum to 1");
  std::vector<FiberComponent> out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& [coef, m] = parts[i];
    for (const auto& c : m.components()) {
      FiberComponent nc = c;
      nc.weight = coef * c.weight;
      nc.tag = base_tags[i] + std::max(c.tag, 0);
      out.push_back(std::move(nc));
    }
  }
  return FiberedMeasure(std::move(out));
}

FiberedMeasure tagged_mixture(
    const std::vector<std::pair<double, FiberedMeasure>>& parts) {
  std::vector<int> base(parts.size(), 0);
  int next = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    base[i] = next;
    next += std::max(part_tag_span(parts[i].second), 1);
  }
  return tagged_mixture(parts, base);
}

}  // namespace ontic
