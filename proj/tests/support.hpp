#pragma once

// Shared builders for test fixtures used across several test binaries.

#include <vector>

#include "ctxq/graph.hpp"
#include "ctxq/rational.hpp"
#include "ctxq/scenario.hpp"

namespace testsupport {

using namespace ctxq;

inline CompatibilityScenario cycle_scenario(int n) {
  return CompatibilityScenario::from_graph(Graph::cycle(n));
}

// Contexts of the 4-cycle scenario in canonical order: (0,1), (0,3), (1,2),
// (2,3). Perfectly correlated except on (0,3). Outcome code 0 = "+1".
inline Behavior pr_box() {
  Behavior b;
  b.p.resize(4);
  for (int c = 0; c < 4; ++c) {
    b.p[c].assign(4, Rat(0));
    if (c == 1) {
      b.p[c][1] = Rat(1, 2);  // (+1, -1)
      b.p[c][2] = Rat(1, 2);  // (-1, +1)
    } else {
      b.p[c][0] = Rat(1, 2);  // (+1, +1)
      b.p[c][3] = Rat(1, 2);  // (-1, -1)
    }
  }
  return b;
}

// Two-outcome pair table from a correlation value e and uniform marginals.
inline std::vector<Rat> pair_table_from_correlation(const Rat& e) {
  std::vector<Rat> t(4);
  t[0] = t[3] = (1 + e) / 4;
  t[1] = t[2] = (1 - e) / 4;
  return t;
}

// Correlations close to +-sqrt(2)/2 as exact decimals; the canonical
// maximal quantum violation point of the 4-cycle.
inline Behavior tsirelson_box() {
  Rat e = parse_rational("0.7071067811865476");
  Behavior b;
  b.p.resize(4);
  for (int c = 0; c < 4; ++c) b.p[c] = pair_table_from_correlation(c == 1 ? -e : e);
  return b;
}

// Random mixture of classical vertices with exact rational weights.
inline Behavior random_classical_mixture(const CompatibilityScenario& sc, RatSampler& rng,
                                         int support = 4) {
  auto vertices_total = [&sc]() {
    size_t t = 1;
    for (int m = 0; m < sc.n_measurements(); ++m) t *= sc.outcomes.size();
    return t;
  }();
  std::vector<std::pair<std::vector<int>, Rat>> weights;
  std::vector<Rat> raw;
  Rat sum(0);
  for (int k = 0; k < support; ++k) {
    size_t idx = rng.integer(vertices_total);
    std::vector<int> g(sc.n_measurements());
    for (size_t m = g.size(); m-- > 0;) {
      g[m] = static_cast<int>(idx % sc.outcomes.size());
      idx /= sc.outcomes.size();
    }
    Rat w = rng.unit() + Rat(1, 100);  // bounded away from zero
    weights.emplace_back(g, w);
    sum += w;
  }
  for (auto& [g, w] : weights) w /= sum;
  return behavior_from_global_section(sc, weights);
}

}  // namespace testsupport
