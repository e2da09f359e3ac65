#include "ctxq/scenario.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace ctxq {

CompatibilityScenario CompatibilityScenario::make(std::vector<std::string> measurements,
                                                  std::vector<std::vector<int>> contexts,
                                                  std::vector<std::string> outcomes) {
  if (measurements.empty()) throw std::invalid_argument("no measurements");
  if (outcomes.size() < 2) throw std::invalid_argument("need at least 2 outcome labels");
  {
    std::set<std::string> names(measurements.begin(), measurements.end());
    if (names.size() != measurements.size()) throw std::invalid_argument("duplicate measurement name");
    std::set<std::string> labels(outcomes.begin(), outcomes.end());
    if (labels.size() != outcomes.size()) throw std::invalid_argument("duplicate outcome label");
  }
  std::vector<char> covered(measurements.size(), 0);
  for (auto& ctx : contexts) {
    if (ctx.empty()) throw std::invalid_argument("empty context");
    std::sort(ctx.begin(), ctx.end());
    for (size_t k = 0; k < ctx.size(); ++k) {
      if (ctx[k] < 0 || ctx[k] >= static_cast<int>(measurements.size()))
        throw std::invalid_argument("context references unknown measurement");
      if (k > 0 && ctx[k] == ctx[k - 1]) throw std::invalid_argument("repeated measurement in context");
      covered[ctx[k]] = 1;
    }
  }
  for (size_t m = 0; m < measurements.size(); ++m)
    if (!covered[m]) throw std::invalid_argument("measurement '" + measurements[m] + "' in no context");
  for (size_t a = 0; a < contexts.size(); ++a)
    for (size_t b = 0; b < contexts.size(); ++b) {
      if (a == b) continue;
      if (std::includes(contexts[b].begin(), contexts[b].end(), contexts[a].begin(), contexts[a].end()))
        throw std::invalid_argument("contexts must form an antichain");
    }
  CompatibilityScenario sc;
  sc.measurements = std::move(measurements);
  sc.contexts = std::move(contexts);
  sc.outcomes = std::move(outcomes);
  return sc;
}

CompatibilityScenario CompatibilityScenario::from_graph(const Graph& g) {
  std::vector<std::string> meas;
  for (int v = 0; v < g.n; ++v) meas.push_back("M" + std::to_string(v));
  std::vector<std::vector<int>> ctxs;
  for (auto [i, j] : g.edges) ctxs.push_back({i, j});
  for (int v = 0; v < g.n; ++v)
    if (g.degree(v) == 0) ctxs.push_back({v});
  return make(std::move(meas), std::move(ctxs), {"+1", "-1"});
}

size_t CompatibilityScenario::tuple_count(int c) const {
  size_t total = 1;
  for (size_t k = 0; k < contexts[c].size(); ++k) total *= outcomes.size();
  return total;
}

size_t CompatibilityScenario::encode(int c, const std::vector<int>& tuple) const {
  if (tuple.size() != contexts[c].size()) throw std::invalid_argument("tuple length mismatch");
  size_t code = 0;
  for (int o : tuple) {
    if (o < 0 || o >= n_outcomes()) throw std::invalid_argument("outcome code out of range");
    code = code * outcomes.size() + static_cast<size_t>(o);
  }
  return code;
}

std::vector<int> CompatibilityScenario::decode(int c, size_t code) const {
  std::vector<int> tuple(contexts[c].size());
  for (size_t k = tuple.size(); k-- > 0;) {
    tuple[k] = static_cast<int>(code % outcomes.size());
    code /= outcomes.size();
  }
  if (code != 0) throw std::invalid_argument("outcome code out of range");
  return tuple;
}

size_t CompatibilityScenario::flat_size() const {
  size_t total = 0;
  for (int c = 0; c < n_contexts(); ++c) total += tuple_count(c);
  return total;
}

size_t CompatibilityScenario::flat_offset(int c) const {
  size_t off = 0;
  for (int k = 0; k < c; ++k) off += tuple_count(k);
  return off;
}

void validate_behavior(const CompatibilityScenario& sc, const Behavior& b) {
  if (b.p.size() != static_cast<size_t>(sc.n_contexts()))
    throw std::invalid_argument("behavior context count mismatch");
  for (int c = 0; c < sc.n_contexts(); ++c) {
    if (b.p[c].size() != sc.tuple_count(c))
      throw std::invalid_argument("behavior table size mismatch in context " + std::to_string(c));
    Rat sum(0);
    for (const Rat& v : b.p[c]) {
      if (v < 0 || v > 1)
        throw std::invalid_argument("probability outside [0,1] in context " + std::to_string(c));
      sum += v;
    }
    if (sum != 1)
      throw std::invalid_argument("context " + std::to_string(c) + " sums to " + rational_to_string(sum));
  }
}

std::vector<int> restrict_tuple(const std::vector<int>& tuple, const std::vector<int>& ctx,
                                const std::vector<int>& sub) {
  if (tuple.size() != ctx.size()) throw std::invalid_argument("tuple length mismatch");
  std::vector<int> out;
  size_t k = 0;
  for (int m : sub) {
    while (k < ctx.size() && ctx[k] < m) ++k;
    if (k == ctx.size() || ctx[k] != m) throw std::domain_error("subset not contained in context");
    out.push_back(tuple[k]);
  }
  return out;
}

std::vector<Rat> marginal(const CompatibilityScenario& sc, const Behavior& b, int c,
                          const std::vector<int>& sub) {
  if (c < 0 || c >= sc.n_contexts()) throw std::invalid_argument("context index out of range");
  size_t out_size = 1;
  for (size_t k = 0; k < sub.size(); ++k) out_size *= sc.outcomes.size();
  std::vector<Rat> out(out_size, Rat(0));
  for (size_t code = 0; code < sc.tuple_count(c); ++code) {
    auto tuple = sc.decode(c, code);
    auto restricted = restrict_tuple(tuple, sc.contexts[c], sub);
    size_t idx = 0;
    for (int o : restricted) idx = idx * sc.outcomes.size() + static_cast<size_t>(o);
    out[idx] += b.p[c][code];
  }
  return out;
}

std::vector<MarginalMismatch> check_nondisturbance(const CompatibilityScenario& sc,
                                                   const Behavior& b, const Rat& tol) {
  validate_behavior(sc, b);
  std::vector<MarginalMismatch> out;
  for (int a = 0; a < sc.n_contexts(); ++a) {
    for (int c = a + 1; c < sc.n_contexts(); ++c) {
      std::vector<int> overlap;
      std::set_intersection(sc.contexts[a].begin(), sc.contexts[a].end(), sc.contexts[c].begin(),
                            sc.contexts[c].end(), std::back_inserter(overlap));
      if (overlap.empty()) continue;
      auto ma = marginal(sc, b, a, overlap);
      auto mc = marginal(sc, b, c, overlap);
      Rat gap(0);
      for (size_t k = 0; k < ma.size(); ++k) {
        Rat d = rat_abs(ma[k] - mc[k]);
        if (d > gap) gap = d;
      }
      if (gap > tol) out.push_back({a, c, overlap, gap});
    }
  }
  return out;
}

Behavior deterministic_behavior(const CompatibilityScenario& sc, const std::vector<int>& g) {
  if (g.size() != static_cast<size_t>(sc.n_measurements()))
    throw std::invalid_argument("assignment length mismatch");
  for (int o : g)
    if (o < 0 || o >= sc.n_outcomes()) throw std::invalid_argument("assignment outcome out of range");
  Behavior b;
  b.p.resize(sc.n_contexts());
  for (int c = 0; c < sc.n_contexts(); ++c) {
    std::vector<int> tuple;
    for (int m : sc.contexts[c]) tuple.push_back(g[m]);
    b.p[c].assign(sc.tuple_count(c), Rat(0));
    b.p[c][sc.encode(c, tuple)] = Rat(1);
  }
  return b;
}

std::vector<Behavior> enumerate_classical_vertices(const CompatibilityScenario& sc, size_t cap) {
  size_t total = 1;
  for (int m = 0; m < sc.n_measurements(); ++m) {
    total *= sc.outcomes.size();
    if (total > cap) throw std::length_error("classical vertex count exceeds cap");
  }
  std::vector<Behavior> out;
  out.reserve(total);
  std::vector<int> g(sc.n_measurements(), 0);
  for (size_t idx = 0; idx < total; ++idx) {
    size_t rem = idx;
    for (size_t m = g.size(); m-- > 0;) {
      g[m] = static_cast<int>(rem % sc.outcomes.size());
      rem /= sc.outcomes.size();
    }
    out.push_back(deterministic_behavior(sc, g));
  }
  return out;
}

Behavior behavior_from_global_section(
    const CompatibilityScenario& sc,
    const std::vector<std::pair<std::vector<int>, Rat>>& weights) {
  if (weights.empty()) throw std::invalid_argument("no weights");
  Rat sum(0);
  for (const auto& [g, w] : weights) {
    if (w < 0) throw std::domain_error("negative weight");
    sum += w;
  }
  if (sum != 1) throw std::invalid_argument("weights sum to " + rational_to_string(sum));
  Behavior b;
  b.p.resize(sc.n_contexts());
  for (int c = 0; c < sc.n_contexts(); ++c) b.p[c].assign(sc.tuple_count(c), Rat(0));
  for (const auto& [g, w] : weights) {
    Behavior d = deterministic_behavior(sc, g);
    for (int c = 0; c < sc.n_contexts(); ++c)
      for (size_t s = 0; s < b.p[c].size(); ++s) b.p[c][s] += w * d.p[c][s];
  }
  return b;
}

Behavior mix(const std::vector<Behavior>& parts, const std::vector<Rat>& weights) {
  if (parts.empty() || parts.size() != weights.size())
    throw std::invalid_argument("mix needs matching nonempty lists");
  Rat sum(0);
  for (const Rat& w : weights) {
    if (w < 0) throw std::domain_error("negative weight");
    sum += w;
  }
  if (sum != 1) throw std::invalid_argument("mix weights sum to " + rational_to_string(sum));
  Behavior out = parts[0];
  for (auto& table : out.p)
    for (auto& v : table) v *= weights[0];
  for (size_t k = 1; k < parts.size(); ++k) {
    if (parts[k].p.size() != out.p.size()) throw std::invalid_argument("mix over different scenarios");
    for (size_t c = 0; c < out.p.size(); ++c) {
      if (parts[k].p[c].size() != out.p[c].size())
        throw std::invalid_argument("mix over different scenarios");
      for (size_t s = 0; s < out.p[c].size(); ++s) out.p[c][s] += weights[k] * parts[k].p[c][s];
    }
  }
  return out;
}

std::vector<Rat> flatten(const CompatibilityScenario& sc, const Behavior& b) {
  std::vector<Rat> out;
  out.reserve(sc.flat_size());
  for (int c = 0; c < sc.n_contexts(); ++c) {
    if (b.p[c].size() != sc.tuple_count(c)) throw std::invalid_argument("behavior shape mismatch");
    for (const Rat& v : b.p[c]) out.push_back(v);
  }
  return out;
}

Behavior unflatten(const CompatibilityScenario& sc, const std::vector<Rat>& v) {
  if (v.size() != sc.flat_size()) throw std::invalid_argument("flat vector length mismatch");
  Behavior b;
  b.p.resize(sc.n_contexts());
  size_t at = 0;
  for (int c = 0; c < sc.n_contexts(); ++c) {
    b.p[c].assign(v.begin() + at, v.begin() + at + sc.tuple_count(c));
    at += sc.tuple_count(c);
  }
  return b;
}

namespace {

void scenario_automorphism_search(const CompatibilityScenario& sc,
                                  const std::set<std::vector<int>>& ctx_set,
                                  std::vector<int>& perm, std::vector<char>& used, int m,
                                  std::vector<std::vector<int>>& out) {
  int n = sc.n_measurements();
  if (m == n) {
    for (const auto& ctx : sc.contexts) {
      std::vector<int> img;
      for (int v : ctx) img.push_back(perm[v]);
      std::sort(img.begin(), img.end());
      if (!ctx_set.count(img)) return;
    }
    out.push_back(perm);
    return;
  }
  for (int img = 0; img < n; ++img) {
    if (used[img]) continue;
    perm[m] = img;
    // prune: every fully-mapped context must land on a context
    bool ok = true;
    for (const auto& ctx : sc.contexts) {
      bool complete = true;
      for (int v : ctx)
        if (v > m) {
          complete = false;
          break;
        }
      if (!complete) continue;
      std::vector<int> mapped;
      for (int v : ctx) mapped.push_back(perm[v]);
      std::sort(mapped.begin(), mapped.end());
      if (!ctx_set.count(mapped)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    used[img] = 1;
    scenario_automorphism_search(sc, ctx_set, perm, used, m + 1, out);
    used[img] = 0;
  }
}

}  // namespace

std::vector<std::vector<int>> scenario_automorphisms(const CompatibilityScenario& sc) {
  if (sc.n_measurements() > 16) throw std::length_error("automorphism search capped at 16 measurements");
  std::set<std::vector<int>> ctx_set(sc.contexts.begin(), sc.contexts.end());
  std::vector<int> perm(sc.n_measurements(), -1);
  std::vector<char> used(sc.n_measurements(), 0);
  std::vector<std::vector<int>> out;
  scenario_automorphism_search(sc, ctx_set, perm, used, 0, out);
  return out;
}

}  // namespace ctxq
