#include "ctxq/graph_bounds.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "ctxq/lp.hpp"

namespace ctxq {

namespace {

using Mask = std::uint64_t;

std::vector<Rat> resolve_weights(const char* who, const Graph& g,
                                 const std::vector<Rat>& weights) {
  std::vector<Rat> w =
      weights.empty() ? std::vector<Rat>(g.n, Rat(1)) : weights;
  if (static_cast<int>(w.size()) != g.n)
    throw std::invalid_argument(std::string(who) +
                                ": weight count != vertex count");
  for (const Rat& x : w)
    if (x < 0) throw std::domain_error(std::string(who) + ": negative weight");
  return w;
}

struct Searcher {
  std::vector<Mask> adj;
  std::vector<Rat> w;
  std::vector<int> order;  // vertices by descending degree
  Rat best = Rat(-1);
  Mask best_set = 0;

  // Greedy clique cover of the candidate set. An independent set meets each
  // clique at most once, so summing the heaviest vertex per clique bounds
  // whatever weight the remaining candidates can still contribute.
  Rat cover_bound(Mask cand) const {
    Rat bound(0);
    Mask left = cand;
    for (int v : order) {
      if (!(left >> v & 1)) continue;
      Rat top = w[v];
      Mask clique = Mask(1) << v;
      Mask common = adj[v] & left;
      while (common) {
        int u = std::countr_zero(common);
        clique |= Mask(1) << u;
        if (w[u] > top) top = w[u];
        common &= adj[u];
      }
      left &= ~clique;
      bound += top;
    }
    return bound;
  }

  void run(Mask cand, Mask chosen, const Rat& cur) {
    if (cand == 0) {
      if (cur > best) {
        best = cur;
        best_set = chosen;
      }
      return;
    }
    if (cur + cover_bound(cand) <= best) return;
    int v = -1;
    for (int u : order) {
      if (cand >> u & 1) {
        v = u;
        break;
      }
    }
    Rat with = cur + w[v];
    run(cand & ~adj[v] & ~(Mask(1) << v), chosen | Mask(1) << v, with);
    run(cand & ~(Mask(1) << v), chosen, cur);
  }
};

}  // namespace

IndependenceResult independence_number(const Graph& g,
                                       const std::vector<Rat>& weights) {
  if (g.n > 40)
    throw std::length_error("independence_number: more than 40 vertices");
  Searcher s;
  s.w = resolve_weights("independence_number", g, weights);
  s.adj.assign(g.n, 0);
  for (auto [i, j] : g.edges) {
    s.adj[i] |= Mask(1) << j;
    s.adj[j] |= Mask(1) << i;
  }
  s.order.resize(g.n);
  std::iota(s.order.begin(), s.order.end(), 0);
  std::stable_sort(s.order.begin(), s.order.end(),
                   [&](int a, int b) { return g.degree(a) > g.degree(b); });
  Mask all = g.n == 0 ? 0 : (Mask(1) << g.n) - 1;
  s.run(all, 0, Rat(0));

  IndependenceResult res;
  res.value = s.best;
  for (int v = 0; v < g.n; ++v)
    if (s.best_set >> v & 1) res.witness.push_back(v);
  return res;
}

PackingResult fractional_packing(const Graph& g,
                                 const std::vector<Rat>& weights) {
  std::vector<Rat> w = resolve_weights("fractional_packing", g, weights);
  LPProblem<Rat> lp;
  for (int v = 0; v < g.n; ++v) lp.add_var(Rat(-w[v]));
  for (const auto& q : maximal_cliques(g)) {
    std::vector<Rat> row(g.n, Rat(0));
    for (int v : q) row[v] = Rat(1);
    lp.add_row(std::move(row), Rel::LE, Rat(1));
  }
  auto sol = solve_lp(lp);
  if (sol.status != LPStatus::Optimal)
    throw std::runtime_error("fractional_packing: packing program did not solve");
  return PackingResult{Rat(-sol.objective), std::move(sol.x)};
}

}  // namespace ctxq
