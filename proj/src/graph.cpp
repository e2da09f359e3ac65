#include "ctxq/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace ctxq {

Graph Graph::from_edges(int n, std::vector<std::pair<int, int>> edges) {
  if (n < 0) throw std::invalid_argument("negative vertex count");
  Graph g;
  g.n = n;
  g.adj.assign(n, std::vector<char>(n, 0));
  for (auto& [i, j] : edges) {
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= n) throw std::invalid_argument("edge endpoint out of range");
    if (i == j) throw std::invalid_argument("self-loop");
    if (g.adj[i][j]) throw std::invalid_argument("duplicate edge");
    g.adj[i][j] = g.adj[j][i] = 1;
  }
  std::sort(edges.begin(), edges.end());
  g.edges = std::move(edges);
  return g;
}

Graph Graph::cycle(int n) {
  if (n < 3) throw std::invalid_argument("cycle needs at least 3 vertices");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return from_edges(n, std::move(e));
}

Graph Graph::complete(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return from_edges(n, std::move(e));
}

Graph Graph::complete_bipartite(int a, int b) {
  if (a < 1 || b < 1) throw std::invalid_argument("bipartite parts must be nonempty");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) e.emplace_back(i, a + j);
  return from_edges(a + b, std::move(e));
}

Graph Graph::path(int n) {
  if (n < 1) throw std::invalid_argument("path needs at least 1 vertex");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return from_edges(n, std::move(e));
}

Graph Graph::prism(int n) {
  if (n < 3) throw std::invalid_argument("prism needs cycle length >= 3");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) {
    e.emplace_back(i, (i + 1) % n);
    e.emplace_back(n + i, n + (i + 1) % n);
    e.emplace_back(i, n + i);
  }
  return from_edges(2 * n, std::move(e));
}

Graph Graph::moebius_ladder(int n) {
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("moebius ladder needs even n >= 4");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  for (int i = 0; i < n / 2; ++i) e.emplace_back(i, i + n / 2);
  return from_edges(n, std::move(e));
}

Graph Graph::suspension() const {
  auto e = edges;
  for (int v = 0; v < n; ++v) e.emplace_back(v, n);
  return from_edges(n + 1, std::move(e));
}

namespace {

void check_cap(int n, int cap, const char* what) {
  if (n > cap) throw std::length_error(std::string(what) + " capped at " + std::to_string(cap) + " vertices");
}

}  // namespace

Graph Graph::complement() const {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!adj[i][j]) e.emplace_back(i, j);
  return from_edges(n, std::move(e));
}

bool Graph::has_edge(int i, int j) const {
  if (i < 0 || j < 0 || i >= n || j >= n || i == j) return false;
  return adj[i][j];
}

int Graph::edge_index(int i, int j) const {
  if (i > j) std::swap(i, j);
  auto it = std::lower_bound(edges.begin(), edges.end(), std::make_pair(i, j));
  if (it == edges.end() || *it != std::make_pair(i, j)) return -1;
  return static_cast<int>(it - edges.begin());
}

std::vector<int> Graph::neighbors(int v) const {
  std::vector<int> out;
  for (int u = 0; u < n; ++u)
    if (adj[v][u]) out.push_back(u);
  return out;
}

int Graph::degree(int v) const { return static_cast<int>(neighbors(v).size()); }

bool Graph::edge_in_triangle(int i, int j) const {
  if (!has_edge(i, j)) throw std::invalid_argument("not an edge");
  for (int k = 0; k < n; ++k)
    if (adj[i][k] && adj[j][k]) return true;
  return false;
}

namespace {

void automorphism_search(const Graph& g, std::vector<int>& perm, std::vector<char>& used, int v,
                         std::vector<std::vector<int>>& out) {
  if (v == g.n) {
    out.push_back(perm);
    return;
  }
  for (int img = 0; img < g.n; ++img) {
    if (used[img] || g.degree(v) != g.degree(img)) continue;
    bool ok = true;
    for (int u = 0; u < v && ok; ++u)
      if (g.adj[v][u] != g.adj[img][perm[u]]) ok = false;
    if (!ok) continue;
    perm[v] = img;
    used[img] = 1;
    automorphism_search(g, perm, used, v + 1, out);
    used[img] = 0;
  }
}

}  // namespace

std::vector<std::vector<int>> graph_automorphisms(const Graph& g) {
  check_cap(g.n, 16, "automorphism search");
  std::vector<std::vector<int>> out;
  std::vector<int> perm(g.n, -1);
  std::vector<char> used(g.n, 0);
  automorphism_search(g, perm, used, 0, out);
  return out;
}

namespace {

// Extends a chordless path anchored at its minimum vertex. A new vertex may
// touch only the current endpoint, except the start vertex, where touching
// closes a cycle.
void chordless_extend(const Graph& g, std::vector<int>& path, std::vector<char>& in_path,
                      size_t max_len, std::vector<std::vector<int>>& out) {
  int last = path.back();
  int start = path.front();
  for (int x = start + 1; x < g.n; ++x) {
    if (in_path[x] || !g.adj[last][x]) continue;
    bool chord = false;
    for (size_t k = 1; k + 1 < path.size(); ++k)
      if (g.adj[x][path[k]]) {
        chord = true;
        break;
      }
    if (chord) continue;
    if (g.adj[x][start]) {
      if (path.size() + 1 <= max_len && path[1] < x) {
        auto cyc = path;
        cyc.push_back(x);
        out.push_back(cyc);
      }
      continue;
    }
    if (path.size() + 1 >= max_len) continue;
    path.push_back(x);
    in_path[x] = 1;
    chordless_extend(g, path, in_path, max_len, out);
    in_path[x] = 0;
    path.pop_back();
  }
}

}  // namespace

std::vector<std::vector<int>> chordless_cycles(const Graph& g, int max_len) {
  if (max_len < 0 || max_len > g.n) throw std::invalid_argument("max_len out of range");
  size_t cap = max_len == 0 ? static_cast<size_t>(g.n) : static_cast<size_t>(max_len);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < g.n; ++s) {
    for (int v1 = s + 1; v1 < g.n; ++v1) {
      if (!g.adj[s][v1]) continue;
      std::vector<int> path = {s, v1};
      std::vector<char> in_path(g.n, 0);
      in_path[s] = in_path[v1] = 1;
      chordless_extend(g, path, in_path, cap, out);
    }
  }
  return out;
}

namespace {

void bron_kerbosch(const Graph& g, std::set<int> r, std::set<int> p, std::set<int> x,
                   std::vector<std::vector<int>>& out) {
  if (p.empty() && x.empty()) {
    out.emplace_back(r.begin(), r.end());
    return;
  }
  // pivot: vertex of P union X with most neighbors in P
  int pivot = -1, best = -1;
  for (int u : p) {
    int cnt = 0;
    for (int w : p)
      if (g.adj[u][w]) ++cnt;
    if (cnt > best) best = cnt, pivot = u;
  }
  for (int u : x) {
    int cnt = 0;
    for (int w : p)
      if (g.adj[u][w]) ++cnt;
    if (cnt > best) best = cnt, pivot = u;
  }
  std::vector<int> candidates;
  for (int v : p)
    if (pivot < 0 || !g.adj[pivot][v]) candidates.push_back(v);
  for (int v : candidates) {
    std::set<int> r2 = r, p2, x2;
    r2.insert(v);
    for (int w : p)
      if (g.adj[v][w]) p2.insert(w);
    for (int w : x)
      if (g.adj[v][w]) x2.insert(w);
    bron_kerbosch(g, r2, p2, x2, out);
    p.erase(v);
    x.insert(v);
  }
}

}  // namespace

std::vector<std::vector<int>> maximal_cliques(const Graph& g) {
  check_cap(g.n, 64, "clique enumeration");
  std::set<int> p;
  for (int v = 0; v < g.n; ++v) p.insert(v);
  std::vector<std::vector<int>> out;
  bron_kerbosch(g, {}, p, {}, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<int>> maximal_independent_sets(const Graph& g) {
  return maximal_cliques(g.complement());
}

namespace {

bool subgraph_iso_search(const Graph& g, const Graph& h, std::vector<int>& map,
                         std::vector<char>& used, int v) {
  if (v == h.n) return true;
  for (int img = 0; img < g.n; ++img) {
    if (used[img] || g.degree(img) < h.degree(v)) continue;
    bool ok = true;
    for (int u = 0; u < v && ok; ++u)
      if (h.adj[v][u] && !g.adj[img][map[u]]) ok = false;
    if (!ok) continue;
    map[v] = img;
    used[img] = 1;
    if (subgraph_iso_search(g, h, map, used, v + 1)) return true;
    used[img] = 0;
  }
  return false;
}

bool contains_as_subgraph(const Graph& g, const Graph& h) {
  std::vector<int> map(h.n, -1);
  std::vector<char> used(g.n, 0);
  return subgraph_iso_search(g, h, map, used, 0);
}

Graph contract_edge(const Graph& g, int a, int b) {
  // merge b into a, then drop b and shift higher indices down
  std::vector<std::pair<int, int>> e;
  auto remap = [b](int v) { return v > b ? v - 1 : v; };
  for (auto [i, j] : g.edges) {
    if (i == a && j == b) continue;
    int u = remap(i == b ? a : i);
    int w = remap(j == b ? a : j);
    if (u == w) continue;
    if (u > w) std::swap(u, w);
    e.emplace_back(u, w);
  }
  // duplicates arise from shared neighbors of a and b
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return Graph::from_edges(g.n - 1, std::move(e));
}

std::vector<unsigned long long> graph_key(const Graph& g) {
  std::vector<unsigned long long> key(1 + (g.n * g.n + 63) / 64, 0);
  key[0] = static_cast<unsigned long long>(g.n);
  for (auto [i, j] : g.edges) {
    int bit = i * g.n + j;
    key[1 + bit / 64] |= 1ull << (bit % 64);
  }
  return key;
}

bool minor_search(const Graph& g, const Graph& h,
                  std::set<std::vector<unsigned long long>>& seen) {
  if (g.n < h.n || g.edges.size() < h.edges.size()) return false;
  auto key = graph_key(g);
  if (seen.count(key)) return false;
  seen.insert(key);
  if (contains_as_subgraph(g, h)) return true;
  for (auto [i, j] : g.edges)
    if (minor_search(contract_edge(g, i, j), h, seen)) return true;
  return false;
}

}  // namespace

bool has_minor(const Graph& g, const Graph& h) {
  check_cap(g.n, 16, "minor search");
  std::set<std::vector<unsigned long long>> seen;
  return minor_search(g, h, seen);
}

bool has_k4_minor(const Graph& g) {
  // Delete isolated and pendant vertices, suppress degree-2 vertices merging
  // any parallel edge that produces. Series-parallel graphs reduce to
  // nothing; a stuck remainder of minimum degree 3 witnesses a K4 minor.
  std::vector<std::set<int>> adj(g.n);
  for (auto [i, j] : g.edges) {
    adj[i].insert(j);
    adj[j].insert(i);
  }
  std::vector<char> alive(g.n, 1);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < g.n; ++v) {
      if (!alive[v]) continue;
      if (adj[v].size() <= 1) {
        for (int u : adj[v]) adj[u].erase(v);
        adj[v].clear();
        alive[v] = 0;
        changed = true;
      } else if (adj[v].size() == 2) {
        int a = *adj[v].begin();
        int b = *std::next(adj[v].begin());
        adj[a].erase(v);
        adj[b].erase(v);
        adj[v].clear();
        alive[v] = 0;
        adj[a].insert(b);
        adj[b].insert(a);
        changed = true;
      }
    }
  }
  for (int v = 0; v < g.n; ++v)
    if (alive[v] && adj[v].size() >= 3) return true;
  return false;
}

}  // namespace ctxq
