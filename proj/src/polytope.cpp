#include "ctxq/polytope.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

namespace ctxq {

namespace {

std::string vertex_set_label(unsigned long mask, const char* prefix) {
  std::string s = std::string(prefix) + "{";
  bool first = true;
  for (int v = 0; mask >> v; ++v) {
    if (!(mask >> v & 1)) continue;
    if (!first) s += ",";
    s += std::to_string(v);
    first = false;
  }
  return s + "}";
}

std::string pair_label(const char* base, int i, int j) {
  return std::string(base) + "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

std::vector<std::string> marginal_labels(const Graph& g) {
  std::vector<std::string> labels;
  for (int v = 0; v < g.n; ++v) labels.push_back("q" + std::to_string(v));
  for (auto [i, j] : g.edges) labels.push_back(pair_label("q", i, j));
  return labels;
}

std::vector<std::string> edge_labels(const Graph& g, const char* base) {
  std::vector<std::string> labels;
  for (auto [i, j] : g.edges) labels.push_back(pair_label(base, i, j));
  return labels;
}

void require_dim(size_t got, size_t want, const char* what) {
  if (got != want)
    throw std::invalid_argument(std::string(what) + ": expected dimension " +
                                std::to_string(want) + ", got " + std::to_string(got));
}

size_t checked_power(int exponent, size_t cap, const char* what) {
  if (exponent >= 40 || (size_t(1) << exponent) > cap)
    throw std::length_error(std::string(what) + ": 2^" + std::to_string(exponent) +
                            " vertices exceed cap " + std::to_string(cap));
  return size_t(1) << exponent;
}

}  // namespace

bool hpolytope_contains(const HPolytope& h, const std::vector<Rat>& x) {
  require_dim(x.size(), h.dim, "hpolytope_contains");
  for (size_t r = 0; r < h.a.size(); ++r) {
    Rat lhs(0);
    for (int k = 0; k < h.dim; ++k) lhs += h.a[r][k] * x[k];
    if (lhs > h.b[r]) return false;
  }
  return true;
}

std::vector<Rat> marginal_coordinates(const Graph& g, const Behavior& b, const Rat& tol) {
  auto sc = CompatibilityScenario::from_graph(g);
  validate_behavior(sc, b);
  auto bad = check_nondisturbance(sc, b, tol);
  if (!bad.empty())
    throw std::domain_error("marginals are context dependent (largest gap " +
                            rational_to_string(bad.front().gap) + " between contexts " +
                            std::to_string(bad.front().context_a) + " and " +
                            std::to_string(bad.front().context_b) + ")");
  std::vector<Rat> q;
  q.reserve(g.n + g.edges.size());
  for (int v = 0; v < g.n; ++v) {
    for (int c = 0; c < sc.n_contexts(); ++c) {
      const auto& ctx = sc.contexts[c];
      if (std::find(ctx.begin(), ctx.end(), v) == ctx.end()) continue;
      q.push_back(marginal(sc, b, c, {v})[1]);
      break;
    }
  }
  for (size_t k = 0; k < g.edges.size(); ++k) q.push_back(b.p[k][3]);
  return q;
}

Behavior behavior_from_marginal_coordinates(const Graph& g, const std::vector<Rat>& q) {
  require_dim(q.size(), g.n + g.edges.size(), "behavior_from_marginal_coordinates");
  Behavior b;
  for (size_t k = 0; k < g.edges.size(); ++k) {
    auto [i, j] = g.edges[k];
    const Rat& qi = q[i];
    const Rat& qj = q[j];
    const Rat& qij = q[g.n + k];
    b.p.push_back({1 - qi - qj + qij, qj - qij, qi - qij, qij});
  }
  for (int v = 0; v < g.n; ++v)
    if (g.degree(v) == 0) b.p.push_back({1 - q[v], q[v]});
  return b;
}

std::vector<Rat> expectation_coordinates(const Graph& g, const std::vector<Rat>& q) {
  require_dim(q.size(), g.n + g.edges.size(), "expectation_coordinates");
  Graph sus = g.suspension();
  std::vector<Rat> x;
  x.reserve(sus.edges.size());
  for (auto [i, j] : sus.edges) {
    if (j == g.n)
      x.push_back(1 - 2 * q[i]);
    else
      x.push_back(1 - 2 * q[i] - 2 * q[j] + 4 * q[g.n + g.edge_index(i, j)]);
  }
  return x;
}

std::vector<Rat> marginal_from_expectation(const Graph& g, const std::vector<Rat>& x) {
  Graph sus = g.suspension();
  require_dim(x.size(), sus.edges.size(), "marginal_from_expectation");
  std::vector<Rat> q(g.n + g.edges.size());
  for (int v = 0; v < g.n; ++v) q[v] = (1 - x[sus.edge_index(v, g.n)]) / 2;
  for (size_t k = 0; k < g.edges.size(); ++k) {
    auto [i, j] = g.edges[k];
    const Rat& xei = x[sus.edge_index(i, g.n)];
    const Rat& xej = x[sus.edge_index(j, g.n)];
    const Rat& xij = x[sus.edge_index(i, j)];
    q[g.n + k] = (1 + xij - xei - xej) / 4;
  }
  return q;
}

std::vector<Rat> signs_to_cuts(const std::vector<Rat>& x) {
  std::vector<Rat> y;
  y.reserve(x.size());
  for (const Rat& v : x) y.push_back((1 - v) / 2);
  return y;
}

std::vector<Rat> cuts_to_signs(const std::vector<Rat>& y) {
  std::vector<Rat> x;
  x.reserve(y.size());
  for (const Rat& v : y) x.push_back(1 - 2 * v);
  return x;
}

std::vector<Rat> drop_apex_block(const Graph& g, const std::vector<Rat>& x) {
  Graph sus = g.suspension();
  require_dim(x.size(), sus.edges.size(), "drop_apex_block");
  std::vector<Rat> out;
  out.reserve(g.edges.size());
  for (auto [i, j] : g.edges) out.push_back(x[sus.edge_index(i, j)]);
  return out;
}

VPolytope correlation_polytope(const Graph& g, size_t cap) {
  size_t count = checked_power(g.n, cap, "correlation_polytope");
  VPolytope p;
  p.dim = g.n + static_cast<int>(g.edges.size());
  p.coord_labels = marginal_labels(g);
  for (size_t mask = 0; mask < count; ++mask) {
    std::vector<Rat> v(p.dim, Rat(0));
    for (int i = 0; i < g.n; ++i)
      if (mask >> i & 1) v[i] = 1;
    for (size_t k = 0; k < g.edges.size(); ++k) {
      auto [i, j] = g.edges[k];
      if ((mask >> i & 1) && (mask >> j & 1)) v[g.n + k] = 1;
    }
    p.vertices.push_back(std::move(v));
    p.vertex_labels.push_back(vertex_set_label(mask, "S"));
  }
  return p;
}

namespace {

VPolytope cut_polytope_impl(const Graph& g, size_t cap, bool pm1) {
  size_t count = checked_power(g.n > 0 ? g.n - 1 : 0, cap, "cut_polytope");
  VPolytope p;
  p.dim = static_cast<int>(g.edges.size());
  p.coord_labels = edge_labels(g, pm1 ? "x" : "y");
  std::map<std::vector<Rat>, bool> seen;
  for (size_t mask = 0; mask < count; ++mask) {
    // vertex 0 stays on the + side; bit v-1 moves vertex v across
    std::vector<Rat> v;
    v.reserve(p.dim);
    for (auto [i, j] : g.edges) {
      bool si = i > 0 && (mask >> (i - 1) & 1);
      bool sj = j > 0 && (mask >> (j - 1) & 1);
      bool crossing = si != sj;
      if (pm1)
        v.push_back(crossing ? Rat(-1) : Rat(1));
      else
        v.push_back(crossing ? Rat(1) : Rat(0));
    }
    if (!seen.emplace(v, true).second) continue;
    p.vertices.push_back(std::move(v));
    p.vertex_labels.push_back(vertex_set_label(mask << 1, "cut"));
  }
  return p;
}

}  // namespace

VPolytope cut_polytope_pm1(const Graph& g, size_t cap) { return cut_polytope_impl(g, cap, true); }
VPolytope cut_polytope_01(const Graph& g, size_t cap) { return cut_polytope_impl(g, cap, false); }

HPolytope met_hrep(const Graph& g) {
  HPolytope h;
  h.dim = static_cast<int>(g.edges.size());
  h.coord_labels = edge_labels(g, "y");
  for (const auto& cyc : chordless_cycles(g)) {
    size_t len = cyc.size();
    std::vector<int> eidx(len);
    for (size_t t = 0; t < len; ++t)
      eidx[t] = g.edge_index(cyc[t], cyc[(t + 1) % len]);
    std::string cyc_label = "cyc[";
    for (size_t t = 0; t < len; ++t)
      cyc_label += (t ? "," : "") + std::to_string(cyc[t]);
    cyc_label += "]";
    for (size_t mask = 1; mask < (size_t(1) << len); ++mask) {
      int odd = std::popcount(mask);
      if (odd % 2 == 0) continue;
      std::vector<Rat> row(h.dim, Rat(0));
      for (size_t t = 0; t < len; ++t) row[eidx[t]] = (mask >> t & 1) ? Rat(1) : Rat(-1);
      h.a.push_back(std::move(row));
      h.b.push_back(odd - 1);
      h.row_labels.push_back(cyc_label + ":F#" + std::to_string(mask));
    }
  }
  for (size_t k = 0; k < g.edges.size(); ++k) {
    auto [i, j] = g.edges[k];
    if (g.edge_in_triangle(i, j)) continue;
    std::vector<Rat> lo(h.dim, Rat(0)), hi(h.dim, Rat(0));
    lo[k] = -1;
    hi[k] = 1;
    h.a.push_back(std::move(lo));
    h.b.push_back(Rat(0));
    h.row_labels.push_back("0<=" + pair_label("y", i, j));
    h.a.push_back(std::move(hi));
    h.b.push_back(Rat(1));
    h.row_labels.push_back(pair_label("y", i, j) + "<=1");
  }
  return h;
}

HPolytope rcmet_hrep(const Graph& g) {
  HPolytope h;
  h.dim = g.n + static_cast<int>(g.edges.size());
  h.coord_labels = marginal_labels(g);
  auto push = [&h](std::vector<Rat> row, Rat rhs, std::string label) {
    h.a.push_back(std::move(row));
    h.b.push_back(std::move(rhs));
    h.row_labels.push_back(std::move(label));
  };
  for (size_t k = 0; k < g.edges.size(); ++k) {
    auto [i, j] = g.edges[k];
    int e = g.n + static_cast<int>(k);
    std::vector<Rat> row(h.dim, Rat(0));
    row[e] = -1;
    push(row, Rat(0), "0<=" + pair_label("q", i, j));
    std::fill(row.begin(), row.end(), Rat(0));
    row[e] = 1;
    row[i] = -1;
    push(row, Rat(0), pair_label("q", i, j) + "<=q" + std::to_string(i));
    std::fill(row.begin(), row.end(), Rat(0));
    row[e] = 1;
    row[j] = -1;
    push(row, Rat(0), pair_label("q", i, j) + "<=q" + std::to_string(j));
    std::fill(row.begin(), row.end(), Rat(0));
    row[i] = 1;
    row[j] = 1;
    row[e] = -1;
    push(row, Rat(1), "q" + std::to_string(i) + "+q" + std::to_string(j) + "-" +
                          pair_label("q", i, j) + "<=1");
  }
  return h;
}

HPolytope rmet_hrep(const Graph& g) {
  Graph sus = g.suspension();
  HPolytope h;
  h.dim = static_cast<int>(sus.edges.size());
  h.coord_labels = edge_labels(sus, "x");
  for (auto [i, j] : g.edges) {
    int eij = sus.edge_index(i, j);
    int ei = sus.edge_index(i, g.n);
    int ej = sus.edge_index(j, g.n);
    const int signs[4][3] = {{1, 1, -1}, {1, -1, 1}, {-1, 1, 1}, {-1, -1, -1}};
    for (int r = 0; r < 4; ++r) {
      std::vector<Rat> row(h.dim, Rat(0));
      row[ei] = signs[r][0];
      row[ej] = signs[r][1];
      row[eij] = signs[r][2];
      h.a.push_back(std::move(row));
      h.b.push_back(Rat(1));
      h.row_labels.push_back("tri" + pair_label("", i, j) + "#" + std::to_string(r));
    }
  }
  return h;
}

bool cut_equals_met_guard(const Graph& g) { return !has_minor(g, Graph::complete(5)); }

HPolytope ncycle_facets_pm1(int n) {
  if (n < 3) throw std::invalid_argument("cycle needs at least 3 edges");
  Graph g = Graph::cycle(n);
  HPolytope h;
  h.dim = n;
  h.coord_labels = edge_labels(g, "x");
  for (size_t mask = 0; mask < (size_t(1) << n); ++mask) {
    if (std::popcount(mask) % 2 == 0) continue;
    std::vector<Rat> row(n);
    for (int k = 0; k < n; ++k) row[k] = (mask >> k & 1) ? Rat(-1) : Rat(1);
    h.a.push_back(std::move(row));
    h.b.push_back(n - 2);
    h.row_labels.push_back("neg#" + std::to_string(mask));
  }
  return h;
}

ElliptopeCheck elliptope_membership_k4free(const Graph& g, const std::vector<double>& z,
                                           double eps) {
  require_dim(z.size(), g.edges.size(), "elliptope_membership_k4free");
  if (has_k4_minor(g))
    throw std::domain_error("elliptope membership via cycle rows needs a K4-minor-free graph");
  ElliptopeCheck out;
  out.margin = -std::numeric_limits<double>::infinity();
  auto note = [&out](double margin, const std::string& label) {
    if (margin > out.margin) {
      out.margin = margin;
      out.worst_row = label;
    }
  };
  std::vector<double> y(z.size());
  for (size_t k = 0; k < z.size(); ++k) {
    note(std::abs(z[k]) - 1.0, "box" + pair_label("", g.edges[k].first, g.edges[k].second));
    y[k] = std::acos(std::clamp(z[k], -1.0, 1.0)) / std::numbers::pi;
  }
  HPolytope met = met_hrep(g);
  for (size_t r = 0; r < met.a.size(); ++r) {
    double lhs = 0;
    for (int k = 0; k < met.dim; ++k) lhs += to_double(met.a[r][k]) * y[k];
    note(lhs - to_double(met.b[r]), met.row_labels[r]);
  }
  out.inside = out.margin <= eps;
  return out;
}

std::vector<double> elliptope_extremal_point(int n) {
  if (n < 3) throw std::invalid_argument("cycle needs at least 3 edges");
  if (n % 2 == 0) throw std::domain_error("extremal point only defined for odd cycles");
  Graph g = Graph::cycle(n);
  double c = std::cos(std::numbers::pi / n);
  std::vector<double> z(n, c);
  z[g.edge_index(0, n - 1)] = -c;
  return z;
}

}  // namespace ctxq
