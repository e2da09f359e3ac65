#include "ctxq/exclusivity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

#include "ctxq/hull.hpp"
#include "ctxq/lp.hpp"

namespace ctxq {

namespace {

std::vector<double> to_doubles(const std::vector<Rat>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const Rat& r : v) out.push_back(to_double(r));
  return out;
}

std::string event_set_label(unsigned long mask) {
  std::string s = "S{";
  bool first = true;
  for (int v = 0; mask >> v; ++v) {
    if (!(mask >> v & 1)) continue;
    if (!first) s += ",";
    s += std::to_string(v);
    first = false;
  }
  return s + "}";
}

QuantifierReport member_zero(std::string name, const Membership& member,
                             const std::vector<Rat>& p) {
  QuantifierReport r;
  r.name = std::move(name);
  r.exact = true;
  r.classical = true;
  r.weights = member.weights;
  r.nearest = to_doubles(p);
  return r;
}

}  // namespace

ExclusivityScenario ExclusivityScenario::make(Graph g, std::vector<std::string> labels) {
  if (!labels.empty()) {
    if (labels.size() != static_cast<size_t>(g.n))
      throw std::invalid_argument("ExclusivityScenario: expected " + std::to_string(g.n) +
                                  " event labels, got " + std::to_string(labels.size()));
    std::set<std::string> seen(labels.begin(), labels.end());
    if (seen.size() != labels.size())
      throw std::invalid_argument("ExclusivityScenario: duplicate event label");
  }
  return ExclusivityScenario{std::move(g), std::move(labels)};
}

void validate_event_probabilities(const ExclusivityScenario& sc, const std::vector<Rat>& p) {
  if (p.size() != static_cast<size_t>(sc.g.n))
    throw std::invalid_argument("event probabilities: expected " + std::to_string(sc.g.n) +
                                " entries, got " + std::to_string(p.size()));
  for (size_t i = 0; i < p.size(); ++i)
    if (p[i] < 0 || p[i] > 1)
      throw std::domain_error("event probabilities: p[" + std::to_string(i) + "] = " +
                              rational_to_string(p[i]) + " outside [0,1]");
  for (auto [i, j] : sc.g.edges) {
    Rat s = p[i] + p[j];
    if (s > 1)
      throw std::domain_error("event probabilities: exclusive pair (" + std::to_string(i) +
                              "," + std::to_string(j) + ") sums to " + rational_to_string(s));
  }
}

VPolytope stab_vertices(const Graph& g) {
  if (g.n > 30)
    throw std::length_error("stab_vertices: " + std::to_string(g.n) +
                            " vertices exceeds the enumeration cap of 30");
  // grow the independent sets vertex by vertex; with v's earlier neighbors as
  // a mask, every set free of them extends by v
  std::vector<unsigned long> masks{0};
  for (int v = 0; v < g.n; ++v) {
    unsigned long nb = 0;
    for (int u : g.neighbors(v))
      if (u < v) nb |= 1ul << u;
    size_t sz = masks.size();
    for (size_t k = 0; k < sz; ++k)
      if (!(masks[k] & nb)) masks.push_back(masks[k] | (1ul << v));
  }
  std::sort(masks.begin(), masks.end());

  VPolytope p;
  p.dim = g.n;
  for (int v = 0; v < g.n; ++v) p.coord_labels.push_back("p" + std::to_string(v));
  for (unsigned long mask : masks) {
    std::vector<Rat> vert(g.n, Rat(0));
    for (int v = 0; v < g.n; ++v)
      if (mask >> v & 1) vert[v] = 1;
    p.vertices.push_back(std::move(vert));
    p.vertex_labels.push_back(event_set_label(mask));
  }
  return p;
}

HPolytope qstab_hrep(const Graph& g) {
  HPolytope h;
  h.dim = g.n;
  for (int v = 0; v < g.n; ++v) h.coord_labels.push_back("p" + std::to_string(v));
  for (const auto& clique : maximal_cliques(g)) {
    std::vector<Rat> row(g.n, Rat(0));
    unsigned long mask = 0;
    for (int v : clique) {
      row[v] = 1;
      mask |= 1ul << v;
    }
    h.a.push_back(std::move(row));
    h.b.push_back(Rat(1));
    h.row_labels.push_back("Q" + event_set_label(mask).substr(1) + "<=1");
  }
  for (int v = 0; v < g.n; ++v) {
    std::vector<Rat> row(g.n, Rat(0));
    row[v] = -1;
    h.a.push_back(std::move(row));
    h.b.push_back(Rat(0));
    h.row_labels.push_back("0<=p" + std::to_string(v));
  }
  return h;
}

QuantifierReport exclusivity_distance(const ExclusivityScenario& sc, const std::vector<Rat>& p,
                                      PNorm norm) {
  validate_event_probabilities(sc, p);
  auto hull = stab_vertices(sc.g);
  std::string name = std::string("exclusivity_distance_") +
                     (norm == PNorm::One ? "l1" : norm == PNorm::Two ? "l2" : "linf");

  auto member = membership_in_vpolytope(p, hull);
  if (member.inside) return member_zero(std::move(name), member, p);

  QuantifierReport r;
  r.name = std::move(name);
  if (norm == PNorm::Two) {
    auto hm = qp_distance(to_doubles(p), hull);
    r.raw = hm.value;
    r.value = hm.value / sc.g.n;
    r.gap = hm.certificate_gap;
    r.iterations = hm.iterations;
    r.nearest = hm.point;
    r.weights.reserve(hm.weights.size());
    for (double w : hm.weights) r.weights.push_back(Rat(w));
    return r;
  }
  auto hd = lp_distance(p, hull, norm == PNorm::One ? BlockNorm::L1 : BlockNorm::LInf);
  r.exact = true;
  r.exact_raw = hd.distance;
  r.exact_value = hd.distance / sc.g.n;
  r.raw = to_double(r.exact_raw);
  r.value = to_double(r.exact_value);
  r.weights = hd.weights;
  r.nearest = to_doubles(hd.nearest);
  return r;
}

QuantifierReport exclusivity_fraction(const ExclusivityScenario& sc, const std::vector<Rat>& p) {
  validate_event_probabilities(sc, p);
  auto hull = stab_vertices(sc.g);
  size_t nverts = hull.vertices.size();
  size_t n = static_cast<size_t>(sc.g.n);

  // split p into a stable-set mixture of mass mu and a residual that must
  // itself remain a valid event-probability vector of mass 1 - mu; without
  // the residual's validity rows the empty-set column makes mass free
  LPProblem<Rat> lp;
  for (size_t k = 0; k < nverts; ++k) lp.add_var(Rat(0));
  for (size_t i = 0; i < n; ++i) lp.add_var(Rat(0));
  int mu = lp.add_var(Rat(-1));

  for (size_t i = 0; i < n; ++i) {
    std::vector<Rat> row(lp.c.size(), Rat(0));
    for (size_t k = 0; k < nverts; ++k) row[k] = hull.vertices[k][i];
    row[nverts + i] = 1;
    lp.add_row(std::move(row), Rel::EQ, p[i]);
  }
  {
    std::vector<Rat> row(lp.c.size(), Rat(0));
    for (size_t k = 0; k < nverts; ++k) row[k] = 1;
    row[mu] = -1;
    lp.add_row(std::move(row), Rel::EQ, Rat(0));
  }
  for (size_t i = 0; i < n; ++i) {
    std::vector<Rat> row(lp.c.size(), Rat(0));
    row[nverts + i] = 1;
    row[mu] = 1;
    lp.add_row(std::move(row), Rel::LE, Rat(1));
  }
  for (auto [i, j] : sc.g.edges) {
    std::vector<Rat> row(lp.c.size(), Rat(0));
    row[nverts + i] = 1;
    row[nverts + j] = 1;
    row[mu] = 1;
    lp.add_row(std::move(row), Rel::LE, Rat(1));
  }

  auto sol = solve_lp(lp);
  if (sol.status != LPStatus::Optimal)
    throw std::runtime_error("exclusivity fraction LP did not solve");

  Rat mass = sol.x[mu];
  QuantifierReport r;
  r.name = "exclusivity_fraction";
  r.exact = true;
  r.exact_value = 1 - mass;
  r.exact_raw = r.exact_value;
  r.value = r.raw = to_double(r.exact_value);
  r.classical = mass == 1;
  r.weights.assign(sol.x.begin(), sol.x.begin() + nverts);
  if (mass > 0) {
    std::vector<Rat> nearest(n, Rat(0));
    for (size_t k = 0; k < nverts; ++k)
      for (size_t i = 0; i < n; ++i) nearest[i] += sol.x[k] * hull.vertices[k][i];
    for (Rat& q : nearest) q /= mass;
    r.nearest = to_doubles(nearest);
  }
  return r;
}

QuantifierReport exclusivity_robustness(const ExclusivityScenario& sc,
                                        const std::vector<Rat>& p) {
  validate_event_probabilities(sc, p);
  auto hull = stab_vertices(sc.g);
  size_t nverts = hull.vertices.size();
  size_t n = static_cast<size_t>(sc.g.n);

  // p + (noise mixture of mass m) = (stable mixture of mass 1 + m); the
  // stable-set vertices are unnormalized in mass, so the total-mass row is
  // what pins the convex scaling
  LPProblem<Rat> lp;
  for (size_t k = 0; k < nverts; ++k) lp.add_var(Rat(0));
  for (size_t k = 0; k < nverts; ++k) lp.add_var(Rat(1));

  for (size_t i = 0; i < n; ++i) {
    std::vector<Rat> row(lp.c.size(), Rat(0));
    for (size_t k = 0; k < nverts; ++k) {
      row[k] = hull.vertices[k][i];
      row[nverts + k] = -hull.vertices[k][i];
    }
    lp.add_row(std::move(row), Rel::EQ, p[i]);
  }
  {
    std::vector<Rat> row(lp.c.size(), Rat(0));
    for (size_t k = 0; k < nverts; ++k) {
      row[k] = 1;
      row[nverts + k] = -1;
    }
    lp.add_row(std::move(row), Rel::EQ, Rat(1));
  }

  auto sol = solve_lp(lp);
  if (sol.status != LPStatus::Optimal)
    throw std::runtime_error("exclusivity robustness LP did not solve");

  Rat mass = sol.objective;
  QuantifierReport r;
  r.name = "exclusivity_robustness";
  r.exact = true;
  r.exact_value = mass;
  r.exact_raw = mass;
  r.value = r.raw = to_double(mass);
  r.classical = mass == 0;
  r.weights.assign(sol.x.begin() + nverts, sol.x.end());
  std::vector<Rat> nearest(p);
  for (size_t k = 0; k < nverts; ++k)
    for (size_t i = 0; i < n; ++i) nearest[i] += sol.x[nverts + k] * hull.vertices[k][i];
  for (Rat& q : nearest) q /= 1 + mass;
  r.nearest = to_doubles(nearest);
  return r;
}

std::vector<Rat> relabel_events(const ExclusivityScenario& sc, const std::vector<Rat>& p,
                                const std::vector<int>& phi) {
  validate_event_probabilities(sc, p);
  int n = sc.g.n;
  if (phi.size() != static_cast<size_t>(n))
    throw std::invalid_argument("relabel_events: expected a permutation of " +
                                std::to_string(n) + " vertices");
  std::vector<char> hit(n, 0);
  for (int v : phi) {
    if (v < 0 || v >= n || hit[v])
      throw std::invalid_argument("relabel_events: not a permutation");
    hit[v] = 1;
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (sc.g.has_edge(i, j) != sc.g.has_edge(phi[i], phi[j]))
        throw std::domain_error("relabel_events: map does not preserve exclusivity between " +
                                std::to_string(i) + " and " + std::to_string(j));

  std::vector<Rat> out(n);
  for (int i = 0; i < n; ++i) out[i] = p[phi[i]];
  return out;
}

ExclusivityBounds exclusivity_bounds(const Graph& g, const std::vector<Rat>& weights) {
  ExclusivityBounds out;
  out.alpha = independence_number(g, weights);
  out.alpha_star = fractional_packing(g, weights);
  std::vector<double> dw;
  if (!weights.empty()) dw = to_doubles(weights);
  out.theta = lovasz_theta(g, dw);

  constexpr double slack = 1e-7;
  if (out.alpha.value > out.alpha_star.value)
    throw std::runtime_error("exclusivity_bounds: independence number " +
                             rational_to_string(out.alpha.value) + " exceeds packing value " +
                             rational_to_string(out.alpha_star.value));
  if (to_double(out.alpha.value) > out.theta.upper + slack)
    throw std::runtime_error("exclusivity_bounds: independence number exceeds the theta "
                             "certificate upper bound");
  if (out.theta.lower > to_double(out.alpha_star.value) + slack)
    throw std::runtime_error("exclusivity_bounds: theta certificate lower bound exceeds the "
                             "packing value");
  return out;
}

NcycleExclusivityReport ncycle_exclusivity_report(int n) {
  if (n < 5 || n % 2 == 0)
    throw std::domain_error("ncycle_exclusivity_report: need an odd cycle length >= 5, got " +
                            std::to_string(n));
  Graph g = Graph::cycle(n);
  NcycleExclusivityReport rep;
  rep.n = n;
  auto bounds = exclusivity_bounds(g);
  rep.alpha = std::move(bounds.alpha);
  rep.theta = std::move(bounds.theta);
  rep.alpha_star = std::move(bounds.alpha_star);

  rep.classical_bound = Rat(n - 1) / 2;
  double c = std::cos(M_PI / n);
  rep.quantum_bound = n * c / (1 + c);
  rep.eprinciple_bound = Rat(n) / 2;

  constexpr double tol = 1e-5;
  rep.agreement_ok =
      std::abs(to_double(rep.alpha.value) - to_double(rep.classical_bound)) <= tol &&
      std::abs(rep.theta.value - rep.quantum_bound) <= tol &&
      std::abs(to_double(rep.alpha_star.value) - to_double(rep.eprinciple_bound)) <= tol;

  // largest violation over each theory's set, spread per norm by the dual
  // scaling: divide by n^(1/q) with 1/p + 1/q = 1
  auto rows = [n](double gap) {
    NcycleDistanceRow l1{gap, gap / n};
    NcycleDistanceRow l2{gap / std::sqrt(double(n)), gap / std::sqrt(double(n)) / n};
    NcycleDistanceRow linf{gap / n, gap / n / n};
    return std::array<NcycleDistanceRow, 3>{l1, l2, linf};
  };
  double qgap = rep.quantum_bound - to_double(rep.classical_bound);
  auto q = rows(qgap);
  rep.quantum_l1 = q[0];
  rep.quantum_l2 = q[1];
  rep.quantum_linf = q[2];
  auto e = rows(0.5);
  rep.eprinciple_l1 = e[0];
  rep.eprinciple_l2 = e[1];
  rep.eprinciple_linf = e[2];
  return rep;
}

EightEventExample eight_event_example() {
  // vertices 3..7 are pairwise exclusive, so the first row is a clique
  // inequality; the second is tight on stable sets like {1,3}
  Graph g = Graph::from_edges(8, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 5},
                                  {2, 3}, {2, 5}, {2, 6}, {3, 4}, {3, 5}, {3, 6},
                                  {3, 7}, {4, 5}, {4, 6}, {4, 7}, {5, 6}, {5, 7},
                                  {6, 7}});
  EightEventExample ex;
  ex.scenario = ExclusivityScenario::make(std::move(g));
  ex.p.assign(8, Rat(1) / 3);

  ex.rows.dim = 8;
  for (int v = 0; v < 8; ++v) ex.rows.coord_labels.push_back("p" + std::to_string(v));
  ex.rows.a.push_back({Rat(0), Rat(0), Rat(0), Rat(1), Rat(1), Rat(1), Rat(1), Rat(1)});
  ex.rows.b.push_back(Rat(1));
  ex.rows.row_labels.push_back("p3+p4+p5+p6+p7<=1");
  ex.rows.a.push_back({Rat(2), Rat(1), Rat(2), Rat(2), Rat(1), Rat(1), Rat(1), Rat(1)});
  ex.rows.b.push_back(Rat(3));
  ex.rows.row_labels.push_back("2p0+p1+2p2+2p3+p4+p5+p6+p7<=3");
  return ex;
}

}  // namespace ctxq
