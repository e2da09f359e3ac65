#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <vector>

#include "ctxq/exclusivity.hpp"
#include "ctxq/graph.hpp"
#include "ctxq/hull.hpp"
#include "ctxq/polytope.hpp"
#include "ctxq/rational.hpp"
#include "doctest.h"

using namespace ctxq;

namespace {

// Exhaustive stable-set count for graphs small enough to try every subset.
int brute_stable_count(const Graph& g) {
  REQUIRE(g.n <= 16);
  int count = 0;
  for (unsigned mask = 0; mask < (1u << g.n); ++mask) {
    bool ok = true;
    for (auto [i, j] : g.edges)
      if ((mask >> i & 1) && (mask >> j & 1)) {
        ok = false;
        break;
      }
    if (ok) ++count;
  }
  return count;
}

Graph random_graph(RatSampler& rng, int n, int den) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.integer(den) == 0) edges.emplace_back(i, j);
  return Graph::from_edges(n, std::move(edges));
}

bool is_stable_indicator(const Graph& g, const std::vector<Rat>& v) {
  for (const Rat& x : v)
    if (x != 0 && x != 1) return false;
  for (auto [i, j] : g.edges)
    if (v[i] == 1 && v[j] == 1) return false;
  return true;
}

Rat dot(const std::vector<Rat>& a, const std::vector<Rat>& b) {
  REQUIRE(a.size() == b.size());
  Rat s(0);
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Convex combination of hull vertices with the given weights, scaled back to
// unit mass. Rebuilds the solver's nearest point exactly.
std::vector<Rat> combine(const VPolytope& hull, const std::vector<Rat>& w) {
  REQUIRE(w.size() == hull.vertices.size());
  Rat mass(0);
  std::vector<Rat> out(hull.dim, Rat(0));
  for (size_t k = 0; k < w.size(); ++k) {
    mass += w[k];
    for (int i = 0; i < hull.dim; ++i) out[i] += w[k] * hull.vertices[k][i];
  }
  REQUIRE(mass > 0);
  for (Rat& x : out) x /= mass;
  return out;
}

ExclusivityScenario c5() { return ExclusivityScenario::make(Graph::cycle(5)); }

std::vector<Rat> uniform_half(int n) { return std::vector<Rat>(n, Rat(1) / 2); }

}  // namespace

TEST_CASE("stable set vertices of small graphs") {
  auto pent = stab_vertices(Graph::cycle(5));
  CHECK(pent.vertices.size() == 11);  // empty, 5 singletons, 5 nonadjacent pairs
  CHECK(pent.dim == 5);
  CHECK(pent.coord_labels[0] == "p0");
  CHECK(pent.coord_labels[4] == "p4");
  CHECK(pent.vertex_labels[0] == "S{}");

  CHECK(stab_vertices(Graph::complete(3)).vertices.size() == 4);

  auto cube = stab_vertices(Graph::from_edges(3, {}));
  CHECK(cube.vertices.size() == 8);
  // increasing-bitmask order over {0,1,2}
  CHECK(cube.vertex_labels[3] == "S{0,1}");
  CHECK(cube.vertex_labels[7] == "S{0,1,2}");
  CHECK(cube.vertices[3] == std::vector<Rat>{Rat(1), Rat(1), Rat(0)});

  CHECK_THROWS_AS(stab_vertices(Graph::path(31)), std::length_error);
}

TEST_CASE("stable set enumeration matches subset search") {
  RatSampler rng(808);
  for (int rep = 0; rep < 12; ++rep) {
    int n = 4 + static_cast<int>(rng.integer(9));
    Graph g = random_graph(rng, n, 2 + static_cast<int>(rng.integer(3)));
    auto verts = stab_vertices(g);
    CHECK(static_cast<int>(verts.vertices.size()) == brute_stable_count(g));
    for (const auto& v : verts.vertices) CHECK(is_stable_indicator(g, v));
    auto sorted = verts.vertices;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
  }
}

TEST_CASE("clique inequalities of the fractional relaxation") {
  auto q5 = qstab_hrep(Graph::cycle(5));
  CHECK(q5.a.size() == 10);  // 5 edge cliques + 5 positivity rows
  CHECK(hpolytope_contains(q5, uniform_half(5)));

  auto qk3 = qstab_hrep(Graph::complete(3));
  CHECK(qk3.a.size() == 4);
  CHECK_FALSE(hpolytope_contains(qk3, uniform_half(3)));

  SUBCASE("every stable set vertex satisfies the relaxation") {
    for (const Graph& g : {Graph::cycle(5), Graph::cycle(7), Graph::moebius_ladder(8),
                           Graph::prism(4), Graph::complete(4)}) {
      auto h = qstab_hrep(g);
      for (const auto& v : stab_vertices(g).vertices) CHECK(hpolytope_contains(h, v));
    }
  }
}

TEST_CASE("event probability validation") {
  auto sc = c5();
  CHECK_THROWS_AS(validate_event_probabilities(sc, uniform_half(4)), std::invalid_argument);
  CHECK_THROWS_AS(validate_event_probabilities(
                      sc, {Rat(-1, 10), Rat(0), Rat(0), Rat(0), Rat(0)}),
                  std::domain_error);
  // adjacent events may not overflow their pair
  CHECK_THROWS_AS(validate_event_probabilities(
                      sc, {Rat(3, 5), Rat(3, 5), Rat(0), Rat(0), Rat(0)}),
                  std::domain_error);
  CHECK_NOTHROW(validate_event_probabilities(sc, uniform_half(5)));

  CHECK_THROWS_AS(ExclusivityScenario::make(Graph::cycle(5), {"a", "b"}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ExclusivityScenario::make(Graph::path(2), {"a", "a"}),
                  std::invalid_argument);
}

TEST_CASE("distance to the stable set polytope") {
  auto sc = c5();
  auto hull = stab_vertices(sc.g);

  SUBCASE("stable set indicators sit inside") {
    std::vector<Rat> ind{Rat(1), Rat(0), Rat(1), Rat(0), Rat(0)};
    for (PNorm norm : {PNorm::One, PNorm::Two, PNorm::Inf}) {
      auto r = exclusivity_distance(sc, ind, norm);
      CHECK(r.classical);
      CHECK(r.exact);
      CHECK(r.exact_value == 0);
      CHECK(r.value == 0);
      CHECK(combine(hull, r.weights) == ind);
    }
    CHECK(exclusivity_distance(sc, ind, PNorm::One).name == "exclusivity_distance_l1");
  }

  SUBCASE("uniform halves sit half a unit of probability outside") {
    auto u = uniform_half(5);
    auto l1 = exclusivity_distance(sc, u, PNorm::One);
    CHECK(l1.exact);
    CHECK_FALSE(l1.classical);
    CHECK(l1.exact_raw == Rat(1, 2));
    CHECK(l1.exact_value == Rat(1, 10));
    auto near = combine(hull, l1.weights);
    Rat moved(0);
    for (int i = 0; i < 5; ++i) moved += rat_abs(near[i] - u[i]);
    CHECK(moved == Rat(1, 2));

    auto linf = exclusivity_distance(sc, u, PNorm::Inf);
    CHECK(linf.exact_raw == Rat(1, 10));
    CHECK(linf.exact_value == Rat(1, 50));

    auto l2 = exclusivity_distance(sc, u, PNorm::Two);
    CHECK(l2.raw == doctest::Approx(0.5 / std::sqrt(5.0)).epsilon(1e-6));
    CHECK(l2.value == doctest::Approx(l2.raw / 5).epsilon(1e-12));
    CHECK(l2.gap <= 1e-8);
  }
}

TEST_CASE("fraction of event probabilities explainable by stable sets") {
  auto sc = c5();
  auto hull = stab_vertices(sc.g);

  auto top = exclusivity_fraction(sc, uniform_half(5));
  CHECK(top.exact);
  CHECK(top.exact_value == 1);  // nothing survives: no subnormalized part fits
  CHECK_FALSE(top.classical);
  CHECK(top.name == "exclusivity_fraction");

  std::vector<Rat> ind{Rat(0), Rat(1), Rat(0), Rat(1), Rat(0)};
  auto zero = exclusivity_fraction(sc, ind);
  CHECK(zero.exact_value == 0);
  CHECK(zero.classical);
  CHECK(combine(hull, zero.weights) == ind);

  SUBCASE("convex mixing caps the fraction") {
    std::vector<Rat> mix(5);
    std::vector<Rat> stable{Rat(1), Rat(0), Rat(1), Rat(0), Rat(0)};
    for (int i = 0; i < 5; ++i) mix[i] = Rat(3, 10) * Rat(1, 2) + Rat(7, 10) * stable[i];
    auto r = exclusivity_fraction(sc, mix);
    CHECK(r.exact_value > 0);
    CHECK(r.exact_value <= Rat(3, 10));
    // the residual certificate: weights sum to the explained mass
    Rat mass(0);
    for (const Rat& w : r.weights) mass += w;
    CHECK(mass == 1 - r.exact_value);
    CHECK(membership_in_vpolytope(combine(hull, r.weights), hull).inside);
  }
}

TEST_CASE("stable noise needed to wash out event probabilities") {
  auto sc = c5();
  auto hull = stab_vertices(sc.g);

  auto r = exclusivity_robustness(sc, uniform_half(5));
  CHECK(r.exact);
  CHECK(r.exact_value == Rat(1, 4));
  CHECK_FALSE(r.classical);
  Rat mass(0);
  for (const Rat& w : r.weights) mass += w;
  CHECK(mass == Rat(1, 4));
  // mixing the witness noise back in lands exactly on the hull
  std::vector<Rat> mixed(5);
  for (int i = 0; i < 5; ++i) {
    Rat noise(0);
    for (size_t k = 0; k < r.weights.size(); ++k)
      noise += r.weights[k] * hull.vertices[k][i];
    mixed[i] = (Rat(1, 2) + noise) / (1 + r.exact_value);
  }
  CHECK(membership_in_vpolytope(mixed, hull).inside);

  std::vector<Rat> ind{Rat(1), Rat(0), Rat(0), Rat(1), Rat(0)};
  auto zero = exclusivity_robustness(sc, ind);
  CHECK(zero.exact_value == 0);
  CHECK(zero.classical);
}

TEST_CASE("relabeling events along graph symmetries") {
  auto sc = c5();
  std::vector<int> rot{1, 2, 3, 4, 0};

  CHECK(relabel_events(sc, uniform_half(5), rot) == uniform_half(5));

  std::vector<Rat> p{Rat(1, 2), Rat(1, 2), Rat(1, 2), Rat(1, 2), Rat(2, 5)};
  auto q = relabel_events(sc, p, rot);
  CHECK(q == std::vector<Rat>{Rat(1, 2), Rat(1, 2), Rat(1, 2), Rat(2, 5), Rat(1, 2)});
  CHECK(exclusivity_fraction(sc, p).exact_value == exclusivity_fraction(sc, q).exact_value);
  CHECK(exclusivity_distance(sc, p, PNorm::One).exact_raw ==
        exclusivity_distance(sc, q, PNorm::One).exact_raw);
  CHECK(exclusivity_robustness(sc, p).exact_value ==
        exclusivity_robustness(sc, q).exact_value);

  auto path = ExclusivityScenario::make(Graph::path(3));
  CHECK_THROWS_AS(relabel_events(path, uniform_half(3), {1, 0, 2}), std::domain_error);
  CHECK_THROWS_AS(relabel_events(path, uniform_half(3), {0, 0, 2}), std::invalid_argument);
  CHECK_THROWS_AS(relabel_events(path, uniform_half(3), {0, 1}), std::invalid_argument);
}

TEST_CASE("independence theta and packing move in order") {
  auto pent = exclusivity_bounds(Graph::cycle(5));
  CHECK(pent.alpha.value == 2);
  CHECK(std::abs(pent.theta.value - std::sqrt(5.0)) <= 1e-5);
  CHECK(pent.alpha_star.value == Rat(5, 2));

  auto pr = exclusivity_bounds(Graph::prism(5));
  CHECK(pr.alpha.value == 4);
  CHECK(std::abs(pr.theta.value - 2 * std::sqrt(5.0)) <= 1e-4);
  CHECK(pr.alpha_star.value == 5);

  auto mo = exclusivity_bounds(Graph::moebius_ladder(8));
  CHECK(mo.alpha.value == 3);
  CHECK(std::abs(mo.theta.value - (2 + std::sqrt(2.0))) <= 1e-4);
  CHECK(mo.alpha_star.value == 4);

  SUBCASE("sandwich holds across a spread of graphs") {
    for (const Graph& g : {Graph::cycle(5), Graph::cycle(7), Graph::cycle(9),
                           Graph::prism(5), Graph::moebius_ladder(8), Graph::complete(6)}) {
      auto b = exclusivity_bounds(g);
      CHECK(to_double(b.alpha.value) <= b.theta.upper + 1e-7);
      CHECK(b.theta.lower <= to_double(b.alpha_star.value) + 1e-7);
      CHECK(b.alpha.value <= b.alpha_star.value);
    }
  }

  SUBCASE("vertex weights pinch the sandwich shut") {
    // weights (1,1,1,1,2) on the pentagon: a stable pair through the heavy
    // vertex and the half-unit packing both reach 3, forcing theta onto it
    std::vector<Rat> w{Rat(1), Rat(1), Rat(1), Rat(1), Rat(2)};
    auto b = exclusivity_bounds(Graph::cycle(5), w);
    CHECK(b.alpha.value == 3);
    CHECK(b.alpha_star.value == 3);
    CHECK(std::abs(b.theta.value - 3.0) <= 1e-4);
  }
}

TEST_CASE("odd cycle summary") {
  auto rep = ncycle_exclusivity_report(5);
  CHECK(rep.n == 5);
  CHECK(rep.classical_bound == 2);
  CHECK(rep.eprinciple_bound == Rat(5, 2));
  CHECK(rep.quantum_bound == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
  CHECK(rep.alpha.value == 2);
  CHECK(rep.alpha_star.value == Rat(5, 2));
  CHECK(rep.agreement_ok);

  double qgap = std::sqrt(5.0) - 2;
  CHECK(rep.quantum_l1.raw == doctest::Approx(qgap).epsilon(1e-9));
  CHECK(rep.quantum_l1.value == doctest::Approx(qgap / 5).epsilon(1e-9));
  CHECK(rep.quantum_l2.raw == doctest::Approx(qgap / std::sqrt(5.0)).epsilon(1e-9));
  CHECK(rep.quantum_linf.raw == doctest::Approx(qgap / 5).epsilon(1e-9));
  CHECK(rep.eprinciple_l1.raw == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rep.eprinciple_l2.raw == doctest::Approx(0.5 / std::sqrt(5.0)).epsilon(1e-12));
  CHECK(rep.eprinciple_linf.raw == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(rep.eprinciple_linf.value == doctest::Approx(0.02).epsilon(1e-12));

  auto sept = ncycle_exclusivity_report(7);
  double c = std::cos(M_PI / 7);
  CHECK(sept.classical_bound == 3);
  CHECK(sept.eprinciple_bound == Rat(7, 2));
  CHECK(std::abs(sept.theta.value - 7 * c / (1 + c)) <= 1e-5);
  CHECK(sept.agreement_ok);

  CHECK(ncycle_exclusivity_report(9).agreement_ok);

  CHECK_THROWS_AS(ncycle_exclusivity_report(3), std::domain_error);
  CHECK_THROWS_AS(ncycle_exclusivity_report(4), std::domain_error);
  CHECK_THROWS_AS(ncycle_exclusivity_report(6), std::domain_error);
}

TEST_CASE("odd cycles carry a single nontrivial facet") {
  for (int n : {5, 7}) {
    auto verts = stab_vertices(Graph::cycle(n));
    Rat best(0);
    for (const auto& v : verts.vertices) {
      Rat s(0);
      for (const Rat& x : v) s += x;
      if (s > best) best = s;
    }
    CHECK(best == Rat(n - 1) / 2);
  }
}

TEST_CASE("eight event example violates two facets at once") {
  auto ex = eight_event_example();
  CHECK(ex.scenario.g.n == 8);
  CHECK(ex.scenario.g.edges.size() == 19);
  CHECK_NOTHROW(validate_event_probabilities(ex.scenario, ex.p));
  REQUIRE(ex.rows.a.size() == 2);

  CHECK(dot(ex.rows.a[0], ex.p) == Rat(5, 3));
  CHECK(dot(ex.rows.a[1], ex.p) == Rat(11, 3));
  CHECK(dot(ex.rows.a[0], ex.p) > ex.rows.b[0]);
  CHECK(dot(ex.rows.a[1], ex.p) > ex.rows.b[1]);

  auto verts = stab_vertices(ex.scenario.g);
  Rat max0(0), max1(0);
  for (const auto& v : verts.vertices) {
    Rat v0 = dot(ex.rows.a[0], v), v1 = dot(ex.rows.a[1], v);
    CHECK(v0 <= ex.rows.b[0]);
    CHECK(v1 <= ex.rows.b[1]);
    max0 = std::max(Rat(max0), Rat(v0));
    max1 = std::max(Rat(max1), Rat(v1));
  }
  CHECK(max0 == ex.rows.b[0]);
  CHECK(max1 == ex.rows.b[1]);

  auto member = membership_in_vpolytope(ex.p, verts);
  CHECK_FALSE(member.inside);
  for (const auto& v : verts.vertices) CHECK(dot(member.separator_u, v) <= member.separator_t);
  CHECK(dot(member.separator_u, ex.p) > member.separator_t);

  // five pairwise-exclusive events push the uniform third past even the
  // clique relaxation
  CHECK_FALSE(hpolytope_contains(qstab_hrep(ex.scenario.g), ex.p));
  CHECK(exclusivity_fraction(ex.scenario, ex.p).exact_value > 0);
}

TEST_CASE("solver distances match the facet gap on random cycle vectors") {
  for (int n : {5, 7}) {
    RatSampler rng(n * 131);
    auto sc = ExclusivityScenario::make(Graph::cycle(n));
    int lo = n == 5 ? 42 : 45;
    int span = n == 5 ? 9 : 6;
    for (int rep = 0; rep < 50; ++rep) {
      std::vector<Rat> p(n);
      for (int i = 0; i < n; ++i)
        p[i] = Rat(lo + static_cast<long>(rng.integer(span))) / 100;
      Rat gap = -Rat(n - 1) / 2;
      for (const Rat& x : p) gap += x;
      REQUIRE(gap > 0);  // every sampled vector clears the classical bound

      CHECK(exclusivity_distance(sc, p, PNorm::One).exact_raw == gap);
      CHECK(exclusivity_distance(sc, p, PNorm::Inf).exact_raw == gap / n);
      auto l2 = exclusivity_distance(sc, p, PNorm::Two);
      CHECK(std::abs(l2.raw - to_double(gap) / std::sqrt(double(n))) <= 1e-6);
    }
  }
}
