#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "ctxq/hull.hpp"
#include "ctxq/polytope.hpp"
#include "support.hpp"

using namespace ctxq;
using testsupport::pr_box;

namespace {

std::vector<Rat> pr_suspension_vector() {
  Graph g = Graph::cycle(4);
  return expectation_coordinates(g, marginal_coordinates(g, pr_box()));
}

VPolytope unit_square() {
  VPolytope p;
  p.dim = 2;
  p.coord_labels = {"x0", "x1"};
  p.vertices = {{Rat(0), Rat(0)}, {Rat(1), Rat(0)}, {Rat(0), Rat(1)}, {Rat(1), Rat(1)}};
  return p;
}

Rat eval_norm(const std::vector<Rat>& a, const std::vector<Rat>& b, BlockNorm norm) {
  Rat acc(0);
  for (size_t d = 0; d < a.size(); ++d) {
    Rat diff = rat_abs(Rat(a[d] - b[d]));
    if (norm == BlockNorm::L1)
      acc += diff;
    else
      acc = std::max(acc, diff);
  }
  return acc;
}

}  // namespace

TEST_CASE("membership with exact weight certificates") {
  auto cut = cut_polytope_pm1(Graph::cycle(4));

  for (size_t k = 0; k < cut.vertices.size(); ++k) {
    auto m = membership_in_vpolytope(cut.vertices[k], cut);
    REQUIRE(m.inside);
    Rat total(0);
    std::vector<Rat> rebuilt(cut.dim, Rat(0));
    for (size_t i = 0; i < m.weights.size(); ++i) {
      CHECK(m.weights[i] >= 0);
      total += m.weights[i];
      for (int d = 0; d < cut.dim; ++d) rebuilt[d] += m.weights[i] * cut.vertices[i][d];
    }
    CHECK(total == 1);
    CHECK(rebuilt == cut.vertices[k]);
  }

  // centroid
  std::vector<Rat> centroid(cut.dim, Rat(0));
  for (const auto& v : cut.vertices)
    for (int d = 0; d < cut.dim; ++d) centroid[d] += v[d] / int(cut.vertices.size());
  CHECK(membership_in_vpolytope(centroid, cut).inside);

  CHECK_THROWS_AS(membership_in_vpolytope({Rat(0)}, cut), std::invalid_argument);
  CHECK_THROWS_AS(membership_in_vpolytope({Rat(0)}, VPolytope{1, {"x"}, {}, {}}),
                  std::domain_error);
}

TEST_CASE("separating cut for the anticorrelated box") {
  Graph g = Graph::cycle(4);
  auto x = drop_apex_block(g, pr_suspension_vector());
  auto cut = cut_polytope_pm1(g);
  auto m = membership_in_vpolytope(x, cut);
  REQUIRE(!m.inside);

  Rat at_point(0);
  for (int d = 0; d < cut.dim; ++d) at_point += m.separator_u[d] * x[d];
  CHECK(at_point - m.separator_t == 2);  // the facet excess of this point
  for (const auto& v : cut.vertices) {
    Rat at_v(0);
    for (int d = 0; d < cut.dim; ++d) at_v += m.separator_u[d] * v[d];
    CHECK(at_v <= m.separator_t);
  }
}

TEST_CASE("cycle-row system and cut hull decide membership identically") {
  RatSampler rng(66771, 12);
  for (int n : {4, 5}) {
    Graph g = Graph::cycle(n);
    REQUIRE(cut_equals_met_guard(g));
    auto met = met_hrep(g);
    auto cut = cut_polytope_01(g);
    int inside_seen = 0;
    for (int rep = 0; rep < 250; ++rep) {
      std::vector<Rat> y;
      if (rep % 2 == 0) {
        for (int d = 0; d < met.dim; ++d) y.push_back(rng.range(Rat(-1, 4), Rat(5, 4)));
      } else {
        // convex mix of three hull vertices, guaranteed inside
        std::vector<Rat> w = {rng.unit() + Rat(1, 50), rng.unit() + Rat(1, 50),
                              rng.unit() + Rat(1, 50)};
        Rat tot = w[0] + w[1] + w[2];
        y.assign(met.dim, Rat(0));
        for (int pick = 0; pick < 3; ++pick) {
          const auto& v = cut.vertices[rng.integer(cut.vertices.size())];
          for (int d = 0; d < met.dim; ++d) y[d] += w[pick] / tot * v[d];
        }
      }
      bool via_rows = hpolytope_contains(met, y);
      bool via_hull = membership_in_vpolytope(y, cut).inside;
      CHECK(via_rows == via_hull);
      inside_seen += via_hull;
    }
    CHECK(inside_seen > 50);
    CHECK(inside_seen < 250);
  }
}

TEST_CASE("linear-program distances") {
  VPolytope segment{1, {"x"}, {{Rat(0)}, {Rat(1)}}, {}};
  auto d = lp_distance({Rat(2)}, segment, BlockNorm::L1);
  CHECK(d.distance == 1);
  CHECK(d.nearest == std::vector<Rat>{Rat(1)});

  auto cut = cut_polytope_pm1(Graph::cycle(4).suspension());
  auto x = pr_suspension_vector();

  // inside: distance 0 with the point itself as witness
  std::vector<Rat> centroid(cut.dim, Rat(0));
  for (const auto& v : cut.vertices)
    for (int d2 = 0; d2 < cut.dim; ++d2) centroid[d2] += v[d2] / int(cut.vertices.size());
  CHECK(lp_distance(centroid, cut, BlockNorm::L1).distance == 0);

  auto l1 = lp_distance(x, cut, BlockNorm::L1);
  CHECK(l1.distance == 2);
  CHECK(eval_norm(x, l1.nearest, BlockNorm::L1) == 2);

  auto linf = lp_distance(x, cut, BlockNorm::LInf);
  CHECK(linf.distance == Rat(1, 2));
  CHECK(eval_norm(x, linf.nearest, BlockNorm::LInf) == Rat(1, 2));

  Rat wsum(0);
  for (const Rat& w : l1.weights) {
    CHECK(w >= 0);
    wsum += w;
  }
  CHECK(wsum == 1);
}

TEST_CASE("blockwise distance aggregation") {
  VPolytope origin{4, {"a", "b", "c", "d"}, {{Rat(0), Rat(0), Rat(0), Rat(0)}}, {}};
  std::vector<Rat> pt = {Rat(1), Rat(2), Rat(3), Rat(4)};
  std::vector<std::pair<size_t, size_t>> blocks = {{0, 2}, {2, 4}};

  CHECK(lp_norm_distance(pt, origin, blocks, BlockNorm::L1, BlockAggregate::Sum).distance == 10);
  CHECK(lp_norm_distance(pt, origin, blocks, BlockNorm::L1, BlockAggregate::Max).distance == 7);
  CHECK(lp_norm_distance(pt, origin, blocks, BlockNorm::LInf, BlockAggregate::Sum).distance == 6);
  CHECK(lp_norm_distance(pt, origin, blocks, BlockNorm::LInf, BlockAggregate::Max).distance == 4);

  CHECK_THROWS_AS(
      lp_norm_distance(pt, origin, {{0, 2}}, BlockNorm::L1, BlockAggregate::Sum),
      std::invalid_argument);
  CHECK_THROWS_AS(
      lp_norm_distance(pt, origin, {{0, 2}, {1, 4}}, BlockNorm::L1, BlockAggregate::Sum),
      std::invalid_argument);
}

TEST_CASE("euclidean distance by Frank-Wolfe") {
  auto square = unit_square();
  CHECK(qp_distance({1.0, 1.0}, square).value == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(qp_distance({0.0, 0.0}, square).value == doctest::Approx(0.0).epsilon(1e-6));
  auto corner = qp_distance({2.0, 2.0}, square);
  CHECK(corner.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-7));
  CHECK(corner.point[0] == doctest::Approx(1.0).epsilon(1e-6));

  auto cut = cut_polytope_pm1(Graph::cycle(4).suspension());
  std::vector<double> x;
  for (const Rat& v : pr_suspension_vector()) x.push_back(to_double(v));
  auto res = qp_distance(x, cut);
  CHECK(res.value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(res.certificate_gap <= 1e-10);

  CHECK_THROWS_AS(qp_distance(x, cut, 1e-10, 1), std::runtime_error);
}

TEST_CASE("norms order the three distances") {
  auto cut = cut_polytope_pm1(Graph::cycle(4).suspension());
  RatSampler rng(424242, 16);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<Rat> pt;
    for (int d = 0; d < cut.dim; ++d) pt.push_back(rng.range(Rat(-3, 2), Rat(3, 2)));
    double l1 = to_double(lp_distance(pt, cut, BlockNorm::L1).distance);
    double linf = to_double(lp_distance(pt, cut, BlockNorm::LInf).distance);
    std::vector<double> ptd;
    for (const Rat& v : pt) ptd.push_back(to_double(v));
    double l2 = qp_distance(ptd, cut).value;
    CHECK(linf <= l2 + 1e-8);
    CHECK(l2 <= l1 + 1e-8);
  }
}

TEST_CASE("smooth convex minimization over a hull") {
  VPolytope segment{1, {"x"}, {{Rat(0)}, {Rat(1)}}, {}};
  HullObjective quartic;
  quartic.value = [](const std::vector<double>& x) {
    double d = x[0] - 0.3;
    return d * d * d * d;
  };
  quartic.gradient = [](const std::vector<double>& x) {
    double d = x[0] - 0.3;
    return std::vector<double>{4 * d * d * d};
  };
  auto res = minimize_convex_over_hull(quartic, segment);
  CHECK(res.value <= 1e-8);
  CHECK(std::abs(res.point[0] - 0.3) < 2e-2);
  CHECK(res.certificate_gap <= 1e-8);

  // weight vector comes back normalized over the two endpoints
  CHECK(res.weights.size() == 2);
  CHECK(res.weights[0] + res.weights[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("nonsmooth minimization needs the cutting-plane path") {
  // max(x, 1-x) has its kink exactly at the optimum
  VPolytope segment{1, {"x"}, {{Rat(0)}, {Rat(1)}}, {}};
  HullObjective ridge;
  ridge.smooth = false;
  ridge.value = [](const std::vector<double>& x) { return std::max(x[0], 1 - x[0]); };
  ridge.gradient = [](const std::vector<double>& x) {
    return std::vector<double>{x[0] >= 1 - x[0] ? 1.0 : -1.0};
  };
  auto res = minimize_convex_over_hull(ridge, segment);
  CHECK(res.value == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(res.certificate_gap <= 1e-8);

  HullObjective corner;
  corner.smooth = false;
  corner.value = [](const std::vector<double>& x) {
    return std::max(std::abs(x[0] - 0.25), std::abs(x[1] - 2.0 / 3));
  };
  corner.gradient = [](const std::vector<double>& x) {
    double a = std::abs(x[0] - 0.25), b = std::abs(x[1] - 2.0 / 3);
    std::vector<double> g(2, 0.0);
    if (a >= b)
      g[0] = x[0] >= 0.25 ? 1.0 : -1.0;
    else
      g[1] = x[1] >= 2.0 / 3 ? 1.0 : -1.0;
    return g;
  };
  auto res2 = minimize_convex_over_hull(corner, unit_square());
  CHECK(res2.value <= 1e-8);
  CHECK(std::abs(res2.point[0] - 0.25) <= 1e-7);
  CHECK(std::abs(res2.point[1] - 2.0 / 3) <= 1e-7);
}

TEST_CASE("minimax over a hull balances its parts") {
  VPolytope segment{1, {"x"}, {{Rat(0)}, {Rat(1)}}, {}};
  auto parabola = [](double center) {
    HullObjective f;
    f.value = [center](const std::vector<double>& x) {
      return (x[0] - center) * (x[0] - center);
    };
    f.gradient = [center](const std::vector<double>& x) {
      return std::vector<double>{2 * (x[0] - center)};
    };
    return f;
  };

  // opposing parabolas meet at x = 1/2 with value 1/4
  auto res = minimax_over_hull({parabola(0.0), parabola(1.0)}, segment, 1e-9);
  CHECK(res.value == doctest::Approx(0.25).epsilon(1e-7));
  CHECK(std::abs(res.point[0] - 0.5) <= 1e-4);
  CHECK(res.certificate_gap <= 1e-9);

  // a lone part falls through to the plain smooth minimization
  auto solo = minimax_over_hull({parabola(0.3)}, segment, 1e-9);
  CHECK(solo.value <= 1e-8);

  // one part dominates everywhere, so the optimum sits at a vertex
  auto skew = minimax_over_hull({parabola(0.0), parabola(2.0)}, segment, 1e-9);
  CHECK(skew.value == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(std::abs(skew.point[0] - 1.0) <= 1e-4);

  CHECK_THROWS_AS(minimax_over_hull({}, segment, 1e-9), std::invalid_argument);
}
