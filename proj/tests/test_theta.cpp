#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ctxq/theta.hpp"

using namespace ctxq;

namespace {

double odd_cycle_theta(int n) {
  double c = std::cos(std::numbers::pi / n);
  return n * c / (1 + c);
}

void check_theta(const Graph& g, double expected, const std::vector<double>& w = {}) {
  auto res = lovasz_theta(g, w);
  CHECK(res.value == doctest::Approx(expected).epsilon(1e-5));
  CHECK(res.lower <= expected + 1e-5);
  CHECK(res.upper >= expected - 1e-5);
  CHECK(res.upper - res.lower < 2e-5);
}

}  // namespace

TEST_CASE("odd cycles") {
  check_theta(Graph::cycle(5), std::sqrt(5.0));
  check_theta(Graph::cycle(5), odd_cycle_theta(5));  // same number both ways
  check_theta(Graph::cycle(7), odd_cycle_theta(7));
  check_theta(Graph::cycle(9), odd_cycle_theta(9));
}

TEST_CASE("perfect graphs hit their independence numbers") {
  check_theta(Graph::cycle(4), 2.0);
  check_theta(Graph::cycle(6), 3.0);
  check_theta(Graph::cycle(8), 4.0);
  check_theta(Graph::complete(3), 1.0);
  check_theta(Graph::complete(6), 1.0);
  check_theta(Graph::complete_bipartite(3, 3), 3.0);
  check_theta(Graph::path(4), 2.0);
}

TEST_CASE("edgeless graphs sum their weights") {
  check_theta(Graph::from_edges(4, {}), 4.0);
  check_theta(Graph::from_edges(3, {}), 10.0, {2.0, 3.0, 5.0});
}

TEST_CASE("circular ladders") {
  check_theta(Graph::prism(5), 2 * std::sqrt(5.0));
  check_theta(Graph::moebius_ladder(8), 2 + std::sqrt(2.0));
}

TEST_CASE("weights scale and select") {
  check_theta(Graph::complete(3), 7.0, {2.0, 3.0, 7.0});
  check_theta(Graph::cycle(5), 2 * std::sqrt(5.0), std::vector<double>(5, 2.0));
  // zeroing two adjacent vertices leaves a path of three
  check_theta(Graph::cycle(5), 2.0, {1.0, 1.0, 1.0, 0.0, 0.0});
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(lovasz_theta(Graph::cycle(5), {1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(lovasz_theta(Graph::cycle(5), {1.0, 1.0, 1.0, 1.0, -1.0}),
                  std::domain_error);
  Graph big = Graph::from_edges(33, {{0, 1}});
  CHECK_THROWS_AS(lovasz_theta(big), std::length_error);
}
