#pragma once

#include <vector>

#include "ctxq/graph.hpp"
#include "ctxq/rational.hpp"

namespace ctxq {

struct IndependenceResult {
  Rat value;
  std::vector<int> witness;  // an independent set attaining the value
};

// Exact weighted independence number by branch and bound with greedy
// clique-cover pruning. Empty weights mean all ones. Up to 40 vertices.
IndependenceResult independence_number(const Graph& g, const std::vector<Rat>& weights = {});

struct PackingResult {
  Rat value;
  std::vector<Rat> witness;  // an optimal p
};

// Exact solution of max w.p subject to p >= 0 and sum_{i in Q} p_i <= 1 over
// every maximal clique Q.
PackingResult fractional_packing(const Graph& g, const std::vector<Rat>& weights = {});

}  // namespace ctxq
