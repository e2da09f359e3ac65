#pragma once

#include <vector>

#include "ctxq/graph.hpp"

namespace ctxq {

struct ThetaResult {
  double value = 0;  // midpoint of the certified bracket
  double lower = 0;  // objective of a feasible primal matrix
  double upper = 0;  // largest eigenvalue of a dual-feasible candidate
  int iterations = 0;
};

// Vertex-weighted Lovasz number: maximize <B, X> with B = sqrt(w)sqrt(w)^T
// over PSD X with unit trace and X_ij = 0 on edges. Splitting iteration with
// over-relaxation; both bounds are certificates regardless of convergence.
// Empty weights mean all ones. Supports up to 32 vertices.
ThetaResult lovasz_theta(const Graph& g, const std::vector<double>& weights = {});

}  // namespace ctxq
