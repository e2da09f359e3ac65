#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "ctxq/polytope.hpp"
#include "ctxq/rational.hpp"

namespace ctxq {

struct Membership {
  bool inside = false;
  // inside: convex weights over the polytope's vertices reproducing the point
  std::vector<Rat> weights;
  // outside: u.v <= t for every vertex v while u.point > t
  std::vector<Rat> separator_u;
  Rat separator_t;
};

// Decides hull membership by exact feasibility LP; outside points get the
// deepest cut with coefficients in [-1,1].
Membership membership_in_vpolytope(const std::vector<Rat>& point, const VPolytope& p);

enum class BlockNorm { L1, LInf };
enum class BlockAggregate { Sum, Max };

struct HullDistance {
  Rat distance;
  std::vector<Rat> nearest;
  std::vector<Rat> weights;
};

// Exact minimum over the hull of an aggregate of per-block residual norms.
// blocks partition [0, dim); Sum adds the block norms, Max takes the largest.
HullDistance lp_norm_distance(const std::vector<Rat>& point, const VPolytope& p,
                              const std::vector<std::pair<size_t, size_t>>& blocks,
                              BlockNorm within, BlockAggregate aggregate);

// Same minimization with blocks given as explicit coordinate index lists.
// Blocks may overlap and need not cover every coordinate; uncovered
// coordinates do not contribute to the objective.
HullDistance lp_norm_distance_indexed(const std::vector<Rat>& point, const VPolytope& p,
                                      const std::vector<std::vector<size_t>>& blocks,
                                      BlockNorm within, BlockAggregate aggregate);

// Whole-vector l1 / linf distance.
HullDistance lp_distance(const std::vector<Rat>& point, const VPolytope& p, BlockNorm norm);

struct HullMinimum {
  double value = 0;
  double certificate_gap = 0;  // Frank-Wolfe gap or cutting-plane ub-lb at stop
  std::vector<double> weights;
  std::vector<double> point;
  int iterations = 0;
};

// Euclidean distance to the hull via away-step Frank-Wolfe on the squared
// residual. Throws runtime_error with the reached gap if the duality gap
// cannot be pushed below gap_tol within max_iter iterations.
HullMinimum qp_distance(const std::vector<double>& point, const VPolytope& p,
                        double gap_tol = 1e-10, int max_iter = 100000);

struct HullObjective {
  std::function<double(const std::vector<double>&)> value;
  std::function<std::vector<double>(const std::vector<double>&)> gradient;
  // smooth objectives run away-step Frank-Wolfe with its gap certificate;
  // nonsmooth ones (pointwise maxima) run cutting planes, where the gradient
  // callback may return any subgradient
  bool smooth = true;
};

// Minimizes a convex function of the ambient point over the hull. The
// certificate gap bounds the distance to the true minimum at the returned
// weights. warm, when given, supplies starting vertex weights.
HullMinimum minimize_convex_over_hull(const HullObjective& f, const VPolytope& p,
                                      double tol = 1e-8, int max_iter = 100000,
                                      const std::vector<double>* warm = nullptr);

// Minimizes max_i parts[i](x) over the hull for smooth convex parts. Solved
// as the saddle point of the weighted sum: an outer cutting-plane loop over
// the part-weight simplex drives inner Frank-Wolfe solves, so the master LP
// stays small no matter how many iterations the inner solves take. The
// certificate gap is primal value minus the best dual lower bound.
HullMinimum minimax_over_hull(const std::vector<HullObjective>& parts, const VPolytope& p,
                              double tol = 1e-8, int max_iter = 1000);

}  // namespace ctxq
