#pragma once

#include <string>
#include <vector>

#include "ctxq/graph.hpp"
#include "ctxq/rational.hpp"
#include "ctxq/scenario.hpp"

namespace ctxq {

struct VPolytope {
  int dim = 0;
  std::vector<std::string> coord_labels;
  std::vector<std::vector<Rat>> vertices;
  std::vector<std::string> vertex_labels;  // parallel to vertices; may be empty
};

// Inequality system a·x <= b, one row per constraint.
struct HPolytope {
  int dim = 0;
  std::vector<std::string> coord_labels;
  std::vector<std::vector<Rat>> a;
  std::vector<Rat> b;
  std::vector<std::string> row_labels;
};

bool hpolytope_contains(const HPolytope& h, const std::vector<Rat>& x);

// Marginal coordinates of a two-outcome behavior on the contexts of g:
// q_i = p_i(outcome 1) for each vertex, then q_ij = p_ij(1,1) for each edge
// in canonical edge order. Throws domain_error if b disturbs (the q_i would
// depend on the context used to read them off).
std::vector<Rat> marginal_coordinates(const Graph& g, const Behavior& b,
                                      const Rat& tol = Rat(0));
Behavior behavior_from_marginal_coordinates(const Graph& g, const std::vector<Rat>& q);

// Expectation coordinates over the edges of g.suspension(): for a real edge
// (i,j), x_ij = 1 - 2q_i - 2q_j + 4q_ij; for an apex edge (i, n),
// x_i = 1 - 2q_i. Both maps are affine bijections.
std::vector<Rat> expectation_coordinates(const Graph& g, const std::vector<Rat>& q);
std::vector<Rat> marginal_from_expectation(const Graph& g, const std::vector<Rat>& x);

// +-1 <-> 01 switch, per coordinate: y = (1-x)/2 and x = 1-2y.
std::vector<Rat> signs_to_cuts(const std::vector<Rat>& x);
std::vector<Rat> cuts_to_signs(const std::vector<Rat>& y);

// Drops the apex-edge block of a suspension-edge vector, keeping the entries
// over the edges of g in canonical order.
std::vector<Rat> drop_apex_block(const Graph& g, const std::vector<Rat>& x);

// Hull of the subset indicator vectors (q_i = [i in S], q_ij = [i,j in S]),
// one vertex per S in increasing-bitmask order.
VPolytope correlation_polytope(const Graph& g, size_t cap = size_t(1) << 16);

// Hull of edge sign vectors x_ij = c_i c_j over vertex labelings c, or of
// their 01 counterparts y_ij = [c_i != c_j]. Deduplicated (c and -c induce
// the same vector).
VPolytope cut_polytope_pm1(const Graph& g, size_t cap = size_t(1) << 16);
VPolytope cut_polytope_01(const Graph& g, size_t cap = size_t(1) << 16);

// Facet system of the metric polytope of g: odd-subset rows over each
// chordless cycle, plus both box bounds for edges lying in no triangle.
HPolytope met_hrep(const Graph& g);

// Rooted correlation constraints in marginal coordinates: the four
// nonnegativity rows of each edge's outcome table.
HPolytope rcmet_hrep(const Graph& g);

// Image of rcmet under the expectation map: four rows per edge of g over
// suspension-edge coordinates (apex index = g.n).
HPolytope rmet_hrep(const Graph& g);

// True iff the cycle-inequality system is an exact description of the cut
// polytope of g (no K_5 minor).
bool cut_equals_met_guard(const Graph& g);

// The 2^{n-1} odd-sign rows a.x <= n-2 over the edges of the n-cycle.
HPolytope ncycle_facets_pm1(int n);

struct ElliptopeCheck {
  bool inside = false;
  double margin = 0;  // largest row violation; <= eps when inside
  std::string worst_row;
};

// Tests z in [-1,1]^E for membership in the elliptope of g by mapping
// arccos(z)/pi into the metric polytope. Only valid without K_4 minors
// (domain_error otherwise).
ElliptopeCheck elliptope_membership_k4free(const Graph& g, const std::vector<double>& z,
                                           double eps = 1e-9);

// Boundary point of the elliptope of an odd cycle whose path edges carry
// cos(pi/n) and whose wrap edge carries -cos(pi/n).
std::vector<double> elliptope_extremal_point(int n);

}  // namespace ctxq
