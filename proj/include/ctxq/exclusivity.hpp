#pragma once

#include <string>
#include <vector>

#include "ctxq/graph.hpp"
#include "ctxq/graph_bounds.hpp"
#include "ctxq/polytope.hpp"
#include "ctxq/quantifiers.hpp"
#include "ctxq/rational.hpp"
#include "ctxq/theta.hpp"

namespace ctxq {

// Events are vertices; an edge means the two events are exclusive, so their
// probabilities may never sum past one.
struct ExclusivityScenario {
  Graph g;
  std::vector<std::string> event_labels;

  static ExclusivityScenario make(Graph g, std::vector<std::string> labels = {});
};

// Throws invalid_argument on a size mismatch, domain_error when an entry
// leaves [0,1] or an exclusive pair sums past one.
void validate_event_probabilities(const ExclusivityScenario& sc, const std::vector<Rat>& p);

// Hull of the independent-set indicator vectors of g (the empty set
// included), in increasing-bitmask order. Capped at 30 vertices.
VPolytope stab_vertices(const Graph& g);

// Rows sum_{i in Q} p_i <= 1 per maximal clique Q, then p_i >= 0 per vertex.
HPolytope qstab_hrep(const Graph& g);

// Norm distance from p to the stable-set hull: value carries the 1/|V|
// prefactor, raw does not. l1/linf run exact rational LPs, l2 runs the
// Frank-Wolfe quadratic path.
QuantifierReport exclusivity_distance(const ExclusivityScenario& sc, const std::vector<Rat>& p,
                                      PNorm norm);

// Largest mass mu achievable in a split p = (stab mixture of mass mu) +
// residual, the residual staying a valid event-probability vector of mass
// 1 - mu; reports 1 - mu*.
QuantifierReport exclusivity_fraction(const ExclusivityScenario& sc, const std::vector<Rat>& p);

// Least stab-mixture mass gamma with p + V gamma = V delta and
// total(delta) - total(gamma) = 1: noise-to-signal robustness against
// stable-set noise.
QuantifierReport exclusivity_robustness(const ExclusivityScenario& sc, const std::vector<Rat>& p);

// T_phi(p)_i = p_{phi(i)} for an automorphism phi of the event graph.
// invalid_argument when phi is no permutation of the vertices, domain_error
// when it fails to preserve the edge set.
std::vector<Rat> relabel_events(const ExclusivityScenario& sc, const std::vector<Rat>& p,
                                const std::vector<int>& phi);

// The classical / quantum / exclusivity-principle bound triple of a weighted
// sum over events: independence number, Lovasz number, fractional packing.
// The certified sandwich alpha <= theta <= alpha* is enforced; a violation
// past the theta certificates throws runtime_error.
struct ExclusivityBounds {
  IndependenceResult alpha;
  ThetaResult theta;
  PackingResult alpha_star;
};
ExclusivityBounds exclusivity_bounds(const Graph& g, const std::vector<Rat>& weights = {});

struct NcycleDistanceRow {
  double raw = 0;
  double value = 0;  // raw / n
};

// Solver invariants of an odd cycle next to their closed forms, plus the
// largest distances reachable within the quantum and exclusivity-principle
// sets per norm.
struct NcycleExclusivityReport {
  int n = 0;
  IndependenceResult alpha;
  ThetaResult theta;
  PackingResult alpha_star;
  Rat classical_bound{0};       // (n-1)/2
  double quantum_bound = 0;     // n cos(pi/n) / (1 + cos(pi/n))
  Rat eprinciple_bound{0};      // n/2
  bool agreement_ok = false;    // solvers match the closed forms within 1e-5
  NcycleDistanceRow quantum_l1, quantum_l2, quantum_linf;
  NcycleDistanceRow eprinciple_l1, eprinciple_l2, eprinciple_linf;
};
NcycleExclusivityReport ncycle_exclusivity_report(int n);

// An eight-event scenario whose uniform-1/3 vector breaks two stable-set
// facets at once (left-hand sides 5/3 over bound 1 and 11/3 over bound 3).
struct EightEventExample {
  ExclusivityScenario scenario;
  std::vector<Rat> p;
  HPolytope rows;
};
EightEventExample eight_event_example();

}  // namespace ctxq
