#pragma once

#include <string>
#include <vector>

#include "ctxq/graph.hpp"
#include "ctxq/rational.hpp"
#include "ctxq/scenario.hpp"

namespace ctxq {

enum class PNorm { One, Two, Inf };
// Full: norm of the whole flat vector. Uniform: mean of per-context norms.
// Max: worst per-context norm.
enum class DistanceVariant { Full, Uniform, Max };
enum class EntropicVariant { Uniform, Max };
// Coordinate description used by space_quantifier: marginal coordinates
// (q_i, q_ij) against the correlation polytope, expectation coordinates
// against the +-1 cut polytope of the suspension, or 01 cut coordinates
// against its 01 counterpart.
enum class CoordinateSpace { Marginal, Expectation, Cut };

struct QuantifierReport {
  std::string name;
  // headline value, including the prefactor the definition carries (1/N for
  // the uniform variants, 1/|E| for the space quantifiers)
  double value = 0;
  // the same quantity without that prefactor; equal to value when the
  // definition has none
  double raw = 0;
  bool exact = false;  // true when produced by exact rational programming
  Rat exact_value{0};
  Rat exact_raw{0};
  bool classical = false;
  // distribution over deterministic assignments backing the value, when the
  // solver produces one
  std::vector<Rat> weights;
  // optimal noncontextual point in the flat layout, when available
  std::vector<double> nearest;
  double gap = 0;
  long iterations = 0;
};

// Least lambda such that B splits as lambda B' + (1-lambda) B_nc with B_nc
// noncontextual; computed as 1 minus the largest subnormalized classical
// mass below B.
QuantifierReport contextual_fraction(const CompatibilityScenario& sc, const Behavior& b);

// Least amount of classical noise, measured relative to the behavior, whose
// admixture makes B noncontextual: the minimal total mass of the subtracted
// part over signed classical decompositions of B.
QuantifierReport robustness(const CompatibilityScenario& sc, const Behavior& b);

// Independent route to the same number: bisects the noise ratio, deciding
// each candidate with an exact feasibility LP.
Rat robustness_by_bisection(const CompatibilityScenario& sc, const Behavior& b,
                            const Rat& tol = Rat(1) / 10000000000L);

// Distance from B to the noncontextual set. l1 and linf run as exact LPs;
// l2 runs Frank-Wolfe (Full) or cutting planes (Uniform / Max) with a
// certified gap.
QuantifierReport distance_quantifier(const CompatibilityScenario& sc, const Behavior& b,
                                     PNorm norm, DistanceVariant variant);

// Relative entropy (base 2) from B to the noncontextual set, averaged over
// contexts (Uniform) or at the worst context (Max).
QuantifierReport entropic_quantifier(const CompatibilityScenario& sc, const Behavior& b,
                                     EntropicVariant variant, double tol = 1e-8);

// Distance quantifiers for a two-outcome pairwise scenario computed in one of
// its coordinate descriptions; `point` lives in that coordinate system. The
// per-edge blocks are the triples (vertex i, vertex j, edge ij).
QuantifierReport space_quantifier(const Graph& g, const std::vector<Rat>& point,
                                  PNorm norm, DistanceVariant variant,
                                  CoordinateSpace space);

// Hyperplane formula for the distance of an expectation vector to the
// classical set of the n-cycle. Valid when exactly one facet row is reached
// or crossed; accepts the full suspension-edge vector (2n entries) or just
// the cycle-edge block (n entries).
QuantifierReport ncycle_closed_form(const std::vector<Rat>& x, int n, PNorm norm);

struct FreeOperation {
  enum class Kind { Relabeling, PostProcessing, PreProcessing };
  Kind kind = Kind::Relabeling;

  // Relabeling: a measurement permutation that maps contexts to contexts,
  // plus one outcome permutation per source measurement (empty = identity).
  std::vector<int> measurement_map;
  std::vector<std::vector<int>> outcome_maps;

  // Post-processing: one row-stochastic matrix per context over its outcome
  // tuples, kernel[in][out].
  std::vector<std::vector<std::vector<Rat>>> context_kernels;

  // Pre-processing: row-stochastic context mixing matrix[target][source]
  // with column sums at most 1.
  std::vector<std::vector<Rat>> context_matrix;

  static FreeOperation relabeling(std::vector<int> measurement_map,
                                  std::vector<std::vector<int>> outcome_maps = {});
  static FreeOperation post_processing(std::vector<std::vector<std::vector<Rat>>> kernels);
  // Builds the per-context kernels as products of one stochastic outcome map
  // per measurement; always yields a nondisturbing output.
  static FreeOperation local_post_processing(
      const CompatibilityScenario& sc,
      const std::vector<std::vector<std::vector<Rat>>>& measurement_maps);
  static FreeOperation pre_processing(std::vector<std::vector<Rat>> matrix);
};

// Applies the operation and validates the result; throws domain_error on
// non-stochastic kernels or when the output would disturb.
Behavior apply_free_operation(const CompatibilityScenario& sc, const Behavior& b,
                              const FreeOperation& op);

struct ScenarioBehavior {
  CompatibilityScenario scenario;
  Behavior behavior;
};

// Side-by-side composition: both measurement sets (second copy renamed on
// collision), contexts concatenated.
ScenarioBehavior juxtapose(const CompatibilityScenario& s1, const Behavior& b1,
                           const CompatibilityScenario& s2, const Behavior& b2);

// Product composition: one context per pair of parent contexts, carrying the
// product distribution.
ScenarioBehavior tensor(const CompatibilityScenario& s1, const Behavior& b1,
                        const CompatibilityScenario& s2, const Behavior& b2);

}  // namespace ctxq
