#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ctxq/graph.hpp"
#include "ctxq/rational.hpp"

namespace ctxq {

// A measurement scenario: named measurements, maximal contexts (an antichain
// of measurement-index sets covering all measurements), and a shared outcome
// label set. Immutable after construction.
struct CompatibilityScenario {
  std::vector<std::string> measurements;
  std::vector<std::vector<int>> contexts;  // each sorted ascending
  std::vector<std::string> outcomes;

  static CompatibilityScenario make(std::vector<std::string> measurements,
                                    std::vector<std::vector<int>> contexts,
                                    std::vector<std::string> outcomes);
  // Binary-outcome scenario whose contexts are the edges of g (plus a
  // singleton context per isolated vertex). Outcome labels "+1", "-1".
  static CompatibilityScenario from_graph(const Graph& g);

  int n_measurements() const { return static_cast<int>(measurements.size()); }
  int n_contexts() const { return static_cast<int>(contexts.size()); }
  int n_outcomes() const { return static_cast<int>(outcomes.size()); }

  // Outcome tuples over a context are coded as base-|O| integers, leftmost
  // measurement most significant.
  size_t tuple_count(int c) const;
  size_t encode(int c, const std::vector<int>& tuple) const;
  std::vector<int> decode(int c, size_t code) const;

  size_t flat_size() const;
  size_t flat_offset(int c) const;

  bool operator==(const CompatibilityScenario&) const = default;
};

// One probability table per context, coded per CompatibilityScenario.
struct Behavior {
  std::vector<std::vector<Rat>> p;

  bool operator==(const Behavior&) const = default;
};

// Throws invalid_argument unless all tables have the right size, entries lie
// in [0,1], and each context sums to exactly 1.
void validate_behavior(const CompatibilityScenario& sc, const Behavior& b);

// Projection of an outcome tuple over context measurements ctx onto the
// sorted subset sub.
std::vector<int> restrict_tuple(const std::vector<int>& tuple, const std::vector<int>& ctx,
                                const std::vector<int>& sub);

// Distribution of B's context c over the measurement subset sub (indexed by
// the same base-|O| coding over sub).
std::vector<Rat> marginal(const CompatibilityScenario& sc, const Behavior& b, int c,
                          const std::vector<int>& sub);

struct MarginalMismatch {
  int context_a;
  int context_b;
  std::vector<int> overlap;
  Rat gap;  // largest absolute marginal difference
};

// Empty result iff every pair of overlapping contexts has consistent
// marginals within tol (exact when tol = 0).
std::vector<MarginalMismatch> check_nondisturbance(const CompatibilityScenario& sc,
                                                   const Behavior& b,
                                                   const Rat& tol = Rat(1, 1000000000));

// Deterministic behavior of a global outcome assignment (one code per
// measurement).
Behavior deterministic_behavior(const CompatibilityScenario& sc, const std::vector<int>& g);

// All |O|^|M| deterministic behaviors in lexicographic assignment order,
// g[0] most significant. Throws length_error above the cap.
std::vector<Behavior> enumerate_classical_vertices(const CompatibilityScenario& sc,
                                                   size_t cap = size_t(1) << 24);

// Convex combination of deterministic behaviors given by sparse weights.
Behavior behavior_from_global_section(
    const CompatibilityScenario& sc,
    const std::vector<std::pair<std::vector<int>, Rat>>& weights);

Behavior mix(const std::vector<Behavior>& parts, const std::vector<Rat>& weights);

std::vector<Rat> flatten(const CompatibilityScenario& sc, const Behavior& b);
Behavior unflatten(const CompatibilityScenario& sc, const std::vector<Rat>& v);

// Measurement permutations that map the context set onto itself.
std::vector<std::vector<int>> scenario_automorphisms(const CompatibilityScenario& sc);

}  // namespace ctxq
