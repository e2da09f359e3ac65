#pragma once

#include <string>
#include <vector>

#include "ctxq/exclusivity.hpp"
#include "ctxq/quantifiers.hpp"
#include "ctxq/scenario.hpp"

namespace ctxq {

// One parsed scenario file. `kind` selects which half is meaningful.
struct ScenarioFile {
  std::string format;
  std::string kind;  // "compatibility" or "exclusivity"

  CompatibilityScenario scenario;
  Behavior behavior;

  ExclusivityScenario events;
  std::vector<Rat> probabilities;
  std::vector<Rat> weights;  // optional vertex weights, empty when absent

  bool is_compatibility() const { return kind == "compatibility"; }
};

// Parses the JSON text of a scenario file. Shape problems (missing fields,
// wrong types, size mismatches, unknown kind) throw invalid_argument naming
// the offending field; semantic checks (normalization, non-disturbance,
// event-probability validity) are left to the caller. Probability entries
// must be strings ("1/2", "0.25", "7e-1") or JSON integers; non-integer JSON
// numbers are rejected since they would silently round through binary
// floating point.
ScenarioFile parse_scenario(const std::string& text);

// parse_scenario over the contents of a file; unreadable path throws
// invalid_argument.
ScenarioFile load_scenario(const std::string& path);

// Canonical serialization; parse_scenario(scenario_json(f)) reproduces f
// exactly (rationals come back as canonical fraction strings).
std::string scenario_json(const ScenarioFile& f);

// A graph on its own, for invariant queries: accepts either a graph file
// ({"format": "ctxq-graph/1", "n": ..., "edges": [...], "weights"?}) or an
// exclusivity scenario file, whose graph and weights are taken.
struct GraphFile {
  Graph g;
  std::vector<Rat> weights;
};
GraphFile parse_graph(const std::string& text);
GraphFile load_graph(const std::string& path);

// The report object embedded in CLI output, one key per populated field;
// exact_value/exact_raw appear (as fraction strings) only when the report is
// exact, weights/nearest only when nonempty.
std::string report_json(const QuantifierReport& r);

}  // namespace ctxq
