#include "ctxq/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "json.hpp"

namespace ctxq {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument("scenario file: " + what);
}

const json& field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) fail(std::string("missing field \"") + name + "\"");
  return *it;
}

std::string get_string(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_string()) fail(std::string("\"") + name + "\" must be a string");
  return v.get<std::string>();
}

// Exact probabilities only: fraction/decimal strings or whole numbers. A
// non-integer JSON number has already been rounded to binary by the JSON
// layer, so it is refused rather than silently accepted.
Rat get_rational(const json& v, const std::string& where) {
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>());
    } catch (const std::exception& e) {
      fail(where + ": " + e.what());
    }
  }
  if (v.is_number_integer()) return Rat(v.get<long>());
  if (v.is_number())
    fail(where + ": write non-integer numbers as strings (\"1/3\", \"0.25\") to keep them exact");
  fail(where + ": expected a number string");
}

std::vector<Rat> get_rational_array(const json& j, const char* name, size_t expect) {
  const json& v = field(j, name);
  if (!v.is_array()) fail(std::string("\"") + name + "\" must be an array");
  if (v.size() != expect)
    fail(std::string("\"") + name + "\" has " + std::to_string(v.size()) + " entries, expected " +
         std::to_string(expect));
  std::vector<Rat> out;
  out.reserve(v.size());
  for (size_t i = 0; i < v.size(); ++i)
    out.push_back(get_rational(v[i], std::string(name) + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<std::string> get_string_array(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_array()) fail(std::string("\"") + name + "\" must be an array");
  std::vector<std::string> out;
  for (const json& e : v) {
    if (!e.is_string()) fail(std::string("\"") + name + "\" entries must be strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::vector<std::pair<int, int>> get_pairs(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_array()) fail(std::string("\"") + name + "\" must be an array of pairs");
  std::vector<std::pair<int, int>> out;
  for (size_t i = 0; i < v.size(); ++i) {
    const json& e = v[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
      fail(std::string("\"") + name + "[" + std::to_string(i) + "]\" must be a pair of indices");
    out.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return out;
}

ScenarioFile parse_compatibility(const json& j, ScenarioFile f) {
  auto measurements = get_string_array(j, "measurements");
  auto outcomes = get_string_array(j, "outcomes");
  const json& ctxs = field(j, "contexts");
  if (!ctxs.is_array()) fail("\"contexts\" must be an array");
  std::vector<std::vector<int>> contexts;
  for (size_t c = 0; c < ctxs.size(); ++c) {
    if (!ctxs[c].is_array()) fail("\"contexts[" + std::to_string(c) + "]\" must be an array");
    std::vector<int> ctx;
    for (const json& m : ctxs[c]) {
      if (!m.is_number_integer())
        fail("\"contexts[" + std::to_string(c) + "]\" entries must be measurement indices");
      ctx.push_back(m.get<int>());
    }
    contexts.push_back(std::move(ctx));
  }
  try {
    f.scenario = CompatibilityScenario::make(std::move(measurements), std::move(contexts),
                                             std::move(outcomes));
  } catch (const std::exception& e) {
    fail(e.what());
  }

  const json& rows = field(j, "behavior");
  if (!rows.is_array()) fail("\"behavior\" must be an array of context tables");
  if (rows.size() != static_cast<size_t>(f.scenario.n_contexts()))
    fail("\"behavior\" has " + std::to_string(rows.size()) + " tables, expected " +
         std::to_string(f.scenario.n_contexts()));
  f.behavior.p.resize(rows.size());
  for (size_t c = 0; c < rows.size(); ++c) {
    const json& row = rows[c];
    std::string where = "behavior[" + std::to_string(c) + "]";
    if (!row.is_array()) fail("\"" + where + "\" must be an array");
    size_t want = f.scenario.tuple_count(static_cast<int>(c));
    if (row.size() != want)
      fail("\"" + where + "\" has " + std::to_string(row.size()) + " entries, expected " +
           std::to_string(want));
    for (size_t k = 0; k < row.size(); ++k)
      f.behavior.p[c].push_back(get_rational(row[k], where + "[" + std::to_string(k) + "]"));
  }
  return f;
}

ScenarioFile parse_exclusivity(const json& j, ScenarioFile f) {
  const json& ev = field(j, "events");
  if (!ev.is_number_integer() || ev.get<int>() < 0) fail("\"events\" must be a vertex count");
  int n = ev.get<int>();
  Graph g;
  try {
    g = Graph::from_edges(n, get_pairs(j, "edges"));
  } catch (const std::exception& e) {
    fail(e.what());
  }
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = get_string_array(j, "labels");
  try {
    f.events = ExclusivityScenario::make(std::move(g), std::move(labels));
  } catch (const std::exception& e) {
    fail(e.what());
  }
  f.probabilities = get_rational_array(j, "probabilities", static_cast<size_t>(n));
  if (j.contains("weights"))
    f.weights = get_rational_array(j, "weights", static_cast<size_t>(n));
  return f;
}

json parsed(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) fail("not valid JSON");
  if (!j.is_object()) fail("top level must be an object");
  return j;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json rat_strings(const std::vector<Rat>& v) {
  json a = json::array();
  for (const Rat& r : v) a.push_back(rational_to_string(r));
  return a;
}

}  // namespace

ScenarioFile parse_scenario(const std::string& text) {
  json j = parsed(text);
  ScenarioFile f;
  f.format = get_string(j, "format");
  if (f.format != "ctxq-scenario/1") fail("unsupported format \"" + f.format + "\"");
  f.kind = get_string(j, "kind");
  if (f.kind == "compatibility") return parse_compatibility(j, std::move(f));
  if (f.kind == "exclusivity") return parse_exclusivity(j, std::move(f));
  fail("unknown kind \"" + f.kind + "\"");
}

ScenarioFile load_scenario(const std::string& path) { return parse_scenario(slurp(path)); }

std::string scenario_json(const ScenarioFile& f) {
  json j;
  j["format"] = "ctxq-scenario/1";
  j["kind"] = f.kind;
  if (f.is_compatibility()) {
    j["measurements"] = f.scenario.measurements;
    j["outcomes"] = f.scenario.outcomes;
    j["contexts"] = f.scenario.contexts;
    json rows = json::array();
    for (const auto& row : f.behavior.p) rows.push_back(rat_strings(row));
    j["behavior"] = rows;
  } else {
    j["events"] = f.events.g.n;
    json edges = json::array();
    for (auto [a, b] : f.events.g.edges) edges.push_back(json::array({a, b}));
    j["edges"] = edges;
    if (!f.events.event_labels.empty()) j["labels"] = f.events.event_labels;
    j["probabilities"] = rat_strings(f.probabilities);
    if (!f.weights.empty()) j["weights"] = rat_strings(f.weights);
  }
  return j.dump(2);
}

GraphFile parse_graph(const std::string& text) {
  json j = parsed(text);
  if (j.contains("kind") && j["kind"] == "exclusivity") {
    ScenarioFile f = parse_scenario(text);
    return GraphFile{std::move(f.events.g), std::move(f.weights)};
  }
  std::string format = get_string(j, "format");
  if (format != "ctxq-graph/1") fail("unsupported graph format \"" + format + "\"");
  const json& nv = field(j, "n");
  if (!nv.is_number_integer() || nv.get<int>() < 0) fail("\"n\" must be a vertex count");
  int n = nv.get<int>();
  GraphFile out;
  try {
    out.g = Graph::from_edges(n, get_pairs(j, "edges"));
  } catch (const std::exception& e) {
    fail(e.what());
  }
  if (j.contains("weights"))
    out.weights = get_rational_array(j, "weights", static_cast<size_t>(n));
  return out;
}

GraphFile load_graph(const std::string& path) { return parse_graph(slurp(path)); }

std::string report_json(const QuantifierReport& r) {
  json j;
  j["name"] = r.name;
  j["value"] = r.value;
  j["raw"] = r.raw;
  j["exact"] = r.exact;
  if (r.exact) {
    j["exact_value"] = rational_to_string(r.exact_value);
    j["exact_raw"] = rational_to_string(r.exact_raw);
  }
  j["classical"] = r.classical;
  j["gap"] = r.gap;
  j["iterations"] = r.iterations;
  if (!r.weights.empty()) j["weights"] = rat_strings(r.weights);
  if (!r.nearest.empty()) j["nearest"] = r.nearest;
  return j.dump(2);
}

}  // namespace ctxq
