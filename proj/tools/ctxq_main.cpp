#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ctxq/exclusivity.hpp"
#include "ctxq/graph_bounds.hpp"
#include "ctxq/io.hpp"
#include "ctxq/polytope.hpp"
#include "ctxq/quantifiers.hpp"
#include "ctxq/theta.hpp"
#include "json.hpp"

using namespace ctxq;
using nlohmann::json;

namespace {

struct GlobalFlags {
  int seed = 0;
  int threads = 1;
};

json envelope(const char* command, const GlobalFlags& g) {
  json j;
  j["format"] = "ctxq-report/1";
  j["command"] = command;
  j["seed"] = g.seed;
  j["threads"] = g.threads;
  return j;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_validate(const std::string& path) {
  ScenarioFile f = load_scenario(path);
  bool ok = true;
  if (f.is_compatibility()) {
    std::cout << "kind: compatibility (" << f.scenario.n_measurements() << " measurements, "
              << f.scenario.n_contexts() << " contexts, " << f.scenario.n_outcomes()
              << " outcomes)\n";
    bool normalized = true;
    for (int c = 0; c < f.scenario.n_contexts(); ++c) {
      Rat sum(0);
      bool in_range = true;
      for (const Rat& x : f.behavior.p[c]) {
        sum += x;
        if (x < 0 || x > 1) in_range = false;
      }
      if (sum != 1 || !in_range) {
        std::cout << "normalization: context " << c << " sums to " << rational_to_string(sum)
                  << (in_range ? "" : " with entries outside [0,1]") << "\n";
        normalized = false;
      }
    }
    if (normalized) std::cout << "normalization: ok\n";
    ok = normalized;
    if (normalized) {
      auto bad = check_nondisturbance(f.scenario, f.behavior);
      for (const auto& m : bad) {
        std::cout << "non-disturbance: contexts " << m.context_a << " and " << m.context_b
                  << " disagree on measurement " << m.overlap.front() << " by "
                  << rational_to_string(m.gap) << "\n";
      }
      if (bad.empty()) std::cout << "non-disturbance: ok\n";
      ok = bad.empty();
    }
  } else {
    std::cout << "kind: exclusivity (" << f.events.g.n << " events, "
              << f.events.g.edges.size() << " exclusive pairs)\n";
    try {
      validate_event_probabilities(f.events, f.probabilities);
      std::cout << "validity: ok\n";
    } catch (const std::domain_error& e) {
      std::cout << "validity: " << e.what() << "\n";
      ok = false;
    }
  }
  std::cout << "result: " << (ok ? "valid" : "invalid") << "\n";
  return ok ? 0 : 1;
}

struct MeasureSpec {
  PNorm norm = PNorm::One;
  DistanceVariant variant = DistanceVariant::Full;
  bool is_distance = false;
};

std::optional<MeasureSpec> distance_measure(const std::string& m) {
  MeasureSpec s;
  s.is_distance = true;
  if (m == "d1") s.norm = PNorm::One;
  else if (m == "d2") s.norm = PNorm::Two;
  else if (m == "dinf") s.norm = PNorm::Inf;
  else if (m == "du") s.variant = DistanceVariant::Uniform;
  else if (m == "dmax") s.variant = DistanceVariant::Max;
  else return std::nullopt;
  return s;
}

// The (vertex, vertex, edge) coordinate descriptions need a two-outcome
// pairwise scenario; recovers its graph or explains why there is none.
Graph pairwise_graph(const CompatibilityScenario& sc) {
  if (sc.n_outcomes() != 2)
    throw std::invalid_argument("--space phi/psi/alpha needs a two-outcome scenario");
  std::vector<std::pair<int, int>> edges;
  for (const auto& ctx : sc.contexts) {
    if (ctx.size() == 1) continue;  // isolated vertex context
    if (ctx.size() != 2)
      throw std::invalid_argument("--space phi/psi/alpha needs pairwise contexts");
    edges.emplace_back(ctx[0], ctx[1]);
  }
  return Graph::from_edges(sc.n_measurements(), std::move(edges));
}

int cmd_quantify(const std::string& path, const std::string& measure, const std::string& space,
                 const GlobalFlags& flags) {
  ScenarioFile f = load_scenario(path);
  QuantifierReport r;
  if (f.is_compatibility()) {
    auto dist = distance_measure(measure);
    if (space == "raw") {
      if (measure == "cf") r = contextual_fraction(f.scenario, f.behavior);
      else if (measure == "rob") r = robustness(f.scenario, f.behavior);
      else if (measure == "eu")
        r = entropic_quantifier(f.scenario, f.behavior, EntropicVariant::Uniform);
      else if (measure == "emax")
        r = entropic_quantifier(f.scenario, f.behavior, EntropicVariant::Max);
      else if (dist)
        r = distance_quantifier(f.scenario, f.behavior, dist->norm, dist->variant);
      else
        throw std::invalid_argument("unknown measure \"" + measure + "\"");
    } else {
      if (!dist)
        throw std::invalid_argument("--space " + space + " supports only distance measures");
      Graph g = pairwise_graph(f.scenario);
      // rebuild the behavior in the graph's canonical context order; the
      // file may list the same contexts in any order
      auto canonical = CompatibilityScenario::from_graph(g);
      Behavior b;
      for (const auto& ctx : canonical.contexts) {
        auto it = std::find(f.scenario.contexts.begin(), f.scenario.contexts.end(), ctx);
        if (it == f.scenario.contexts.end())
          throw std::invalid_argument("--space phi/psi/alpha: context set is not the edge set");
        b.p.push_back(f.behavior.p[it - f.scenario.contexts.begin()]);
      }
      auto q = marginal_coordinates(g, b);
      CoordinateSpace cs;
      std::vector<Rat> point;
      if (space == "phi") {
        cs = CoordinateSpace::Marginal;
        point = std::move(q);
      } else if (space == "psi") {
        cs = CoordinateSpace::Expectation;
        point = expectation_coordinates(g, q);
      } else if (space == "alpha") {
        cs = CoordinateSpace::Cut;
        point = signs_to_cuts(expectation_coordinates(g, q));
      } else {
        throw std::invalid_argument("unknown space \"" + space + "\"");
      }
      r = space_quantifier(g, point, dist->norm, dist->variant, cs);
    }
  } else {
    if (space != "raw")
      throw std::invalid_argument("--space " + space +
                                  " applies to compatibility scenarios only");
    if (measure == "cf") r = exclusivity_fraction(f.events, f.probabilities);
    else if (measure == "rob") r = exclusivity_robustness(f.events, f.probabilities);
    else if (measure == "d1") r = exclusivity_distance(f.events, f.probabilities, PNorm::One);
    else if (measure == "d2") r = exclusivity_distance(f.events, f.probabilities, PNorm::Two);
    else if (measure == "dinf") r = exclusivity_distance(f.events, f.probabilities, PNorm::Inf);
    else
      throw std::invalid_argument("measure \"" + measure +
                                  "\" is not defined for exclusivity scenarios");
  }
  json out = envelope("quantify", flags);
  out["kind"] = f.kind;
  out["measure"] = measure;
  out["space"] = space;
  out["report"] = json::parse(report_json(r));
  emit(out);
  return 0;
}

json graph_json(const Graph& g) {
  json j;
  j["n"] = g.n;
  json edges = json::array();
  for (auto [a, b] : g.edges) edges.push_back(json::array({a, b}));
  j["edges"] = edges;
  return j;
}

json rat_strings(const std::vector<Rat>& v) {
  json a = json::array();
  for (const Rat& r : v) a.push_back(rational_to_string(r));
  return a;
}

json alpha_json(const IndependenceResult& a) {
  json j;
  j["value"] = rational_to_string(a.value);
  j["witness"] = a.witness;
  return j;
}

json theta_json(const ThetaResult& t) {
  json j;
  j["value"] = t.value;
  j["lower"] = t.lower;
  j["upper"] = t.upper;
  j["iterations"] = t.iterations;
  return j;
}

json packing_json(const PackingResult& p) {
  json j;
  j["value"] = rational_to_string(p.value);
  j["witness"] = rat_strings(p.witness);
  return j;
}

int cmd_invariants(const std::string& path, const std::string& family, int n, bool want_alpha,
                   bool want_theta, bool want_packing, const GlobalFlags& flags) {
  GraphFile gf;
  if (!path.empty()) {
    gf = load_graph(path);
  } else {
    if (family == "cycle") gf.g = Graph::cycle(n);
    else if (family == "path") gf.g = Graph::path(n);
    else if (family == "complete") gf.g = Graph::complete(n);
    else if (family == "prism") gf.g = Graph::prism(n);
    else if (family == "moebius-ladder") gf.g = Graph::moebius_ladder(n);
    else throw std::invalid_argument("unknown family \"" + family + "\"");
  }
  if (!want_alpha && !want_theta && !want_packing)
    want_alpha = want_theta = want_packing = true;

  json out = envelope("invariants", flags);
  out["graph"] = graph_json(gf.g);
  if (!gf.weights.empty()) out["weights"] = rat_strings(gf.weights);

  if (want_alpha && want_theta && want_packing) {
    auto b = exclusivity_bounds(gf.g, gf.weights);
    out["alpha"] = alpha_json(b.alpha);
    out["theta"] = theta_json(b.theta);
    out["alpha_star"] = packing_json(b.alpha_star);
  } else {
    std::vector<double> dw;
    for (const Rat& w : gf.weights) dw.push_back(to_double(w));
    if (want_alpha) out["alpha"] = alpha_json(independence_number(gf.g, gf.weights));
    if (want_theta) out["theta"] = theta_json(lovasz_theta(gf.g, dw));
    if (want_packing) out["alpha_star"] = packing_json(fractional_packing(gf.g, gf.weights));
  }
  emit(out);
  return 0;
}

json distance_rows(double gap, int n) {
  auto row = [n](double raw) {
    json j;
    j["raw"] = raw;
    j["value"] = raw / n;
    return j;
  };
  json j;
  j["l1"] = row(gap);
  j["l2"] = row(gap / std::sqrt(double(n)));
  j["linf"] = row(gap / n);
  return j;
}

int cmd_ncycle(int n, const std::string& approach, const GlobalFlags& flags) {
  json out = envelope("ncycle", flags);
  out["approach"] = approach;
  out["n"] = n;
  if (approach == "exclusivity") {
    if (n < 5 || n % 2 == 0)
      throw std::invalid_argument("--approach exclusivity needs an odd --n of at least 5");
    auto rep = ncycle_exclusivity_report(n);
    out["classical"] = rational_to_string(rep.classical_bound);
    out["quantum"] = rep.quantum_bound;
    out["eprinciple"] = rational_to_string(rep.eprinciple_bound);
    out["alpha"] = alpha_json(rep.alpha);
    out["theta"] = theta_json(rep.theta);
    out["alpha_star"] = packing_json(rep.alpha_star);
    out["agreement_ok"] = rep.agreement_ok;
    auto rows = [](const NcycleDistanceRow& l1, const NcycleDistanceRow& l2,
                   const NcycleDistanceRow& linf) {
      auto one = [](const NcycleDistanceRow& r) {
        json j;
        j["raw"] = r.raw;
        j["value"] = r.value;
        return j;
      };
      json j;
      j["l1"] = one(l1);
      j["l2"] = one(l2);
      j["linf"] = one(linf);
      return j;
    };
    out["distances"] = {{"quantum", rows(rep.quantum_l1, rep.quantum_l2, rep.quantum_linf)},
                        {"eprinciple", rows(rep.eprinciple_l1, rep.eprinciple_l2,
                                            rep.eprinciple_linf)}};
    emit(out);
    return 0;
  }
  if (approach != "compat")
    throw std::invalid_argument("unknown approach \"" + approach + "\"");
  if (n < 3 || n > 16)
    throw std::invalid_argument("--approach compat needs 3 <= --n <= 16 (facet enumeration)");

  double c = std::cos(M_PI / n);
  // correlator form: odd cycles realize the suspension prism bound, even
  // ones the Moebius ladder bound
  double quantum = n % 2 == 0 ? n * c : (3 * n * c - n) / (1 + c);
  out["classical"] = rational_to_string(Rat(n - 2));
  out["quantum"] = quantum;
  out["eprinciple"] = rational_to_string(Rat(n));
  out["facets"] = ncycle_facets_pm1(n).a.size();
  json xg;
  xg["family"] = n % 2 == 0 ? "moebius-ladder" : "prism";
  xg["vertices"] = 2 * n;
  out["exclusivity_graph"] = xg;
  out["distances"] = {{"quantum", distance_rows(quantum - (n - 2), n)},
                      {"eprinciple", distance_rows(2.0, n)}};
  emit(out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"contextuality quantifiers over compatibility and exclusivity scenarios"};
  app.require_subcommand(1);

  GlobalFlags flags;
  if (const char* env = std::getenv("CTXQ_THREADS")) flags.threads = std::atoi(env);
  app.add_option("--seed", flags.seed, "deterministic solver seed (echoed in reports)")
      ->capture_default_str();
  app.add_option("--threads", flags.threads,
                 "solver thread budget (overrides CTXQ_THREADS; current solvers are "
                 "sequential, so this only caps batch work)")
      ->check(CLI::PositiveNumber);

  std::string val_path;
  auto* validate = app.add_subcommand("validate", "parse a scenario file and check it");
  validate->add_option("path", val_path, "scenario JSON file")->required();

  std::string q_path, measure, space = "raw";
  auto* quantify = app.add_subcommand("quantify", "evaluate one quantifier");
  quantify->add_option("path", q_path, "scenario JSON file")->required();
  quantify->add_option("--measure", measure, "cf, rob, d1, d2, dinf, du, dmax, eu, emax")
      ->required();
  quantify
      ->add_option("--space", space,
                   "coordinate description for distance measures: raw, phi, psi, alpha")
      ->capture_default_str();

  std::string inv_path, family;
  int inv_n = 0;
  bool want_alpha = false, want_theta = false, want_packing = false;
  auto* invariants = app.add_subcommand("invariants", "graph bounds with certificates");
  invariants->add_option("path", inv_path, "graph or exclusivity scenario JSON file");
  auto* fam = invariants->add_option(
      "--family", family, "cycle, path, complete, prism, moebius-ladder (with --n)");
  invariants->add_option("--n", inv_n, "family size parameter")->needs(fam);
  fam->needs(invariants->get_option("--n"));
  invariants->add_flag("--alpha", want_alpha, "independence number");
  invariants->add_flag("--theta", want_theta, "Lovasz number");
  invariants->add_flag("--alphastar", want_packing, "fractional packing number");

  int cyc_n = 0;
  std::string approach = "compat";
  auto* ncycle = app.add_subcommand("ncycle", "closed-form cycle bounds and distances");
  ncycle->add_option("--n", cyc_n, "cycle length")->required();
  ncycle->add_option("--approach", approach, "compat or exclusivity")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*validate) return cmd_validate(val_path);
    if (*quantify) return cmd_quantify(q_path, measure, space, flags);
    if (*invariants) {
      if (inv_path.empty() == family.empty())
        throw std::invalid_argument("invariants needs a graph file or --family, not both");
      return cmd_invariants(inv_path, family, inv_n, want_alpha, want_theta, want_packing,
                            flags);
    }
    if (*ncycle) return cmd_ncycle(cyc_n, approach, flags);
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
