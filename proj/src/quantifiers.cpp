#include "ctxq/quantifiers.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

#include "ctxq/hull.hpp"
#include "ctxq/lp.hpp"
#include "ctxq/polytope.hpp"

namespace ctxq {

namespace {

constexpr double kLn2 = 0.6931471805599453;

const char* norm_suffix(PNorm norm) {
  switch (norm) {
    case PNorm::One: return "l1";
    case PNorm::Two: return "l2";
    default: return "linf";
  }
}

std::string distance_name(PNorm norm, DistanceVariant variant) {
  switch (variant) {
    case DistanceVariant::Full: return std::string("distance_") + norm_suffix(norm);
    case DistanceVariant::Uniform:
      return std::string("uniform_distance_") + norm_suffix(norm);
    default: return std::string("max_distance_") + norm_suffix(norm);
  }
}

void require_quantifiable(const CompatibilityScenario& sc, const Behavior& b,
                          const char* who) {
  validate_behavior(sc, b);
  auto bad = check_nondisturbance(sc, b);
  if (!bad.empty())
    throw std::domain_error(std::string(who) + ": behavior disturbs between contexts " +
                            std::to_string(bad[0].context_a) + " and " +
                            std::to_string(bad[0].context_b) + " (gap " +
                            rational_to_string(bad[0].gap) + ")");
}

struct ClassicalSetup {
  VPolytope hull;  // flattened deterministic behaviors
  std::vector<std::pair<size_t, size_t>> blocks;
};

ClassicalSetup classical_setup(const CompatibilityScenario& sc) {
  ClassicalSetup s;
  s.hull.dim = static_cast<int>(sc.flat_size());
  for (const Behavior& v : enumerate_classical_vertices(sc))
    s.hull.vertices.push_back(flatten(sc, v));
  for (int c = 0; c < sc.n_contexts(); ++c)
    s.blocks.emplace_back(sc.flat_offset(c), sc.flat_offset(c) + sc.tuple_count(c));
  return s;
}

std::vector<double> to_doubles(const std::vector<Rat>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const Rat& x : v) out.push_back(to_double(x));
  return out;
}

QuantifierReport classical_zero(std::string name, const Membership& m,
                                const std::vector<Rat>& target) {
  QuantifierReport r;
  r.name = std::move(name);
  r.exact = true;
  r.classical = true;
  r.weights = m.weights;
  r.nearest = to_doubles(target);
  return r;
}

void fill_exact(QuantifierReport& r, const Rat& raw, const Rat& value) {
  r.exact = true;
  r.exact_raw = raw;
  r.exact_value = value;
  r.raw = to_double(raw);
  r.value = to_double(value);
}

// one smooth squared-residual objective per block, for the minimax solver
std::vector<HullObjective> block_sq_parts(const std::vector<std::vector<size_t>>& blocks,
                                          const std::vector<double>& target) {
  std::vector<HullObjective> parts;
  parts.reserve(blocks.size());
  for (const auto& blk : blocks) {
    HullObjective f;
    f.value = [blk, target](const std::vector<double>& z) {
      double s = 0;
      for (size_t d : blk) s += (z[d] - target[d]) * (z[d] - target[d]);
      return s;
    };
    f.gradient = [blk, target](const std::vector<double>& z) {
      std::vector<double> g(target.size(), 0.0);
      for (size_t d : blk) g[d] = 2 * (z[d] - target[d]);
      return g;
    };
    parts.push_back(std::move(f));
  }
  return parts;
}

// Minimizes the sum of per-block euclidean residual norms over the hull by
// iteratively reweighted least squares: each round minimizes the quadratic
// majorant sum ||r_C||^2 / (2 w_C) with w_C from the previous residuals, which
// Frank-Wolfe handles quickly, unlike the flat-faced nonsmooth sum itself.
// Convergence is certified by the linearization gap of the true objective.
HullMinimum irls_block_l2_sum(const std::vector<std::vector<size_t>>& blocks,
                              const std::vector<double>& target, const VPolytope& p,
                              double tol) {
  constexpr double floor_norm = 1e-10;
  size_t m = blocks.size();
  std::vector<double> w(m, 1.0);
  std::vector<double> warm;
  HullMinimum out;
  out.value = std::numeric_limits<double>::infinity();

  for (int round = 1; round <= 300; ++round) {
    HullObjective q;
    q.value = [&blocks, &target, &w](const std::vector<double>& z) {
      double s = 0;
      for (size_t bk = 0; bk < blocks.size(); ++bk) {
        double sq = 0;
        for (size_t d : blocks[bk]) sq += (z[d] - target[d]) * (z[d] - target[d]);
        s += sq / (2 * w[bk]);
      }
      return s;
    };
    q.gradient = [&blocks, &target, &w](const std::vector<double>& z) {
      std::vector<double> g(target.size(), 0.0);
      for (size_t bk = 0; bk < blocks.size(); ++bk)
        for (size_t d : blocks[bk]) g[d] += (z[d] - target[d]) / w[bk];
      return g;
    };
    auto hm = minimize_convex_over_hull(q, p, 1e-12, 100000,
                                        warm.empty() ? nullptr : &warm);
    warm = hm.weights;
    out.iterations += hm.iterations;

    std::vector<double> norms(m);
    double f = 0;
    for (size_t bk = 0; bk < m; ++bk) {
      double sq = 0;
      for (size_t d : blocks[bk]) sq += (hm.point[d] - target[d]) * (hm.point[d] - target[d]);
      f += (norms[bk] = std::sqrt(sq));
    }
    if (f < out.value) {
      out.value = f;
      out.point = hm.point;
      out.weights = hm.weights;
    }

    // linearization bound with the subgradient that drops vanished blocks
    std::vector<double> g(target.size(), 0.0);
    for (size_t bk = 0; bk < m; ++bk) {
      if (norms[bk] <= floor_norm) continue;
      for (size_t d : blocks[bk]) g[d] += (hm.point[d] - target[d]) / norms[bk];
    }
    double at_x = 0;
    for (size_t d = 0; d < g.size(); ++d) at_x += g[d] * hm.point[d];
    double best_vertex = std::numeric_limits<double>::infinity();
    for (const auto& vert : p.vertices) {
      double s = 0;
      for (size_t d = 0; d < g.size(); ++d) s += g[d] * to_double(vert[d]);
      best_vertex = std::min(best_vertex, s);
    }
    double gap = at_x - best_vertex;
    if (gap <= tol) {
      out.certificate_gap = gap;
      return out;
    }
    for (size_t bk = 0; bk < m; ++bk) w[bk] = std::max(norms[bk], floor_norm);
  }
  throw std::runtime_error("irls_block_l2_sum: no convergence after 300 rounds");
}

// relative entropy (base 2) of the target from an interior-mixed hull point,
// restricted to the coordinate range of one context table
HullObjective entropy_part(std::pair<size_t, size_t> block, const std::vector<double>& target) {
  constexpr double eps = 1e-12;
  auto mixed = [](double z, double tc) { return (1 - eps) * z + eps / tc; };
  auto [lo, hi] = block;
  double tc = static_cast<double>(hi - lo);
  HullObjective f;
  f.value = [lo = lo, hi = hi, tc, target, mixed](const std::vector<double>& z) {
    double s = 0;
    for (size_t d = lo; d < hi; ++d)
      if (target[d] > 0) s += target[d] * std::log2(target[d] / mixed(z[d], tc));
    return s;
  };
  f.gradient = [lo = lo, hi = hi, tc, target, mixed](const std::vector<double>& z) {
    std::vector<double> g(target.size(), 0.0);
    for (size_t d = lo; d < hi; ++d)
      if (target[d] > 0) g[d] = -(1 - eps) * target[d] / (kLn2 * mixed(z[d], tc));
    return g;
  };
  return f;
}

std::vector<HullObjective> entropy_parts(const std::vector<std::pair<size_t, size_t>>& blocks,
                                         const std::vector<double>& target) {
  std::vector<HullObjective> parts;
  parts.reserve(blocks.size());
  for (auto block : blocks) parts.push_back(entropy_part(block, target));
  return parts;
}

// sum of the per-context relative entropies
HullObjective entropy_objective(std::vector<std::pair<size_t, size_t>> blocks,
                                std::vector<double> target) {
  constexpr double eps = 1e-12;
  auto mixed = [](double z, double tc) { return (1 - eps) * z + eps / tc; };
  HullObjective f;
  f.value = [blocks, target, mixed](const std::vector<double>& z) {
    double s = 0;
    for (auto [lo, hi] : blocks) {
      double tc = static_cast<double>(hi - lo);
      for (size_t d = lo; d < hi; ++d)
        if (target[d] > 0) s += target[d] * std::log2(target[d] / mixed(z[d], tc));
    }
    return s;
  };
  f.gradient = [blocks, target, mixed](const std::vector<double>& z) {
    std::vector<double> g(target.size(), 0.0);
    for (auto [lo, hi] : blocks) {
      double tc = static_cast<double>(hi - lo);
      for (size_t d = lo; d < hi; ++d)
        if (target[d] > 0) g[d] = -(1 - eps) * target[d] / (kLn2 * mixed(z[d], tc));
    }
    return g;
  };
  return f;
}

}  // namespace

QuantifierReport contextual_fraction(const CompatibilityScenario& sc, const Behavior& b) {
  require_quantifiable(sc, b, "contextual_fraction");
  auto setup = classical_setup(sc);
  auto target = flatten(sc, b);
  size_t n = setup.hull.vertices.size();

  LPProblem<Rat> lp;
  for (size_t k = 0; k < n; ++k) lp.add_var(Rat(-1));
  for (int d = 0; d < setup.hull.dim; ++d) {
    std::vector<Rat> row(n);
    for (size_t k = 0; k < n; ++k) row[k] = setup.hull.vertices[k][d];
    lp.add_row(std::move(row), Rel::LE, target[d]);
  }
  auto sol = solve_lp(lp);
  if (sol.status != LPStatus::Optimal)
    throw std::runtime_error("contextual fraction LP did not solve");

  Rat nc_mass = -sol.objective;
  QuantifierReport r;
  r.name = "contextual_fraction";
  fill_exact(r, Rat(1 - nc_mass), Rat(1 - nc_mass));
  r.classical = nc_mass == 1;
  r.weights = sol.x;
  if (nc_mass > 0) {
    std::vector<double> part(setup.hull.dim, 0.0);
    for (size_t k = 0; k < n; ++k) {
      if (sol.x[k] == 0) continue;
      for (int d = 0; d < setup.hull.dim; ++d)
        part[d] += to_double(Rat(sol.x[k] / nc_mass)) * to_double(setup.hull.vertices[k][d]);
    }
    r.nearest = std::move(part);
  }
  return r;
}

QuantifierReport robustness(const CompatibilityScenario& sc, const Behavior& b) {
  require_quantifiable(sc, b, "robustness");
  auto setup = classical_setup(sc);
  auto target = flatten(sc, b);
  size_t n = setup.hull.vertices.size();

  LPProblem<Rat> lp;
  for (size_t k = 0; k < n; ++k) lp.add_var(Rat(0));  // added part
  for (size_t k = 0; k < n; ++k) lp.add_var(Rat(1));  // subtracted part
  for (int d = 0; d < setup.hull.dim; ++d) {
    std::vector<Rat> row(2 * n);
    for (size_t k = 0; k < n; ++k) {
      row[k] = setup.hull.vertices[k][d];
      row[n + k] = -setup.hull.vertices[k][d];
    }
    lp.add_row(std::move(row), Rel::EQ, target[d]);
  }
  auto sol = solve_lp(lp);
  if (sol.status != LPStatus::Optimal)
    throw std::runtime_error("robustness LP found no signed classical decomposition");

  QuantifierReport r;
  r.name = "robustness";
  fill_exact(r, sol.objective, sol.objective);
  r.classical = sol.objective == 0;
  r.weights.assign(sol.x.begin() + n, sol.x.end());
  // the classical point reached once the noise is mixed in
  Rat total = 1 + sol.objective;
  std::vector<Rat> reached = target;
  for (size_t k = 0; k < n; ++k) {
    if (sol.x[n + k] == 0) continue;
    for (int d = 0; d < setup.hull.dim; ++d)
      reached[d] += sol.x[n + k] * setup.hull.vertices[k][d];
  }
  for (Rat& v : reached) v /= total;
  r.nearest = to_doubles(reached);
  return r;
}

Rat robustness_by_bisection(const CompatibilityScenario& sc, const Behavior& b,
                            const Rat& tol) {
  require_quantifiable(sc, b, "robustness_by_bisection");
  if (tol <= 0) throw std::invalid_argument("robustness_by_bisection: tol must be > 0");
  auto setup = classical_setup(sc);
  auto target = flatten(sc, b);
  size_t n = setup.hull.vertices.size();

  auto feasible = [&](const Rat& lam) {
    LPProblem<Rat> lp;
    for (size_t k = 0; k < 2 * n; ++k) lp.add_var(Rat(0));
    for (int d = 0; d < setup.hull.dim; ++d) {
      std::vector<Rat> row(2 * n);
      for (size_t k = 0; k < n; ++k) {
        row[k] = setup.hull.vertices[k][d];           // absorbing mixture
        row[n + k] = -lam * setup.hull.vertices[k][d];  // injected noise
      }
      lp.add_row(std::move(row), Rel::EQ, target[d]);
    }
    std::vector<Rat> unit(2 * n, Rat(0));
    for (size_t k = 0; k < n; ++k) unit[n + k] = 1;
    lp.add_row(std::move(unit), Rel::EQ, Rat(1));
    return solve_lp(lp).status == LPStatus::Optimal;
  };

  if (feasible(Rat(0))) return Rat(0);
  Rat lo(0), hi(1);
  while (!feasible(hi)) {
    lo = hi;
    hi *= 2;
    if (hi > 1024)
      throw std::runtime_error("robustness_by_bisection: no feasible noise ratio below 1024");
  }
  while (Rat(hi - lo) > tol) {
    Rat mid = Rat(lo + hi) / 2;
    (feasible(mid) ? hi : lo) = mid;
  }
  return Rat(lo + hi) / 2;
}

QuantifierReport distance_quantifier(const CompatibilityScenario& sc, const Behavior& b,
                                     PNorm norm, DistanceVariant variant) {
  require_quantifiable(sc, b, "distance_quantifier");
  auto setup = classical_setup(sc);
  auto target = flatten(sc, b);
  std::string name = distance_name(norm, variant);

  auto member = membership_in_vpolytope(target, setup.hull);
  if (member.inside) return classical_zero(std::move(name), member, target);

  int ncontexts = sc.n_contexts();
  QuantifierReport r;
  r.name = std::move(name);

  if (norm != PNorm::Two) {
    BlockNorm bn = norm == PNorm::One ? BlockNorm::L1 : BlockNorm::LInf;
    HullDistance hd;
    switch (variant) {
      case DistanceVariant::Full:
        hd = lp_distance(target, setup.hull, bn);
        fill_exact(r, hd.distance, hd.distance);
        break;
      case DistanceVariant::Uniform:
        hd = lp_norm_distance(target, setup.hull, setup.blocks, bn, BlockAggregate::Sum);
        fill_exact(r, hd.distance, Rat(hd.distance / ncontexts));
        break;
      case DistanceVariant::Max:
        hd = lp_norm_distance(target, setup.hull, setup.blocks, bn, BlockAggregate::Max);
        fill_exact(r, hd.distance, hd.distance);
        break;
    }
    r.weights = hd.weights;
    r.nearest = to_doubles(hd.nearest);
    return r;
  }

  auto dtarget = to_doubles(target);
  HullMinimum hm;
  if (variant == DistanceVariant::Full) {
    hm = qp_distance(dtarget, setup.hull);
    r.value = r.raw = hm.value;
  } else {
    std::vector<std::vector<size_t>> lists;
    for (auto [lo, hi] : setup.blocks) {
      std::vector<size_t> blk;
      for (size_t d = lo; d < hi; ++d) blk.push_back(d);
      lists.push_back(std::move(blk));
    }
    if (variant == DistanceVariant::Max) {
      hm = minimax_over_hull(block_sq_parts(lists, dtarget), setup.hull, 1e-10);
      double lo_sq = std::max(hm.value - hm.certificate_gap, 0.0);
      hm.value = std::sqrt(hm.value);
      hm.certificate_gap = hm.value - std::sqrt(lo_sq);
      r.value = r.raw = hm.value;
    } else {
      hm = irls_block_l2_sum(lists, dtarget, setup.hull, 1e-9);
      r.raw = hm.value;
      r.value = hm.value / ncontexts;
    }
  }
  r.gap = hm.certificate_gap;
  r.iterations = hm.iterations;
  r.nearest = hm.point;
  r.weights.reserve(hm.weights.size());
  for (double w : hm.weights) r.weights.push_back(Rat(w));
  return r;
}

QuantifierReport entropic_quantifier(const CompatibilityScenario& sc, const Behavior& b,
                                     EntropicVariant variant, double tol) {
  require_quantifiable(sc, b, "entropic_quantifier");
  auto setup = classical_setup(sc);
  auto target = flatten(sc, b);
  std::string name = variant == EntropicVariant::Uniform ? "uniform_relative_entropy"
                                                         : "max_relative_entropy";

  auto member = membership_in_vpolytope(target, setup.hull);
  if (member.inside) return classical_zero(std::move(name), member, target);

  bool maximum = variant == EntropicVariant::Max;
  auto dtarget = to_doubles(target);
  auto hm = maximum
                ? minimax_over_hull(entropy_parts(setup.blocks, dtarget), setup.hull, tol)
                : minimize_convex_over_hull(entropy_objective(setup.blocks, dtarget),
                                            setup.hull, tol);

  QuantifierReport r;
  r.name = std::move(name);
  r.raw = hm.value;
  r.value = maximum ? hm.value : hm.value / sc.n_contexts();
  r.gap = hm.certificate_gap;
  r.iterations = hm.iterations;
  r.nearest = hm.point;
  r.weights.reserve(hm.weights.size());
  for (double w : hm.weights) r.weights.push_back(Rat(w));
  return r;
}

namespace {

struct SpaceSetup {
  VPolytope hull;
  std::vector<std::vector<size_t>> blocks;  // per edge: (i, j, edge) coordinates
  std::string prefix;
};

SpaceSetup space_setup(const Graph& g, CoordinateSpace space) {
  if (g.edges.empty())
    throw std::domain_error("space_quantifier: graph has no edges");
  SpaceSetup s;
  if (space == CoordinateSpace::Marginal) {
    s.hull = correlation_polytope(g);
    s.prefix = "marginal_space.";
    for (size_t e = 0; e < g.edges.size(); ++e) {
      auto [i, j] = g.edges[e];
      s.blocks.push_back({static_cast<size_t>(i), static_cast<size_t>(j),
                          static_cast<size_t>(g.n) + e});
    }
    return s;
  }
  Graph sus = g.suspension();
  s.hull = space == CoordinateSpace::Expectation ? cut_polytope_pm1(sus)
                                                 : cut_polytope_01(sus);
  s.prefix = space == CoordinateSpace::Expectation ? "expectation_space." : "cut_space.";
  for (auto [i, j] : g.edges)
    s.blocks.push_back({static_cast<size_t>(sus.edge_index(i, g.n)),
                        static_cast<size_t>(sus.edge_index(j, g.n)),
                        static_cast<size_t>(sus.edge_index(i, j))});
  return s;
}

}  // namespace

QuantifierReport space_quantifier(const Graph& g, const std::vector<Rat>& point,
                                  PNorm norm, DistanceVariant variant,
                                  CoordinateSpace space) {
  auto setup = space_setup(g, space);
  if (point.size() != static_cast<size_t>(setup.hull.dim))
    throw std::invalid_argument("space_quantifier: point dimension " +
                                std::to_string(point.size()) + " != " +
                                std::to_string(setup.hull.dim));
  int nedges = static_cast<int>(g.edges.size());
  std::string name = setup.prefix + distance_name(norm, variant);

  auto member = membership_in_vpolytope(point, setup.hull);
  if (member.inside) return classical_zero(std::move(name), member, point);

  QuantifierReport r;
  r.name = std::move(name);
  bool normalized = variant != DistanceVariant::Max;

  if (norm != PNorm::Two) {
    BlockNorm bn = norm == PNorm::One ? BlockNorm::L1 : BlockNorm::LInf;
    HullDistance hd;
    switch (variant) {
      case DistanceVariant::Full:
        hd = lp_distance(point, setup.hull, bn);
        break;
      case DistanceVariant::Uniform:
        hd = lp_norm_distance_indexed(point, setup.hull, setup.blocks, bn,
                                      BlockAggregate::Sum);
        break;
      case DistanceVariant::Max:
        hd = lp_norm_distance_indexed(point, setup.hull, setup.blocks, bn,
                                      BlockAggregate::Max);
        break;
    }
    fill_exact(r, hd.distance, normalized ? Rat(hd.distance / nedges) : hd.distance);
    r.weights = hd.weights;
    r.nearest = to_doubles(hd.nearest);
    return r;
  }

  auto dpoint = to_doubles(point);
  HullMinimum hm;
  if (variant == DistanceVariant::Full) {
    hm = qp_distance(dpoint, setup.hull);
  } else if (variant == DistanceVariant::Max) {
    hm = minimax_over_hull(block_sq_parts(setup.blocks, dpoint), setup.hull, 1e-10);
    double lo_sq = std::max(hm.value - hm.certificate_gap, 0.0);
    hm.value = std::sqrt(hm.value);
    hm.certificate_gap = hm.value - std::sqrt(lo_sq);
  } else {
    hm = irls_block_l2_sum(setup.blocks, dpoint, setup.hull, 1e-9);
  }
  r.raw = hm.value;
  r.value = normalized ? hm.value / nedges : hm.value;
  r.gap = hm.certificate_gap;
  r.iterations = hm.iterations;
  r.nearest = hm.point;
  r.weights.reserve(hm.weights.size());
  for (double w : hm.weights) r.weights.push_back(Rat(w));
  return r;
}

QuantifierReport ncycle_closed_form(const std::vector<Rat>& x, int n, PNorm norm) {
  if (n < 3) throw std::invalid_argument("ncycle_closed_form: n must be >= 3");
  std::vector<Rat> edge_part;
  if (x.size() == static_cast<size_t>(2 * n)) {
    edge_part = drop_apex_block(Graph::cycle(n), x);
  } else if (x.size() == static_cast<size_t>(n)) {
    edge_part = x;
  } else {
    throw std::invalid_argument("ncycle_closed_form: expected " + std::to_string(n) +
                                " or " + std::to_string(2 * n) + " coordinates");
  }

  auto facets = ncycle_facets_pm1(n);
  int reached = 0;
  Rat violation(0);
  for (size_t row = 0; row < facets.a.size(); ++row) {
    Rat lhs(0);
    for (int d = 0; d < n; ++d) lhs += facets.a[row][d] * edge_part[d];
    Rat slack = lhs - facets.b[row];
    if (slack >= 0) {
      ++reached;
      violation = slack;
    }
  }
  if (reached == 0)
    throw std::domain_error("ncycle_closed_form: point lies strictly inside the facet system");
  if (reached > 1)
    throw std::domain_error("ncycle_closed_form: " + std::to_string(reached) +
                            " facets reached; the hyperplane formula does not apply");

  QuantifierReport r;
  r.name = std::string("ncycle_facet_distance_") + norm_suffix(norm);
  r.classical = violation == 0;
  switch (norm) {
    case PNorm::One:
      fill_exact(r, violation, Rat(violation / n));
      break;
    case PNorm::Inf:
      fill_exact(r, Rat(violation / n), Rat(violation / (Rat(n) * n)));
      break;
    case PNorm::Two:
      r.raw = to_double(violation) / std::sqrt(static_cast<double>(n));
      r.value = r.raw / n;
      break;
  }
  return r;
}

FreeOperation FreeOperation::relabeling(std::vector<int> measurement_map,
                                        std::vector<std::vector<int>> outcome_maps) {
  FreeOperation op;
  op.kind = Kind::Relabeling;
  op.measurement_map = std::move(measurement_map);
  op.outcome_maps = std::move(outcome_maps);
  return op;
}

FreeOperation FreeOperation::post_processing(
    std::vector<std::vector<std::vector<Rat>>> kernels) {
  FreeOperation op;
  op.kind = Kind::PostProcessing;
  op.context_kernels = std::move(kernels);
  return op;
}

FreeOperation FreeOperation::local_post_processing(
    const CompatibilityScenario& sc,
    const std::vector<std::vector<std::vector<Rat>>>& measurement_maps) {
  int nm = sc.n_measurements();
  int no = sc.n_outcomes();
  if (static_cast<int>(measurement_maps.size()) != nm)
    throw std::invalid_argument("local_post_processing: need one outcome map per measurement");
  for (const auto& t : measurement_maps) {
    if (static_cast<int>(t.size()) != no)
      throw std::invalid_argument("local_post_processing: outcome map has wrong shape");
    for (const auto& row : t) {
      if (static_cast<int>(row.size()) != no)
        throw std::invalid_argument("local_post_processing: outcome map has wrong shape");
      Rat total(0);
      for (const Rat& v : row) {
        if (v < 0) throw std::domain_error("local_post_processing: negative kernel entry");
        total += v;
      }
      if (total != 1)
        throw std::domain_error("local_post_processing: kernel rows must sum to 1");
    }
  }

  FreeOperation op;
  op.kind = Kind::PostProcessing;
  for (int c = 0; c < sc.n_contexts(); ++c) {
    size_t tc = sc.tuple_count(c);
    const auto& ctx = sc.contexts[c];
    std::vector<std::vector<Rat>> kernel(tc, std::vector<Rat>(tc, Rat(0)));
    for (size_t in = 0; in < tc; ++in) {
      auto s = sc.decode(c, in);
      for (size_t out = 0; out < tc; ++out) {
        auto t = sc.decode(c, out);
        Rat prod(1);
        for (size_t k = 0; k < ctx.size(); ++k)
          prod *= measurement_maps[ctx[k]][s[k]][t[k]];
        kernel[in][out] = prod;
      }
    }
    op.context_kernels.push_back(std::move(kernel));
  }
  return op;
}

FreeOperation FreeOperation::pre_processing(std::vector<std::vector<Rat>> matrix) {
  FreeOperation op;
  op.kind = Kind::PreProcessing;
  op.context_matrix = std::move(matrix);
  return op;
}

namespace {

Behavior apply_relabeling(const CompatibilityScenario& sc, const Behavior& b,
                          const FreeOperation& op) {
  int nm = sc.n_measurements();
  int no = sc.n_outcomes();
  const auto& mm = op.measurement_map;
  if (static_cast<int>(mm.size()) != nm)
    throw std::invalid_argument("relabeling: measurement map has wrong size");
  std::vector<char> seen(nm, 0);
  for (int v : mm) {
    if (v < 0 || v >= nm || seen[v])
      throw std::invalid_argument("relabeling: measurement map is not a permutation");
    seen[v] = 1;
  }
  std::vector<std::vector<int>> om = op.outcome_maps;
  if (om.empty()) om.assign(nm, {});
  if (static_cast<int>(om.size()) != nm)
    throw std::invalid_argument("relabeling: outcome map count != measurement count");
  for (auto& perm : om) {
    if (perm.empty()) {
      perm.resize(no);
      std::iota(perm.begin(), perm.end(), 0);
      continue;
    }
    if (static_cast<int>(perm.size()) != no)
      throw std::invalid_argument("relabeling: outcome permutation has wrong size");
    std::vector<char> hit(no, 0);
    for (int v : perm) {
      if (v < 0 || v >= no || hit[v])
        throw std::invalid_argument("relabeling: outcome map is not a permutation");
      hit[v] = 1;
    }
  }

  std::map<std::vector<int>, int> ctx_index;
  for (int c = 0; c < sc.n_contexts(); ++c) ctx_index[sc.contexts[c]] = c;

  Behavior out;
  out.p.assign(sc.n_contexts(), {});
  for (int c = 0; c < sc.n_contexts(); ++c) {
    const auto& src = sc.contexts[c];
    std::vector<int> img;
    img.reserve(src.size());
    for (int m : src) img.push_back(mm[m]);
    std::vector<int> sorted_img = img;
    std::sort(sorted_img.begin(), sorted_img.end());
    auto it = ctx_index.find(sorted_img);
    if (it == ctx_index.end())
      throw std::domain_error("relabeling: measurement map does not preserve contexts");
    int tc_idx = it->second;
    std::vector<size_t> pos(src.size());
    for (size_t k = 0; k < src.size(); ++k)
      pos[k] = std::lower_bound(sorted_img.begin(), sorted_img.end(), img[k]) -
               sorted_img.begin();
    out.p[tc_idx].assign(sc.tuple_count(tc_idx), Rat(0));
    for (size_t code = 0; code < sc.tuple_count(c); ++code) {
      auto s = sc.decode(c, code);
      std::vector<int> t(src.size());
      for (size_t k = 0; k < src.size(); ++k) t[pos[k]] = om[src[k]][s[k]];
      out.p[tc_idx][sc.encode(tc_idx, t)] = b.p[c][code];
    }
  }
  return out;
}

Behavior apply_post(const CompatibilityScenario& sc, const Behavior& b,
                    const FreeOperation& op) {
  if (static_cast<int>(op.context_kernels.size()) != sc.n_contexts())
    throw std::invalid_argument("post-processing: need one kernel per context");
  Behavior out;
  out.p.assign(sc.n_contexts(), {});
  for (int c = 0; c < sc.n_contexts(); ++c) {
    size_t tc = sc.tuple_count(c);
    const auto& kernel = op.context_kernels[c];
    if (kernel.size() != tc)
      throw std::invalid_argument("post-processing: kernel has wrong shape");
    for (const auto& row : kernel) {
      if (row.size() != tc)
        throw std::invalid_argument("post-processing: kernel has wrong shape");
      Rat total(0);
      for (const Rat& v : row) {
        if (v < 0) throw std::domain_error("post-processing: negative kernel entry");
        total += v;
      }
      if (total != 1)
        throw std::domain_error("post-processing: kernel rows must sum to 1");
    }
    out.p[c].assign(tc, Rat(0));
    for (size_t in = 0; in < tc; ++in) {
      if (b.p[c][in] == 0) continue;
      for (size_t o = 0; o < tc; ++o) out.p[c][o] += kernel[in][o] * b.p[c][in];
    }
  }
  return out;
}

Behavior apply_pre(const CompatibilityScenario& sc, const Behavior& b,
                   const FreeOperation& op) {
  int nc = sc.n_contexts();
  const auto& mat = op.context_matrix;
  if (static_cast<int>(mat.size()) != nc)
    throw std::invalid_argument("pre-processing: matrix must be contexts x contexts");
  for (const auto& row : mat)
    if (static_cast<int>(row.size()) != nc)
      throw std::invalid_argument("pre-processing: matrix must be contexts x contexts");
  for (int t = 0; t < nc; ++t) {
    Rat total(0);
    for (int s = 0; s < nc; ++s) {
      if (mat[t][s] < 0) throw std::domain_error("pre-processing: negative matrix entry");
      if (mat[t][s] != 0 && sc.tuple_count(t) != sc.tuple_count(s))
        throw std::invalid_argument("pre-processing: mixing contexts of different table sizes");
      total += mat[t][s];
    }
    if (total != 1) throw std::domain_error("pre-processing: matrix rows must sum to 1");
  }
  for (int s = 0; s < nc; ++s) {
    Rat col(0);
    for (int t = 0; t < nc; ++t) col += mat[t][s];
    if (col > 1)
      throw std::domain_error("pre-processing: matrix column sums must stay at most 1");
  }

  Behavior out;
  out.p.assign(nc, {});
  for (int t = 0; t < nc; ++t) {
    out.p[t].assign(sc.tuple_count(t), Rat(0));
    for (int s = 0; s < nc; ++s) {
      if (mat[t][s] == 0) continue;
      for (size_t code = 0; code < sc.tuple_count(s); ++code)
        out.p[t][code] += mat[t][s] * b.p[s][code];
    }
  }
  return out;
}

}  // namespace

Behavior apply_free_operation(const CompatibilityScenario& sc, const Behavior& b,
                              const FreeOperation& op) {
  validate_behavior(sc, b);
  Behavior out;
  switch (op.kind) {
    case FreeOperation::Kind::Relabeling: out = apply_relabeling(sc, b, op); break;
    case FreeOperation::Kind::PostProcessing: out = apply_post(sc, b, op); break;
    case FreeOperation::Kind::PreProcessing: out = apply_pre(sc, b, op); break;
  }
  validate_behavior(sc, out);
  auto bad = check_nondisturbance(sc, out, Rat(0));
  if (!bad.empty())
    throw std::domain_error("free operation output disturbs between contexts " +
                            std::to_string(bad[0].context_a) + " and " +
                            std::to_string(bad[0].context_b));
  return out;
}

namespace {

std::vector<std::string> merged_names(const std::vector<std::string>& a,
                                      const std::vector<std::string>& b) {
  std::vector<std::string> out = a;
  std::set<std::string> used(a.begin(), a.end());
  for (const auto& name : b) {
    std::string cand = name;
    while (used.count(cand)) cand += "'";
    used.insert(cand);
    out.push_back(cand);
  }
  return out;
}

void require_same_outcomes(const CompatibilityScenario& s1,
                           const CompatibilityScenario& s2, const char* who) {
  if (s1.outcomes != s2.outcomes)
    throw std::invalid_argument(std::string(who) + ": outcome label sets differ");
}

}  // namespace

ScenarioBehavior juxtapose(const CompatibilityScenario& s1, const Behavior& b1,
                           const CompatibilityScenario& s2, const Behavior& b2) {
  require_same_outcomes(s1, s2, "juxtapose");
  validate_behavior(s1, b1);
  validate_behavior(s2, b2);
  int shift = s1.n_measurements();
  std::vector<std::vector<int>> contexts = s1.contexts;
  for (const auto& ctx : s2.contexts) {
    std::vector<int> shifted;
    shifted.reserve(ctx.size());
    for (int m : ctx) shifted.push_back(m + shift);
    contexts.push_back(std::move(shifted));
  }
  ScenarioBehavior out;
  out.scenario = CompatibilityScenario::make(merged_names(s1.measurements, s2.measurements),
                                             std::move(contexts), s1.outcomes);
  out.behavior.p = b1.p;
  out.behavior.p.insert(out.behavior.p.end(), b2.p.begin(), b2.p.end());
  return out;
}

ScenarioBehavior tensor(const CompatibilityScenario& s1, const Behavior& b1,
                        const CompatibilityScenario& s2, const Behavior& b2) {
  require_same_outcomes(s1, s2, "tensor");
  validate_behavior(s1, b1);
  validate_behavior(s2, b2);
  int shift = s1.n_measurements();
  std::vector<std::vector<int>> contexts;
  Behavior joint;
  for (int c1 = 0; c1 < s1.n_contexts(); ++c1)
    for (int c2 = 0; c2 < s2.n_contexts(); ++c2) {
      std::vector<int> ctx = s1.contexts[c1];
      for (int m : s2.contexts[c2]) ctx.push_back(m + shift);
      contexts.push_back(std::move(ctx));
      size_t t2 = s2.tuple_count(c2);
      std::vector<Rat> table(b1.p[c1].size() * t2);
      for (size_t i = 0; i < b1.p[c1].size(); ++i)
        for (size_t j = 0; j < t2; ++j) table[i * t2 + j] = b1.p[c1][i] * b2.p[c2][j];
      joint.p.push_back(std::move(table));
    }
  ScenarioBehavior out;
  out.scenario = CompatibilityScenario::make(merged_names(s1.measurements, s2.measurements),
                                             std::move(contexts), s1.outcomes);
  out.behavior = std::move(joint);
  return out;
}

}  // namespace ctxq
