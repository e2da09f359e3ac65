#include "ctxq/hull.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ctxq/lp.hpp"

namespace ctxq {

namespace {

void require_point(const std::vector<Rat>& x, const VPolytope& p, const char* what) {
  if (p.vertices.empty()) throw std::domain_error(std::string(what) + ": empty vertex list");
  if (x.size() != static_cast<size_t>(p.dim))
    throw std::invalid_argument(std::string(what) + ": point dimension " +
                                std::to_string(x.size()) + " != polytope dimension " +
                                std::to_string(p.dim));
}

std::vector<Rat> combine(const VPolytope& p, const std::vector<Rat>& weights) {
  std::vector<Rat> out(p.dim, Rat(0));
  for (size_t k = 0; k < p.vertices.size(); ++k) {
    if (weights[k] == 0) continue;
    for (int d = 0; d < p.dim; ++d) out[d] += weights[k] * p.vertices[k][d];
  }
  return out;
}

}  // namespace

Membership membership_in_vpolytope(const std::vector<Rat>& point, const VPolytope& p) {
  require_point(point, p, "membership_in_vpolytope");
  size_t n = p.vertices.size();

  LPProblem<Rat> feas;
  for (size_t k = 0; k < n; ++k) feas.add_var(Rat(0));
  for (int d = 0; d < p.dim; ++d) {
    std::vector<Rat> row(n);
    for (size_t k = 0; k < n; ++k) row[k] = p.vertices[k][d];
    feas.add_row(std::move(row), Rel::EQ, point[d]);
  }
  feas.add_row(std::vector<Rat>(n, Rat(1)), Rel::EQ, Rat(1));

  auto sol = solve_lp(feas);
  Membership out;
  if (sol.status == LPStatus::Optimal) {
    out.inside = true;
    out.weights = sol.x;
    return out;
  }

  // deepest cut: max u.point - t with u.v <= t on vertices and |u| <= 1
  LPProblem<Rat> cut;
  std::vector<int> u_idx;
  for (int d = 0; d < p.dim; ++d) u_idx.push_back(cut.add_var(-point[d], true));
  int t_idx = cut.add_var(Rat(1), true);
  size_t nvar = p.dim + 1;
  for (size_t k = 0; k < n; ++k) {
    std::vector<Rat> row(nvar, Rat(0));
    for (int d = 0; d < p.dim; ++d) row[u_idx[d]] = p.vertices[k][d];
    row[t_idx] = -1;
    cut.add_row(std::move(row), Rel::LE, Rat(0));
  }
  for (int d = 0; d < p.dim; ++d) {
    std::vector<Rat> lo(nvar, Rat(0)), hi(nvar, Rat(0));
    hi[u_idx[d]] = 1;
    cut.add_row(std::move(hi), Rel::LE, Rat(1));
    lo[u_idx[d]] = -1;
    cut.add_row(std::move(lo), Rel::LE, Rat(1));
  }
  auto cut_sol = solve_lp(cut);
  if (cut_sol.status != LPStatus::Optimal)
    throw std::runtime_error("separating LP did not solve");
  out.inside = false;
  out.separator_u.assign(cut_sol.x.begin(), cut_sol.x.begin() + p.dim);
  out.separator_t = cut_sol.x[t_idx];
  return out;
}

HullDistance lp_norm_distance_indexed(const std::vector<Rat>& point, const VPolytope& p,
                                      const std::vector<std::vector<size_t>>& blocks,
                                      BlockNorm within, BlockAggregate aggregate) {
  require_point(point, p, "lp_norm_distance");
  for (const auto& blk : blocks) {
    if (blk.empty()) throw std::invalid_argument("lp_norm_distance: empty block");
    for (size_t d : blk)
      if (d >= static_cast<size_t>(p.dim))
        throw std::invalid_argument("lp_norm_distance: block index out of range");
  }

  size_t n = p.vertices.size();
  LPProblem<Rat> lp;
  bool maximize_agg = aggregate == BlockAggregate::Max;
  for (size_t k = 0; k < n; ++k) lp.add_var(Rat(0));

  // residual helpers: one per block member for l1 blocks, one shared per
  // block for linf
  std::vector<std::vector<int>> helper(blocks.size());
  for (size_t bk = 0; bk < blocks.size(); ++bk) {
    if (within == BlockNorm::L1) {
      for (size_t m = 0; m < blocks[bk].size(); ++m)
        helper[bk].push_back(lp.add_var(maximize_agg ? Rat(0) : Rat(1)));
    } else {
      helper[bk].assign(blocks[bk].size(),
                        lp.add_var(maximize_agg ? Rat(0) : Rat(1)));
    }
  }
  int t_idx = maximize_agg ? lp.add_var(Rat(1)) : -1;
  size_t nvar = lp.c.size();

  for (size_t bk = 0; bk < blocks.size(); ++bk)
    for (size_t m = 0; m < blocks[bk].size(); ++m) {
      size_t d = blocks[bk][m];
      std::vector<Rat> over(nvar, Rat(0)), under(nvar, Rat(0));
      for (size_t k = 0; k < n; ++k) {
        over[k] = p.vertices[k][d];
        under[k] = p.vertices[k][d];
      }
      over[helper[bk][m]] = 1;
      lp.add_row(std::move(over), Rel::GE, point[d]);
      under[helper[bk][m]] = -1;
      lp.add_row(std::move(under), Rel::LE, point[d]);
    }
  {
    std::vector<Rat> simplex(nvar, Rat(0));
    for (size_t k = 0; k < n; ++k) simplex[k] = 1;
    lp.add_row(std::move(simplex), Rel::EQ, Rat(1));
  }
  if (maximize_agg) {
    for (size_t bk = 0; bk < blocks.size(); ++bk) {
      std::vector<Rat> row(nvar, Rat(0));
      row[t_idx] = 1;
      if (within == BlockNorm::L1)
        for (int h : helper[bk]) row[h] = -1;
      else
        row[helper[bk][0]] = -1;
      lp.add_row(std::move(row), Rel::GE, Rat(0));
    }
  }

  auto sol = solve_lp(lp);
  if (sol.status != LPStatus::Optimal)
    throw std::runtime_error("distance LP did not solve");
  HullDistance out;
  out.distance = sol.objective;
  out.weights.assign(sol.x.begin(), sol.x.begin() + n);
  out.nearest = combine(p, out.weights);
  return out;
}

HullDistance lp_norm_distance(const std::vector<Rat>& point, const VPolytope& p,
                              const std::vector<std::pair<size_t, size_t>>& blocks,
                              BlockNorm within, BlockAggregate aggregate) {
  require_point(point, p, "lp_norm_distance");
  size_t covered = 0;
  std::vector<std::vector<size_t>> lists;
  for (auto [lo, hi] : blocks) {
    if (hi <= lo || hi > static_cast<size_t>(p.dim))
      throw std::invalid_argument("lp_norm_distance: bad block range");
    covered += hi - lo;
    std::vector<size_t> blk;
    for (size_t d = lo; d < hi; ++d) blk.push_back(d);
    lists.push_back(std::move(blk));
  }
  if (covered != static_cast<size_t>(p.dim))
    throw std::invalid_argument("lp_norm_distance: blocks must partition the coordinates");
  return lp_norm_distance_indexed(point, p, lists, within, aggregate);
}

HullDistance lp_distance(const std::vector<Rat>& point, const VPolytope& p, BlockNorm norm) {
  return lp_norm_distance(point, p, {{0, static_cast<size_t>(p.dim)}}, norm,
                          BlockAggregate::Sum);
}

namespace {

struct DenseHull {
  size_t n = 0;
  int dim = 0;
  std::vector<std::vector<double>> v;  // vertex major

  explicit DenseHull(const VPolytope& p) : n(p.vertices.size()), dim(p.dim) {
    v.resize(n);
    for (size_t k = 0; k < n; ++k) {
      v[k].resize(dim);
      for (int d = 0; d < dim; ++d) v[k][d] = to_double(p.vertices[k][d]);
    }
  }

  std::vector<double> at(const std::vector<double>& weights) const {
    std::vector<double> out(dim, 0.0);
    for (size_t k = 0; k < n; ++k) {
      if (weights[k] == 0) continue;
      for (int d = 0; d < dim; ++d) out[d] += weights[k] * v[k][d];
    }
    return out;
  }

  // directional derivatives of the ambient gradient per vertex
  double score(const std::vector<double>& grad, size_t k) const {
    double s = 0;
    for (int d = 0; d < dim; ++d) s += grad[d] * v[k][d];
    return s;
  }
};

// Away-step Frank-Wolfe over the weight simplex with exact line search by
// bisection on the directional derivative.
HullMinimum frank_wolfe(const DenseHull& hull, const HullObjective& f, double gap_tol,
                        int max_iter, const char* what,
                        const std::vector<double>* warm = nullptr) {
  std::vector<double> lambda(hull.n, 0.0);
  if (warm && warm->size() == hull.n) {
    double total = 0;
    for (double w : *warm) total += std::max(0.0, w);
    if (total > 0)
      for (size_t k = 0; k < hull.n; ++k) lambda[k] = std::max(0.0, (*warm)[k]) / total;
    else
      lambda[0] = 1.0;
  } else {
    lambda[0] = 1.0;
  }
  std::vector<double> x = hull.at(lambda);
  HullMinimum out;

  for (int it = 1; it <= max_iter; ++it) {
    auto grad = f.gradient(x);
    size_t fw = 0, away = 0;
    double fw_score = 0, away_score = 0;
    bool have_fw = false, have_away = false;
    for (size_t k = 0; k < hull.n; ++k) {
      double s = hull.score(grad, k);
      if (!have_fw || s < fw_score) {
        fw_score = s;
        fw = k;
        have_fw = true;
      }
      if (lambda[k] > 0 && (!have_away || s > away_score)) {
        away_score = s;
        away = k;
        have_away = true;
      }
    }
    double at_x = 0;
    for (int d = 0; d < hull.dim; ++d) at_x += grad[d] * x[d];
    double gap = at_x - fw_score;
    if (gap <= gap_tol) {
      out.value = f.value(x);
      out.certificate_gap = gap;
      out.weights = lambda;
      out.point = x;
      out.iterations = it;
      return out;
    }

    // pick the steeper of the toward-step and the away-step
    bool use_away = have_away && lambda[away] < 1.0 - 1e-12 &&
                    (away_score - at_x) > (at_x - fw_score);
    std::vector<double> dir(hull.dim);
    double gamma_max;
    if (use_away) {
      for (int d = 0; d < hull.dim; ++d) dir[d] = x[d] - hull.v[away][d];
      gamma_max = lambda[away] / (1.0 - lambda[away]);
    } else {
      for (int d = 0; d < hull.dim; ++d) dir[d] = hull.v[fw][d] - x[d];
      gamma_max = 1.0;
    }

    auto slope = [&](double gamma) {
      std::vector<double> probe(hull.dim);
      for (int d = 0; d < hull.dim; ++d) probe[d] = x[d] + gamma * dir[d];
      auto g = f.gradient(probe);
      double s = 0;
      for (int d = 0; d < hull.dim; ++d) s += g[d] * dir[d];
      return s;
    };
    double gamma = gamma_max;
    if (slope(gamma_max) > 0) {
      double lo = 0, hi = gamma_max;
      for (int b = 0; b < 60; ++b) {
        double mid = (lo + hi) / 2;
        (slope(mid) <= 0 ? lo : hi) = mid;
      }
      gamma = (lo + hi) / 2;
    }

    if (use_away) {
      double scale = 1.0 + gamma;
      for (size_t k = 0; k < hull.n; ++k) lambda[k] *= scale;
      lambda[away] -= gamma;
      if (lambda[away] < 1e-18) lambda[away] = 0;
    } else {
      for (size_t k = 0; k < hull.n; ++k) lambda[k] *= 1.0 - gamma;
      lambda[fw] += gamma;
    }
    // renormalize drift and refresh the ambient point
    double total = 0;
    for (double w : lambda) total += w;
    for (double& w : lambda) w /= total;
    x = hull.at(lambda);
  }

  auto grad = f.gradient(x);
  double at_x = 0, best = 0;
  for (int d = 0; d < hull.dim; ++d) at_x += grad[d] * x[d];
  best = at_x;
  for (size_t k = 0; k < hull.n; ++k) best = std::min(best, hull.score(grad, k));
  throw std::runtime_error(std::string(what) + ": no convergence after " +
                           std::to_string(max_iter) +
                           " iterations, gap=" + std::to_string(at_x - best));
}

// Cutting-plane minimization for nonsmooth convex objectives. The master LP
// runs in floating point: its lower bound matches the precision of the double
// objective samples, and an exact master over double-derived cuts only piles
// up enormous rationals without adding real accuracy.
HullMinimum cutting_planes(const DenseHull& hull, const VPolytope& p, const HullObjective& f,
                           double tol, int max_iter) {
  size_t n = hull.n;
  LPProblem<double> master;
  for (size_t k = 0; k < n; ++k) master.add_var(0.0);
  int t_idx = master.add_var(1.0, true);
  {
    std::vector<double> simplex(n + 1, 1.0);
    simplex[t_idx] = 0;
    master.add_row(std::move(simplex), Rel::EQ, 1.0);
  }

  std::vector<double> lambda(n, 1.0 / static_cast<double>(n));
  HullMinimum out;
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();

  for (int it = 1; it <= max_iter; ++it) {
    auto x = hull.at(lambda);
    double fx = f.value(x);
    if (fx < ub) {
      ub = fx;
      out.value = fx;
      out.weights = lambda;
      out.point = x;
    }
    out.iterations = it;
    if (ub - lb <= tol) {
      out.certificate_gap = ub - lb;
      return out;
    }

    // cut: t >= f(x) + g.(V mu - x) for all mu
    auto grad = f.gradient(x);
    double gdotx = 0;
    for (int d = 0; d < hull.dim; ++d) gdotx += grad[d] * x[d];
    std::vector<double> row(master.c.size(), 0.0);
    for (size_t k = 0; k < n; ++k) row[k] = hull.score(grad, k);
    row[t_idx] = -1;
    master.add_row(std::move(row), Rel::LE, gdotx - fx);

    auto sol = solve_lp(master);
    if (sol.status != LPStatus::Optimal)
      throw std::runtime_error("cutting-plane master LP did not solve");
    lb = std::max(lb, sol.objective);
    double total = 0;
    for (size_t k = 0; k < n; ++k) total += (lambda[k] = std::max(0.0, sol.x[k]));
    for (double& w : lambda) w /= total;
  }
  throw std::runtime_error("cutting planes: no convergence after " +
                           std::to_string(max_iter) + " iterations, gap=" +
                           std::to_string(ub - lb));
}

}  // namespace

HullMinimum qp_distance(const std::vector<double>& point, const VPolytope& p, double gap_tol,
                        int max_iter) {
  if (p.vertices.empty()) throw std::domain_error("qp_distance: empty vertex list");
  if (point.size() != static_cast<size_t>(p.dim))
    throw std::invalid_argument("qp_distance: dimension mismatch");
  DenseHull hull(p);
  HullObjective obj;
  obj.value = [&point](const std::vector<double>& x) {
    double s = 0;
    for (size_t d = 0; d < x.size(); ++d) s += (x[d] - point[d]) * (x[d] - point[d]);
    return s / 2;
  };
  obj.gradient = [&point](const std::vector<double>& x) {
    std::vector<double> g(x.size());
    for (size_t d = 0; d < x.size(); ++d) g[d] = x[d] - point[d];
    return g;
  };
  auto res = frank_wolfe(hull, obj, gap_tol, max_iter, "qp_distance");
  res.value = std::sqrt(2 * res.value);
  return res;
}

HullMinimum minimize_convex_over_hull(const HullObjective& f, const VPolytope& p, double tol,
                                      int max_iter, const std::vector<double>* warm) {
  if (p.vertices.empty())
    throw std::domain_error("minimize_convex_over_hull: empty vertex list");
  DenseHull hull(p);
  if (f.smooth) return frank_wolfe(hull, f, tol, max_iter, "minimize_convex_over_hull", warm);
  return cutting_planes(hull, p, f, tol, max_iter);
}

HullMinimum minimax_over_hull(const std::vector<HullObjective>& parts, const VPolytope& p,
                              double tol, int max_iter) {
  if (parts.empty()) throw std::invalid_argument("minimax_over_hull: no objective parts");
  if (p.vertices.empty()) throw std::domain_error("minimax_over_hull: empty vertex list");
  DenseHull hull(p);
  if (parts.size() == 1) return frank_wolfe(hull, parts[0], tol, max_iter * 200, "minimax_over_hull");

  size_t m = parts.size();
  // min_x max_i f_i(x) = max_theta min_x sum_i theta_i f_i(x) for smooth
  // convex parts over a compact hull. Inner solves are Frank-Wolfe on the
  // weighted sum; every inner solution both bounds the optimum from below
  // (through the dual function) and supplies a linear cut on theta.
  LPProblem<double> master;
  for (size_t i = 0; i < m; ++i) master.add_var(0.0);
  int t_idx = master.add_var(-1.0, true);
  {
    std::vector<double> row(m + 1, 1.0);
    row[t_idx] = 0;
    master.add_row(std::move(row), Rel::EQ, 1.0);
  }

  std::vector<double> theta(m, 1.0 / static_cast<double>(m));
  double inner_tol = std::max(tol / 8, 1e-13);
  double lb = -std::numeric_limits<double>::infinity();
  HullMinimum out;
  out.value = std::numeric_limits<double>::infinity();
  std::vector<double> warm;

  for (int it = 1; it <= max_iter; ++it) {
    HullObjective mix;
    mix.value = [&parts, &theta](const std::vector<double>& x) {
      double s = 0;
      for (size_t i = 0; i < parts.size(); ++i)
        if (theta[i] > 0) s += theta[i] * parts[i].value(x);
      return s;
    };
    mix.gradient = [&parts, &theta](const std::vector<double>& x) {
      std::vector<double> g(x.size(), 0.0);
      for (size_t i = 0; i < parts.size(); ++i) {
        if (theta[i] <= 0) continue;
        auto gi = parts[i].gradient(x);
        for (size_t d = 0; d < g.size(); ++d) g[d] += theta[i] * gi[d];
      }
      return g;
    };
    auto inner = frank_wolfe(hull, mix, inner_tol, 200000, "minimax_over_hull inner",
                             warm.empty() ? nullptr : &warm);
    warm = inner.weights;

    std::vector<double> fvals(m);
    double primal = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < m; ++i) {
      fvals[i] = parts[i].value(inner.point);
      primal = std::max(primal, fvals[i]);
    }
    lb = std::max(lb, inner.value - inner.certificate_gap);
    if (primal < out.value) {
      out.value = primal;
      out.weights = inner.weights;
      out.point = inner.point;
    }
    out.iterations += inner.iterations;
    if (out.value - lb <= tol) {
      out.certificate_gap = out.value - lb;
      return out;
    }

    std::vector<double> row(m + 1);
    for (size_t i = 0; i < m; ++i) row[i] = -fvals[i];
    row[t_idx] = 1;
    master.add_row(std::move(row), Rel::LE, 0.0);
    auto sol = solve_lp(master);
    if (sol.status != LPStatus::Optimal)
      throw std::runtime_error("minimax_over_hull: master LP did not solve");
    double total = 0;
    for (size_t i = 0; i < m; ++i) total += (theta[i] = std::max(0.0, sol.x[i]));
    for (double& w : theta) w /= total;
  }
  throw std::runtime_error("minimax_over_hull: no convergence after " +
                           std::to_string(max_iter) + " rounds, gap=" +
                           std::to_string(out.value - lb));
}

}  // namespace ctxq
