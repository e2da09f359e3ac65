#pragma once

#include <stdexcept>
#include <vector>

#include "ctxq/rational.hpp"

namespace ctxq {

enum class Rel { LE, GE, EQ };
enum class LPStatus { Optimal, Infeasible, Unbounded };

// Minimize c.x subject to A x (<=,>=,=) b. Variables are nonnegative unless
// flagged free. Exact when T = Rat, tolerance-based when T = double.
template <typename T>
struct LPProblem {
  std::vector<T> c;
  std::vector<std::vector<T>> A;
  std::vector<Rel> rel;
  std::vector<T> b;
  std::vector<char> free_var;  // empty = all nonnegative

  int add_var(const T& cost, bool is_free = false) {
    c.push_back(cost);
    if (free_var.size() + 1 < c.size()) free_var.resize(c.size() - 1, 0);
    free_var.push_back(is_free ? 1 : 0);
    for (auto& row : A) row.resize(c.size(), T(0));
    return static_cast<int>(c.size()) - 1;
  }

  void add_row(std::vector<T> a, Rel r, T rhs) {
    if (a.size() != c.size()) throw std::invalid_argument("row length != variable count");
    A.push_back(std::move(a));
    rel.push_back(r);
    b.push_back(std::move(rhs));
  }
};

template <typename T>
struct LPSolution {
  LPStatus status = LPStatus::Infeasible;
  T objective{};
  std::vector<T> x;
  // One multiplier per row, y_i = d(optimum)/d(b_i). Filled when optimal.
  std::vector<T> y;
  // Infeasibility certificate: farkas.b > 0, farkas^T A <= 0 componentwise
  // (= 0 on free columns), sign-compatible with each row's relation.
  std::vector<T> farkas;
};

template <typename T>
LPSolution<T> solve_lp(const LPProblem<T>& prob);

extern template LPSolution<Rat> solve_lp<Rat>(const LPProblem<Rat>&);
extern template LPSolution<double> solve_lp<double>(const LPProblem<double>&);

}  // namespace ctxq
