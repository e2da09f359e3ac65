#include "ctxq/lp.hpp"

#include <cmath>
#include <cstddef>
#include <utility>

namespace ctxq {

namespace {

template <typename T>
struct Tol;

template <>
struct Tol<Rat> {
  static bool zero(const Rat& v) { return v == 0; }
  static bool neg(const Rat& v) { return v < 0; }
  static bool pos(const Rat& v) { return v > 0; }
};

template <>
struct Tol<double> {
  static constexpr double eps = 1e-9;
  static bool zero(double v) { return std::fabs(v) < eps; }
  static bool neg(double v) { return v < -eps; }
  static bool pos(double v) { return v > eps; }
};

// Dense two-phase tableau simplex with Bland's rule. Artificial columns are
// retained (barred from entering) so row multipliers can be read back from
// their reduced costs.
template <typename T>
class Simplex {
 public:
  explicit Simplex(const LPProblem<T>& prob) : prob_(prob) { build(); }

  LPSolution<T> run() {
    LPSolution<T> out;
    phase_one();
    if (Tol<T>::pos(value())) {
      out.status = LPStatus::Infeasible;
      out.farkas = read_multipliers(true);
      return out;
    }
    drive_out_artificials();
    if (!phase_two()) {
      out.status = LPStatus::Unbounded;
      return out;
    }
    out.status = LPStatus::Optimal;
    out.objective = value();
    out.x = read_primal();
    out.y = read_multipliers(false);
    return out;
  }

 private:
  void build() {
    const size_t nvar = prob_.c.size();
    for (const auto& row : prob_.A)
      if (row.size() != nvar) throw std::invalid_argument("LP row length mismatch");
    if (prob_.b.size() != prob_.A.size() || prob_.rel.size() != prob_.A.size())
      throw std::invalid_argument("LP row/rhs/relation count mismatch");
    if (!prob_.free_var.empty() && prob_.free_var.size() != nvar)
      throw std::invalid_argument("LP free_var length mismatch");

    for (size_t j = 0; j < nvar; ++j) {
      cols_.push_back({static_cast<int>(j), 1});
      if (!prob_.free_var.empty() && prob_.free_var[j]) cols_.push_back({static_cast<int>(j), -1});
    }
    nstruct_ = cols_.size();

    m_ = prob_.A.size();
    std::vector<std::vector<T>> rows(m_);
    std::vector<T> rhs(m_);
    rel_.resize(m_);
    row_sign_.assign(m_, 1);
    for (size_t i = 0; i < m_; ++i) {
      rows[i].resize(nstruct_);
      for (size_t k = 0; k < nstruct_; ++k)
        rows[i][k] = T(cols_[k].second) * prob_.A[i][cols_[k].first];
      rhs[i] = prob_.b[i];
      rel_[i] = prob_.rel[i];
      if (Tol<T>::neg(rhs[i])) {
        row_sign_[i] = -1;
        rhs[i] = -rhs[i];
        for (auto& v : rows[i]) v = -v;
        if (rel_[i] == Rel::LE)
          rel_[i] = Rel::GE;
        else if (rel_[i] == Rel::GE)
          rel_[i] = Rel::LE;
      }
    }

    size_t nslack = 0, nart = 0;
    for (size_t i = 0; i < m_; ++i) {
      if (rel_[i] != Rel::EQ) ++nslack;
      if (rel_[i] != Rel::LE) ++nart;
    }
    art_begin_ = nstruct_ + nslack;
    ncols_ = art_begin_ + nart;

    tab_.assign(m_, std::vector<T>(ncols_ + 1, T(0)));
    basis_.resize(m_);
    readout_.resize(m_);
    size_t slack_at = nstruct_, art_at = art_begin_;
    for (size_t i = 0; i < m_; ++i) {
      for (size_t k = 0; k < nstruct_; ++k) tab_[i][k] = rows[i][k];
      tab_[i][ncols_] = rhs[i];
      if (rel_[i] == Rel::LE) {
        tab_[i][slack_at] = T(1);
        basis_[i] = static_cast<int>(slack_at);
        readout_[i] = static_cast<int>(slack_at);
        ++slack_at;
      } else if (rel_[i] == Rel::GE) {
        tab_[i][slack_at] = T(-1);
        ++slack_at;
        tab_[i][art_at] = T(1);
        basis_[i] = static_cast<int>(art_at);
        readout_[i] = static_cast<int>(art_at);
        ++art_at;
      } else {
        tab_[i][art_at] = T(1);
        basis_[i] = static_cast<int>(art_at);
        readout_[i] = static_cast<int>(art_at);
        ++art_at;
      }
    }
  }

  T value() const { return -z_[ncols_]; }

  void reprice(const std::vector<T>& cost) {
    z_.assign(ncols_ + 1, T(0));
    for (size_t j = 0; j < ncols_; ++j) z_[j] = cost[j];
    for (size_t i = 0; i < m_; ++i) {
      const T& cb = cost[basis_[i]];
      if (Tol<T>::zero(cb)) continue;
      for (size_t j = 0; j <= ncols_; ++j) z_[j] -= cb * tab_[i][j];
    }
  }

  void pivot(size_t r, size_t c) {
    T p = tab_[r][c];
    for (size_t j = 0; j <= ncols_; ++j) tab_[r][j] /= p;
    for (size_t i = 0; i < m_; ++i) {
      if (i == r || Tol<T>::zero(tab_[i][c])) continue;
      T f = tab_[i][c];
      for (size_t j = 0; j <= ncols_; ++j) tab_[i][j] -= f * tab_[r][j];
    }
    if (!Tol<T>::zero(z_[c])) {
      T f = z_[c];
      for (size_t j = 0; j <= ncols_; ++j) z_[j] -= f * tab_[r][j];
    }
    basis_[r] = static_cast<int>(c);
  }

  // Bland: smallest eligible entering column, leaving ties by smallest basis
  // index. Returns false on unboundedness.
  bool iterate() {
    for (;;) {
      size_t enter = ncols_;
      for (size_t j = 0; j < art_begin_; ++j) {
        if (Tol<T>::neg(z_[j])) {
          enter = j;
          break;
        }
      }
      if (enter == ncols_) return true;
      size_t leave = m_;
      T best{};
      for (size_t i = 0; i < m_; ++i) {
        if (!Tol<T>::pos(tab_[i][enter])) continue;
        T rhs = tab_[i][ncols_];
        if (Tol<T>::neg(rhs)) rhs = T(0);
        T ratio = rhs / tab_[i][enter];
        if (leave == m_ || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
  }

  void phase_one() {
    std::vector<T> cost(ncols_, T(0));
    for (size_t j = art_begin_; j < ncols_; ++j) cost[j] = T(1);
    phase_cost_ = cost;
    reprice(cost);
    iterate();  // bounded below by zero, cannot report unbounded
  }

  void drive_out_artificials() {
    for (size_t i = 0; i < m_; ++i) {
      if (static_cast<size_t>(basis_[i]) < art_begin_) continue;
      for (size_t j = 0; j < art_begin_; ++j) {
        if (!Tol<T>::zero(tab_[i][j])) {
          pivot(i, j);
          break;
        }
      }
      // A fully zero row is redundant; its artificial stays basic at zero and
      // the row never pivots again.
    }
  }

  bool phase_two() {
    std::vector<T> cost(ncols_, T(0));
    for (size_t k = 0; k < nstruct_; ++k) cost[k] = T(cols_[k].second) * prob_.c[cols_[k].first];
    phase_cost_ = cost;
    reprice(cost);
    return iterate();
  }

  std::vector<T> read_primal() const {
    std::vector<T> x(prob_.c.size(), T(0));
    for (size_t i = 0; i < m_; ++i) {
      if (static_cast<size_t>(basis_[i]) < nstruct_) {
        const auto& [var, sign] = cols_[basis_[i]];
        x[var] += T(sign) * tab_[i][ncols_];
      }
    }
    return x;
  }

  // y_i = cost(readout column) - reduced cost(readout column), unflipped to
  // the caller's row orientation.
  std::vector<T> read_multipliers(bool /*phase1*/) const {
    std::vector<T> y(m_);
    for (size_t i = 0; i < m_; ++i) {
      T yi = phase_cost_[readout_[i]] - z_[readout_[i]];
      y[i] = T(row_sign_[i]) * yi;
    }
    return y;
  }

  const LPProblem<T>& prob_;
  std::vector<std::pair<int, int>> cols_;  // structural column -> (variable, sign)
  size_t nstruct_ = 0, m_ = 0, ncols_ = 0, art_begin_ = 0;
  std::vector<Rel> rel_;
  std::vector<int> row_sign_;
  std::vector<std::vector<T>> tab_;
  std::vector<T> z_;
  std::vector<T> phase_cost_;
  std::vector<int> basis_;
  std::vector<int> readout_;
};

}  // namespace

template <typename T>
LPSolution<T> solve_lp(const LPProblem<T>& prob) {
  Simplex<T> s(prob);
  return s.run();
}

template LPSolution<Rat> solve_lp<Rat>(const LPProblem<Rat>&);
template LPSolution<double> solve_lp<double>(const LPProblem<double>&);

}  // namespace ctxq
