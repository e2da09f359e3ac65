#include "ctxq/theta.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ctxq {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// nearest matrix with zeroed edge entries and unit trace
MatrixXd project_affine(MatrixXd m, const Graph& g) {
  for (auto [i, j] : g.edges) {
    m(i, j) = 0;
    m(j, i) = 0;
  }
  double shift = (m.trace() - 1.0) / static_cast<double>(g.n);
  for (int i = 0; i < g.n; ++i) m(i, i) -= shift;
  return m;
}

MatrixXd project_psd(const MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m);
  VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
}

double min_eigenvalue(const MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<MatrixXd>(m, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .minCoeff();
}

double max_eigenvalue(const MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<MatrixXd>(m, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .maxCoeff();
}

}  // namespace

ThetaResult lovasz_theta(const Graph& g, const std::vector<double>& weights) {
  if (g.n > 32) throw std::length_error("lovasz_theta supports at most 32 vertices");
  std::vector<double> w = weights.empty() ? std::vector<double>(g.n, 1.0) : weights;
  if (w.size() != static_cast<size_t>(g.n))
    throw std::invalid_argument("lovasz_theta: weight count != vertex count");
  for (double v : w)
    if (v < 0 || !std::isfinite(v)) throw std::domain_error("lovasz_theta: weights must be >= 0");

  VectorXd s(g.n);
  for (int i = 0; i < g.n; ++i) s(i) = std::sqrt(w[i]);
  MatrixXd B = s * s.transpose();

  const double relax = 1.6;
  const double res_tol = 1e-6;
  const double bracket_tol = 1e-5;
  const int max_iter = 200000;

  double rho = 1.0;
  MatrixXd Y = MatrixXd::Identity(g.n, g.n) / g.n;
  MatrixXd U = MatrixXd::Zero(g.n, g.n);
  MatrixXd X = Y;

  ThetaResult out;
  out.lower = 0;
  out.upper = std::numeric_limits<double>::infinity();

  auto refresh_bounds = [&]() {
    // feasible primal: zero the edges of the PSD iterate, repair, renormalize
    MatrixXd Z = Y;
    for (auto [i, j] : g.edges) {
      Z(i, j) = 0;
      Z(j, i) = 0;
    }
    double lift = std::max(0.0, -min_eigenvalue(Z));
    Z += lift * MatrixXd::Identity(g.n, g.n);
    double tr = Z.trace();
    if (tr > 1e-12) out.lower = std::max(out.lower, (B.cwiseProduct(Z)).sum() / tr);

    // dual candidate: B with edge entries replaced from the running multiplier
    MatrixXd N = B;
    MatrixXd W = rho * U;
    for (auto [i, j] : g.edges) {
      double e = (W(i, j) + W(j, i)) / 2;
      N(i, j) = e;
      N(j, i) = e;
    }
    out.upper = std::min(out.upper, max_eigenvalue(N));
  };

  for (int it = 1; it <= max_iter; ++it) {
    X = project_affine(Y - U + B / rho, g);
    MatrixXd X_hat = relax * X + (1.0 - relax) * Y;
    MatrixXd Y_prev = Y;
    Y = project_psd(X_hat + U);
    U += X_hat - Y;

    double primal_res = (X - Y).norm();
    double dual_res = rho * (Y - Y_prev).norm();
    out.iterations = it;

    if (it % 20 == 0 || (primal_res < res_tol && dual_res < res_tol)) {
      refresh_bounds();
      if (primal_res < res_tol && dual_res < res_tol &&
          out.upper - out.lower < bracket_tol) {
        out.value = (out.lower + out.upper) / 2;
        return out;
      }
    }
    if (it % 25 == 0) {
      if (primal_res > 10 * dual_res) {
        rho *= 2;
        U /= 2;
      } else if (dual_res > 10 * primal_res) {
        rho /= 2;
        U *= 2;
      }
    }
  }

  refresh_bounds();
  throw std::runtime_error(
      "lovasz_theta: no convergence after " + std::to_string(max_iter) +
      " iterations (bracket " + std::to_string(out.lower) + ".." +
      std::to_string(out.upper) + ", primal residual " +
      std::to_string((X - Y).norm()) + ")");
}

}  // namespace ctxq
