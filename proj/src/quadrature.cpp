#include "rydsim/quadrature.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace rydsim {

namespace {

// Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix, weights are
// mu0 times the squared first eigenvector components.
GaussRule golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag, double mu0) {
  const auto n = diag.size();
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  jacobi.diagonal() = diag;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    jacobi(k, k + 1) = offdiag(k);
    jacobi(k + 1, k) = offdiag(k);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  GaussRule rule;
  rule.nodes = es.eigenvalues();
  rule.weights.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double v0 = es.eigenvectors()(0, k);
    rule.weights(k) = mu0 * v0 * v0;
  }
  return rule;
}

}  // namespace

GaussRule gauss_hermite(int order) {
  if (order < 1) throw UsageError("gauss_hermite: order must be >= 1");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
  Eigen::VectorXd off(order - 1 > 0 ? order - 1 : 0);
  for (int k = 1; k < order; ++k) off(k - 1) = std::sqrt(0.5 * k);
  return golub_welsch(diag, off, std::sqrt(pi));
}

GaussRule gauss_laguerre(int order) {
  if (order < 1) throw UsageError("gauss_laguerre: order must be >= 1");
  Eigen::VectorXd diag(order);
  Eigen::VectorXd off(order - 1 > 0 ? order - 1 : 0);
  for (int k = 0; k < order; ++k) diag(k) = 2.0 * k + 1.0;
  for (int k = 1; k < order; ++k) off(k - 1) = static_cast<double>(k);
  return golub_welsch(diag, off, 1.0);
}

double gaussian_mean(const std::function<double(double, double, double)>& f,
                     double sx, double sy, double sz, int order) {
  const GaussRule rule = gauss_hermite(order);
  const double root2 = std::sqrt(2.0);
  double total = 0.0;
  if (sz == 0.0) {
    for (int i = 0; i < order; ++i)
      for (int j = 0; j < order; ++j)
        total += rule.weights(i) * rule.weights(j) *
                 f(root2 * sx * rule.nodes(i), root2 * sy * rule.nodes(j), 0.0);
    return total / pi;
  }
  for (int i = 0; i < order; ++i) {
    const double x = root2 * sx * rule.nodes(i);
    for (int j = 0; j < order; ++j) {
      const double y = root2 * sy * rule.nodes(j);
      double inner = 0.0;
      for (int k = 0; k < order; ++k)
        inner += rule.weights(k) * f(x, y, root2 * sz * rule.nodes(k));
      total += rule.weights(i) * rule.weights(j) * inner;
    }
  }
  return total / std::pow(pi, 1.5);
}

double gaussian_mean_checked(const std::function<double(double, double, double)>& f,
                             double sx, double sy, double sz, int order, double rel_tol) {
  const double coarse = gaussian_mean(f, sx, sy, sz, order);
  const double fine = gaussian_mean(f, sx, sy, sz, 2 * order);
  if (std::abs(fine - coarse) > rel_tol * std::max(1.0, std::abs(fine)))
    throw ConvergenceError("gaussian_mean: order doubling " + std::to_string(order) + " -> " +
                           std::to_string(2 * order) + " moved the value by " +
                           std::to_string(std::abs(fine - coarse)));
  return fine;
}

}  // namespace rydsim
