#pragma once

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/Core>

// Test-side derivative oracles: central finite differences with the step
// scaled per coordinate, h_j = h0 * (1 + |x_j|). Kept independent of the
// library's analytic derivative code paths.
namespace testsupport {

/// Relative comparison with an absolute floor near zero.
inline bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

inline Eigen::VectorXd fd_gradient(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double h0 = 1e-6) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double h = h0 * (1.0 + std::abs(x[j]));
    Eigen::VectorXd xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    g[j] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

/// Central differences of a vector field, symmetrized; the Hessian oracle
/// when applied to a gradient.
inline Eigen::MatrixXd fd_jacobian_symmetric(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& field,
    const Eigen::VectorXd& x, double h0 = 1e-6) {
  const Eigen::Index p = x.size();
  Eigen::MatrixXd J(p, p);
  for (Eigen::Index k = 0; k < p; ++k) {
    const double h = h0 * (1.0 + std::abs(x[k]));
    Eigen::VectorXd xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    J.col(k) = (field(xp) - field(xm)) / (2.0 * h);
  }
  return 0.5 * (J + J.transpose());
}

/// Largest entrywise discrepancy relative to 1 + max magnitude.
inline double max_entry_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double scale = 1.0 + std::max(std::abs(a(i, j)), std::abs(b(i, j)));
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / scale);
    }
  return worst;
}

}  // namespace testsupport
