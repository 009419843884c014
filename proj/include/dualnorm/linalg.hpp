#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "dualnorm/errors.hpp"

namespace dualnorm {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Index = Eigen::Index;

/// Escalation policy for the symmetric positive definite solve. When the
/// plain factorization fails (or leaves a residual above `residual_tol`),
/// the solve retries with H + tau*I, tau growing geometrically from
/// `tau_min` to `tau_max` before giving up.
struct JitterPolicy {
  double tau_min = 1e-10;
  double tau_max = 1e-2;
  double growth = 10.0;
  double residual_tol = 1e-8;
  int max_refinements = 3;
};

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar dot(const Eigen::MatrixBase<DerivedA>& a,
                              const Eigen::MatrixBase<DerivedB>& b) {
  if (a.size() != b.size())
    throw DimensionMismatch("dot: vectors have sizes " +
                            std::to_string(a.size()) + " and " +
                            std::to_string(b.size()));
  return a.dot(b);
}

/// Solves H d = g for symmetric H (lower triangle referenced) via Cholesky
/// with iterative refinement. For well-conditioned positive definite H the
/// result satisfies |H d - g|_inf <= residual_tol * (1 + |g|_inf); singular
/// or near-singular systems fall back to the jittered factorization of
/// H + tau*I and satisfy the same bound against the jittered matrix.
template <typename Scalar>
Vector<Scalar> solve_spd(const Matrix<Scalar>& H, const Vector<Scalar>& g,
                         const JitterPolicy& policy = {}) {
  if (H.rows() != H.cols())
    throw DimensionMismatch("solve_spd: matrix is not square");
  if (H.rows() != g.size())
    throw DimensionMismatch("solve_spd: matrix is " + std::to_string(H.rows()) +
                            "x" + std::to_string(H.cols()) +
                            " but rhs has size " + std::to_string(g.size()));

  const Scalar g_norm = g.template lpNorm<Eigen::Infinity>();
  const Scalar strict_bound = Scalar(policy.residual_tol) * (Scalar(1) + g_norm);

  Scalar tau = Scalar(0);
  while (true) {
    Matrix<Scalar> A = H;
    if (tau > Scalar(0)) A.diagonal().array() += tau;

    Eigen::LLT<Matrix<Scalar>> llt(A);
    if (llt.info() == Eigen::Success) {
      Vector<Scalar> d = llt.solve(g);
      Vector<Scalar> residual = g - A * d;
      for (int pass = 0;
           pass < policy.max_refinements &&
           residual.template lpNorm<Eigen::Infinity>() > strict_bound;
           ++pass) {
        d += llt.solve(residual);
        residual = g - A * d;
      }
      if (d.allFinite() &&
          residual.template lpNorm<Eigen::Infinity>() <= strict_bound)
        return d;
      // A singular H cannot meet the strict bound at any jitter (the
      // residual keeps the null component of g); once the ladder is
      // exhausted, the tau_max solution is the regularized answer.
      if (d.allFinite() && tau >= Scalar(policy.tau_max)) return d;
    }

    if (tau == Scalar(0))
      tau = Scalar(policy.tau_min);
    else if (tau < Scalar(policy.tau_max))
      tau = std::min(tau * Scalar(policy.growth), Scalar(policy.tau_max));
    else
      throw NotPositiveDefinite(
          "solve_spd: factorization failed up to jitter tau = " +
          std::to_string(policy.tau_max));
  }
}

}  // namespace dualnorm
