#pragma once

#include <cmath>

#include "dualnorm/norms.hpp"

namespace dualnorm {

/// The dual-norm program sup { z'x : Omega(z) <= 1 } recast through the log
/// barrier: minimize L_rho(z) = -z'x - rho * log(1 - Omega(z)) over the open
/// unit ball of Omega.
template <typename Scalar>
struct BarrierProblem {
  BarrierProblem(Vector<Scalar> target, NormSpec norm, Scalar barrier = Scalar(1))
      : x(std::move(target)), spec(std::move(norm)), rho(barrier) {
    if (x.size() != spec.p())
      throw DimensionMismatch("barrier problem: x has size " +
                              std::to_string(x.size()) + " but norm has p = " +
                              std::to_string(spec.p()));
    if (!x.allFinite())
      throw ValidationError("barrier problem: x has non-finite entries");
    if (!(rho > Scalar(0)))
      throw ValidationError("barrier problem: rho must be positive");
    if (!is_smooth(spec.kind()))
      throw UnsupportedNorm("barrier problem: " + to_string(spec.kind()) +
                            " has no Hessian; use analytic_dual instead");
  }

  BarrierProblem with_rho(Scalar new_rho) const {
    return BarrierProblem(x, spec, new_rho);
  }

  Vector<Scalar> x;
  NormSpec spec;
  Scalar rho;
};

/// Constraint slack upsilon(z) = 1 - Omega(z); positive iff z is strictly
/// feasible.
template <typename Scalar, typename Derived>
Scalar slack(const BarrierProblem<Scalar>& prob, const Eigen::MatrixBase<Derived>& z) {
  return Scalar(1) - norm_value(prob.spec, z);
}

/// L_rho(z) = -z'x - rho log(upsilon(z)).
template <typename Scalar, typename Derived>
Scalar lagrangian(const BarrierProblem<Scalar>& prob,
                  const Eigen::MatrixBase<Derived>& z) {
  const Scalar s = slack(prob, z);
  if (!(s > Scalar(0)))
    throw InfeasiblePoint("lagrangian: slack = " + std::to_string(static_cast<double>(s)));
  return -dot(z, prob.x) - prob.rho * std::log(s);
}

/// L_rho'(z) = -x + rho Omega'(z) / upsilon(z).
template <typename Scalar, typename Derived>
Vector<Scalar> lagrangian_gradient(const BarrierProblem<Scalar>& prob,
                                   const Eigen::MatrixBase<Derived>& z) {
  const Scalar s = slack(prob, z);
  if (!(s > Scalar(0)))
    throw InfeasiblePoint("lagrangian_gradient: slack = " +
                          std::to_string(static_cast<double>(s)));
  return (prob.rho / s) * norm_gradient(prob.spec, z) - prob.x;
}

/// L_rho''(z) = rho Omega''(z)/upsilon + rho Omega'(z)Omega'(z)'/upsilon^2.
template <typename Scalar, typename Derived>
Matrix<Scalar> lagrangian_hessian(const BarrierProblem<Scalar>& prob,
                                  const Eigen::MatrixBase<Derived>& z) {
  const Scalar s = slack(prob, z);
  if (!(s > Scalar(0)))
    throw InfeasiblePoint("lagrangian_hessian: slack = " +
                          std::to_string(static_cast<double>(s)));
  const Vector<Scalar> grad = norm_gradient(prob.spec, z);
  Matrix<Scalar> H = norm_hessian(prob.spec, z) / s;
  H.noalias() += grad * grad.transpose() / (s * s);
  return prob.rho * H;
}

/// Majorizing surrogate anchored at zhat:
///   g(z | zhat) = -z'x - rho upsilon(zhat) log(upsilon(z))
///                 + rho upsilon'(zhat)'(z - zhat),
/// with upsilon' = -Omega'. Its decrease from the anchor bounds the decrease
/// of the linear objective -z'x, which is what drives the MM iteration.
template <typename Scalar, typename DerivedZ, typename DerivedA>
Scalar surrogate_value(const BarrierProblem<Scalar>& prob,
                       const Eigen::MatrixBase<DerivedZ>& z,
                       const Eigen::MatrixBase<DerivedA>& anchor) {
  const Scalar sz = slack(prob, z);
  const Scalar sa = slack(prob, anchor);
  if (!(sz > Scalar(0)))
    throw InfeasiblePoint("surrogate_value: z has slack " +
                          std::to_string(static_cast<double>(sz)));
  if (!(sa > Scalar(0)))
    throw InfeasiblePoint("surrogate_value: anchor has slack " +
                          std::to_string(static_cast<double>(sa)));
  const Vector<Scalar> grad = norm_gradient(prob.spec, anchor);
  return -dot(z, prob.x) - prob.rho * sa * std::log(sz) -
         prob.rho * grad.dot(z - anchor);
}

/// Curvature of the surrogate at its anchor:
///   d2g = rho Omega''(zhat) + (rho / upsilon(zhat)) Omega'(zhat)Omega'(zhat)'.
/// This is the system matrix of the MM Newton step.
template <typename Scalar, typename Derived>
Matrix<Scalar> surrogate_hessian_at_anchor(const BarrierProblem<Scalar>& prob,
                                           const Eigen::MatrixBase<Derived>& anchor) {
  const Scalar s = slack(prob, anchor);
  if (!(s > Scalar(0)))
    throw InfeasiblePoint("surrogate_hessian_at_anchor: slack = " +
                          std::to_string(static_cast<double>(s)));
  const Vector<Scalar> grad = norm_gradient(prob.spec, anchor);
  Matrix<Scalar> H = prob.rho * norm_hessian(prob.spec, anchor);
  H.noalias() += (prob.rho / s) * (grad * grad.transpose());
  return H;
}

}  // namespace dualnorm
