#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "dualnorm/barrier.hpp"
#include "dualnorm/linalg.hpp"

namespace dualnorm {

struct SolverConfig {
  double eps = 1e-8;            // stop when |L(z_k) - L(z_{k-1})| <= eps
  int maxiter = 1000;           // outer iteration cap
  int inner_steps = 1;          // Newton updates per outer cycle
  double step_length = 1.0;     // nominal gamma
  double backtrack_factor = 0.5;
  int backtrack_cap = 60;
  double rho = 1.0;             // barrier constant for single-stage solves
  double init_shrink = 0.5;     // c0: z0 = c0 x / Omega(x)
  JitterPolicy jitter;

  void validate() const {
    if (!(eps > 0)) throw ValidationError("solver config: eps must be positive");
    if (maxiter < 1) throw ValidationError("solver config: maxiter must be >= 1");
    if (inner_steps < 1) throw ValidationError("solver config: inner_steps must be >= 1");
    if (!(step_length > 0)) throw ValidationError("solver config: step_length must be positive");
    if (!(backtrack_factor > 0 && backtrack_factor < 1))
      throw ValidationError("solver config: backtrack_factor must lie in (0,1)");
    if (backtrack_cap < 0) throw ValidationError("solver config: backtrack_cap must be >= 0");
    if (!(rho > 0)) throw ValidationError("solver config: rho must be positive");
    if (!(init_shrink > 0 && init_shrink < 1))
      throw ValidationError("solver config: init_shrink must lie in (0,1)");
  }
};

enum class TerminationReason { ToleranceMet, MaxIter, LineSearchStall };

inline std::string to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::ToleranceMet: return "tolerance_met";
    case TerminationReason::MaxIter: return "max_iter";
    case TerminationReason::LineSearchStall: return "line_search_stall";
  }
  return "?";
}

template <typename Scalar>
struct SolveResult {
  Vector<Scalar> z_star;
  Scalar dual_value = Scalar(0);        // x' z_star
  int iterations = 0;                   // outer iterations taken
  std::vector<Scalar> objective_trace;  // L_rho per outer iterate, nonincreasing
  bool converged = false;
  TerminationReason termination_reason = TerminationReason::MaxIter;

  // Diagnostics.
  Scalar final_gradient_norm = std::numeric_limits<Scalar>::quiet_NaN();
  Scalar min_slack = std::numeric_limits<Scalar>::infinity();
  bool init_perturbed = false;
  std::vector<Scalar> stage_dual_values;  // one per continuation stage
};

/// Strictly feasible differentiable starting point z0 = c0 x / Omega(x)
/// (slack 1 - c0, positively aligned with x). For group kinds, coordinates of
/// x that are exactly zero are first nudged by 1e-8 |x|_inf so that no group
/// sub-vector vanishes; `perturbed`, when non-null, reports whether that
/// happened. Throws ZeroInput for x = 0.
template <typename Scalar>
Vector<Scalar> initialize(const BarrierProblem<Scalar>& prob, const SolverConfig& cfg,
                          bool* perturbed = nullptr) {
  cfg.validate();
  if (perturbed) *perturbed = false;
  Vector<Scalar> direction = prob.x;
  const Scalar xmax = direction.template lpNorm<Eigen::Infinity>();
  if (xmax == Scalar(0)) throw ZeroInput("initialize: x = 0, dual value is 0");

  if (is_group_kind(prob.spec.kind())) {
    const Scalar nudge = Scalar(1e-8) * xmax;
    for (Index l = 0; l < direction.size(); ++l) {
      if (direction[l] == Scalar(0)) {
        direction[l] = nudge;
        if (perturbed) *perturbed = true;
      }
    }
  }

  return (Scalar(cfg.init_shrink) / norm_value(prob.spec, direction)) * direction;
}

namespace detail {

/// Backtracking step z - gamma_eff * d: gamma_eff is the largest
/// gamma * factor^m (m <= cap) whose point is strictly feasible and does not
/// increase the Lagrangian. Throws LineSearchStall when no m qualifies.
template <typename Scalar>
Vector<Scalar> backtrack(const BarrierProblem<Scalar>& prob, const SolverConfig& cfg,
                         const Vector<Scalar>& z, const Vector<Scalar>& d,
                         Scalar objective_at_z) {
  Scalar gamma = Scalar(cfg.step_length);
  for (int m = 0; m <= cfg.backtrack_cap; ++m) {
    Vector<Scalar> candidate = z - gamma * d;
    const Scalar s = slack(prob, candidate);
    if (s > Scalar(0) && candidate.allFinite()) {
      const Scalar value = -dot(candidate, prob.x) - prob.rho * std::log(s);
      if (value <= objective_at_z) return candidate;
    }
    gamma *= Scalar(cfg.backtrack_factor);
  }
  throw LineSearchStall("line search: no feasible descent step within " +
                        std::to_string(cfg.backtrack_cap) + " halvings");
}

}  // namespace detail

/// One MM step: Newton update on the surrogate anchored at z_k, i.e.
/// direction d solving [rho Omega'' + (rho/upsilon) Omega' Omega''] d = -x,
/// followed by the feasibility-preserving backtracking line search.
template <typename Scalar>
Vector<Scalar> mm_newton_step(const BarrierProblem<Scalar>& prob,
                              const Vector<Scalar>& z_k, const SolverConfig& cfg) {
  const Matrix<Scalar> H = surrogate_hessian_at_anchor(prob, z_k);
  const Vector<Scalar> d = solve_spd<Scalar>(H, -prob.x, cfg.jitter);
  return detail::backtrack(prob, cfg, z_k, d, lagrangian(prob, z_k));
}

/// One damped Newton step on the barrier Lagrangian itself.
template <typename Scalar>
Vector<Scalar> newton_step(const BarrierProblem<Scalar>& prob,
                           const Vector<Scalar>& z_k, const SolverConfig& cfg) {
  const Matrix<Scalar> H = lagrangian_hessian(prob, z_k);
  const Vector<Scalar> d = solve_spd<Scalar>(H, lagrangian_gradient(prob, z_k), cfg.jitter);
  return detail::backtrack(prob, cfg, z_k, d, lagrangian(prob, z_k));
}

enum class SolveMethod { MM, Newton };

namespace detail {

template <typename Scalar>
SolveResult<Scalar> finish(const BarrierProblem<Scalar>& prob, SolveResult<Scalar> result) {
  result.dual_value = dot(prob.x, result.z_star);
  try {
    result.final_gradient_norm = lagrangian_gradient(prob, result.z_star).norm();
  } catch (const Error&) {
    // Gradient undefined at the final iterate; leave the diagnostic as NaN.
  }
  return result;
}

template <typename Scalar>
SolveResult<Scalar> solve_loop(const BarrierProblem<Scalar>& prob,
                               const SolverConfig& cfg, Vector<Scalar> z,
                               SolveMethod method, bool init_perturbed) {
  SolveResult<Scalar> result;
  result.init_perturbed = init_perturbed;
  result.objective_trace.push_back(lagrangian(prob, z));
  result.min_slack = slack(prob, z);
  result.termination_reason = TerminationReason::MaxIter;

  for (int k = 1; k <= cfg.maxiter; ++k) {
    bool stalled = false;
    for (int j = 0; j < cfg.inner_steps && !stalled; ++j) {
      try {
        z = method == SolveMethod::MM ? mm_newton_step(prob, z, cfg)
                                      : newton_step(prob, z, cfg);
        result.min_slack = std::min(result.min_slack, slack(prob, z));
      } catch (const LineSearchStall&) {
        stalled = true;
      } catch (const NonDifferentiablePoint&) {
        stalled = true;
      }
    }
    result.iterations = k;
    result.objective_trace.push_back(lagrangian(prob, z));
    if (stalled) {
      result.termination_reason = TerminationReason::LineSearchStall;
      break;
    }
    const std::size_t n = result.objective_trace.size();
    // Algorithm's while-condition needs two completed iterations before the
    // objective-change test is meaningful.
    if (k >= 2 && std::abs(result.objective_trace[n - 1] -
                           result.objective_trace[n - 2]) <= Scalar(cfg.eps)) {
      result.termination_reason = TerminationReason::ToleranceMet;
      break;
    }
  }

  result.converged = result.termination_reason == TerminationReason::ToleranceMet;
  result.z_star = std::move(z);
  return finish(prob, std::move(result));
}

template <typename Scalar>
SolveResult<Scalar> zero_input_result(const BarrierProblem<Scalar>& prob) {
  SolveResult<Scalar> result;
  result.z_star = Vector<Scalar>::Zero(prob.x.size());
  result.dual_value = Scalar(0);
  result.objective_trace = {Scalar(0)};
  result.converged = true;
  result.termination_reason = TerminationReason::ToleranceMet;
  result.min_slack = Scalar(1);
  return result;
}

}  // namespace detail

/// MM adaptive-barrier solve at fixed rho = cfg.rho. Returns the optimizer,
/// the dual value x' z_star (biased O(rho) toward the interior), the
/// objective trace and the termination status. x = 0 short-circuits to 0.
template <typename Scalar>
SolveResult<Scalar> solve_dual(const BarrierProblem<Scalar>& prob,
                               const SolverConfig& cfg = {}) {
  cfg.validate();
  const BarrierProblem<Scalar> staged = prob.with_rho(Scalar(cfg.rho));
  if (staged.x.template lpNorm<Eigen::Infinity>() == Scalar(0))
    return detail::zero_input_result(staged);
  bool perturbed = false;
  Vector<Scalar> z0 = initialize(staged, cfg, &perturbed);
  return detail::solve_loop(staged, cfg, std::move(z0), SolveMethod::MM, perturbed);
}

/// Fixed-rho Newton baseline with the same line search; used to cross-check
/// the MM path.
template <typename Scalar>
SolveResult<Scalar> newton_solve(const BarrierProblem<Scalar>& prob,
                                 const SolverConfig& cfg = {}) {
  cfg.validate();
  const BarrierProblem<Scalar> staged = prob.with_rho(Scalar(cfg.rho));
  if (staged.x.template lpNorm<Eigen::Infinity>() == Scalar(0))
    return detail::zero_input_result(staged);
  bool perturbed = false;
  Vector<Scalar> z0 = initialize(staged, cfg, &perturbed);
  return detail::solve_loop(staged, cfg, std::move(z0), SolveMethod::Newton, perturbed);
}

/// Default barrier continuation: 10 down to 1e-6 by factors of 10.
inline std::vector<double> default_continuation_schedule() {
  return {1e1, 1e0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
}

/// Warm-started continuation over a decreasing barrier schedule. The final
/// dual value carries O(rho_final) bias only. The returned trace and
/// termination state describe the last stage; `iterations` counts all stages
/// and `stage_dual_values` records the (nondecreasing) per-stage values.
template <typename Scalar>
SolveResult<Scalar> solve_dual_continuation(
    const BarrierProblem<Scalar>& prob, const SolverConfig& cfg = {},
    const std::vector<double>& rho_schedule = default_continuation_schedule(),
    SolveMethod method = SolveMethod::MM) {
  cfg.validate();
  if (rho_schedule.empty())
    throw ValidationError("continuation: empty rho schedule");
  for (std::size_t i = 0; i < rho_schedule.size(); ++i) {
    if (!(rho_schedule[i] > 0) || !std::isfinite(rho_schedule[i]))
      throw ValidationError("continuation: rho values must be positive finite");
    if (i > 0 && !(rho_schedule[i] < rho_schedule[i - 1]))
      throw ValidationError("continuation: rho schedule must be strictly decreasing");
  }

  if (prob.x.template lpNorm<Eigen::Infinity>() == Scalar(0))
    return detail::zero_input_result(prob);

  SolveResult<Scalar> result;
  std::vector<Scalar> stage_values;
  int total_iterations = 0;
  bool have_warm_start = false;
  Vector<Scalar> warm;
  bool init_perturbed = false;

  for (double rho : rho_schedule) {
    SolverConfig stage_cfg = cfg;
    stage_cfg.rho = rho;
    const BarrierProblem<Scalar> staged = prob.with_rho(Scalar(rho));

    Vector<Scalar> z0;
    bool stage_perturbed = false;
    if (have_warm_start) {
      z0 = warm;
    } else {
      z0 = initialize(staged, stage_cfg, &stage_perturbed);
      init_perturbed = stage_perturbed;
    }

    result = detail::solve_loop(staged, stage_cfg, std::move(z0), method,
                                init_perturbed);
    total_iterations += result.iterations;
    stage_values.push_back(result.dual_value);
    warm = result.z_star;
    have_warm_start = true;
  }

  result.iterations = total_iterations;
  result.stage_dual_values = std::move(stage_values);
  return result;
}

}  // namespace dualnorm
