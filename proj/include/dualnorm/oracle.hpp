#pragma once

#include <algorithm>
#include <cstdint>

#include "dualnorm/norms.hpp"
#include "dualnorm/rng.hpp"

namespace dualnorm {

struct OracleConfig {
  std::int64_t n_samples = 200000;
  int polish_steps = 50;
  std::uint64_t seed = 0;

  void validate() const {
    if (n_samples < 1) throw ValidationError("oracle config: n_samples must be >= 1");
    if (polish_steps < 0) throw ValidationError("oracle config: polish_steps must be >= 0");
  }
};

/// Brute-force dual norm for small p: samples directions on the sphere,
/// rescales each onto the unit-ball boundary z = u / Omega(u) (exact by
/// homogeneity), takes the best x'z, then polishes by cyclic coordinate
/// perturbation with a shrinking step, re-projecting onto the boundary after
/// every move. Touches only norm_value, so it is independent of the
/// derivative and solver code paths, and converges to Omega*(x) from below.
template <typename Scalar>
Scalar brute_force_dual(const NormSpec& spec, const Vector<Scalar>& x,
                        const OracleConfig& cfg = {}) {
  cfg.validate();
  detail::check_dimension(spec, x, "brute_force_dual");
  const Index p = spec.p();
  if (p > 8)
    throw DimensionTooLarge("brute_force_dual: p = " + std::to_string(p) +
                            " exceeds the sampling guard (8)");
  if (x.template lpNorm<Eigen::Infinity>() == Scalar(0)) return Scalar(0);

  Vector<Scalar> best = Vector<Scalar>::Zero(p);
  Scalar best_value = -std::numeric_limits<Scalar>::infinity();

  const auto consider = [&](const Vector<Scalar>& direction) {
    const Scalar omega = norm_value(spec, direction);
    if (!(omega > Scalar(0))) return;
    const Vector<Scalar> z = direction / omega;
    const Scalar value = z.dot(x);
    if (value > best_value) {
      best_value = value;
      best = z;
    }
  };

  // Per-sample streams keyed by the sample index: draws are reproducible for
  // a given seed no matter how the loop is scheduled.
  Vector<Scalar> u(p);
  for (std::int64_t i = 0; i < cfg.n_samples; ++i) {
    CounterRng rng(cfg.seed, static_cast<std::uint64_t>(i));
    for (Index j = 0; j < p; ++j) u[j] = Scalar(rng.next_normal());
    consider(u);
  }

  Scalar step = Scalar(0.5);
  for (int pass = 0; pass < cfg.polish_steps; ++pass) {
    for (Index j = 0; j < p; ++j) {
      for (const Scalar sign : {Scalar(1), Scalar(-1)}) {
        Vector<Scalar> candidate = best;
        candidate[j] += sign * step;
        consider(candidate);
      }
    }
    step *= Scalar(0.75);
  }

  return best_value;
}

}  // namespace dualnorm
