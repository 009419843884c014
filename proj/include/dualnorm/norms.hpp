#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dualnorm/errors.hpp"
#include "dualnorm/groups.hpp"
#include "dualnorm/linalg.hpp"

namespace dualnorm {

enum class NormKind { L1, L2, Linf, GroupL2, OverlapGroupL2 };

constexpr bool is_group_kind(NormKind kind) {
  return kind == NormKind::GroupL2 || kind == NormKind::OverlapGroupL2;
}

/// Norms with derivatives everywhere off the group-zero set; l1 and linf are
/// value-only (their gradients are rejected, and so is barrier solving).
constexpr bool is_smooth(NormKind kind) {
  return kind == NormKind::L2 || is_group_kind(kind);
}

std::string to_string(NormKind kind);
NormKind norm_kind_from_string(const std::string& name);

/// Which norm is in play, plus the group structure for the two group kinds.
/// Construction validates the structure for the requested use, so a NormSpec
/// in hand is always internally consistent.
class NormSpec {
 public:
  static NormSpec l1(Index p) { return NormSpec(NormKind::L1, p); }
  static NormSpec l2(Index p) { return NormSpec(NormKind::L2, p); }
  static NormSpec linf(Index p) { return NormSpec(NormKind::Linf, p); }

  /// Non-overlapping group l2: groups must partition {1..p}.
  static NormSpec group_l2(GroupStructure structure);

  /// Overlap group l2: every coordinate must belong to at least one group
  /// (otherwise the Hessian is singular).
  static NormSpec overlap_group_l2(GroupStructure structure);

  NormKind kind() const { return kind_; }
  Index p() const { return p_; }
  bool has_structure() const { return structure_ != nullptr; }
  const GroupStructure& structure() const {
    if (!structure_) throw Error("norm spec: no group structure for " + to_string(kind_));
    return *structure_;
  }

 private:
  NormSpec(NormKind kind, Index p) : kind_(kind), p_(p) {
    if (p < 1) throw ValidationError("norm spec: p must be >= 1");
  }
  NormSpec(NormKind kind, GroupStructure structure)
      : kind_(kind),
        p_(structure.p()),
        structure_(std::make_shared<const GroupStructure>(std::move(structure))) {}

  NormKind kind_;
  Index p_;
  std::shared_ptr<const GroupStructure> structure_;
};

/// Parses {"kind": str, "p": int, "groups": [[...]] , "weights": [...]}.
/// `groups` is required for the group kinds and rejected otherwise;
/// `weights` is accepted only for "group_l2".
NormSpec parse_norm_spec(const std::string& json_text);

namespace detail {

template <typename Derived>
void check_dimension(const NormSpec& spec, const Eigen::MatrixBase<Derived>& x,
                     const char* op) {
  if (x.size() != spec.p())
    throw DimensionMismatch(std::string(op) + ": vector has size " +
                            std::to_string(x.size()) + " but norm has p = " +
                            std::to_string(spec.p()));
}

/// |c_g .* x_g|_2 for one group.
template <typename Derived>
typename Derived::Scalar weighted_subnorm(const GroupStructure& s, std::size_t g,
                                          const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const auto& idx = s.group(g);
  const auto& cg = s.c(g);
  Scalar sq = Scalar(0);
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const Scalar t = static_cast<Scalar>(cg[j]) * x[idx[j]];
    sq += t * t;
  }
  return std::sqrt(sq);
}

template <typename Derived>
typename Derived::Scalar subnorm(const GroupStructure& s, std::size_t g,
                                 const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const auto& idx = s.group(g);
  Scalar sq = Scalar(0);
  for (Index l : idx) sq += x[l] * x[l];
  return std::sqrt(sq);
}

}  // namespace detail

/// Omega(x).
template <typename Derived>
typename Derived::Scalar norm_value(const NormSpec& spec,
                                    const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  detail::check_dimension(spec, x, "norm_value");
  switch (spec.kind()) {
    case NormKind::L1:
      return x.cwiseAbs().sum();
    case NormKind::L2:
      return x.norm();
    case NormKind::Linf:
      return x.template lpNorm<Eigen::Infinity>();
    case NormKind::GroupL2: {
      const auto& s = spec.structure();
      Scalar total = Scalar(0);
      for (std::size_t g = 0; g < s.num_groups(); ++g)
        total += std::sqrt(static_cast<Scalar>(s.group_weight(g))) *
                 detail::subnorm(s, g, x);
      return total;
    }
    case NormKind::OverlapGroupL2: {
      const auto& s = spec.structure();
      Scalar total = Scalar(0);
      for (std::size_t g = 0; g < s.num_groups(); ++g)
        total += detail::weighted_subnorm(s, g, x);
      return total;
    }
  }
  throw Error("norm_value: unreachable");
}

/// Omega'(x). Defined only for the smooth kinds at points where every
/// required sub-vector is nonzero.
template <typename Derived>
Vector<typename Derived::Scalar> norm_gradient(const NormSpec& spec,
                                               const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  detail::check_dimension(spec, x, "norm_gradient");
  switch (spec.kind()) {
    case NormKind::L1:
    case NormKind::Linf:
      throw UnsupportedNorm("norm_gradient: " + to_string(spec.kind()) +
                            " is not differentiable");
    case NormKind::L2: {
      const Scalar n = x.norm();
      if (n == Scalar(0))
        throw NonDifferentiablePoint("norm_gradient: x = 0 for l2");
      return x / n;
    }
    case NormKind::GroupL2: {
      const auto& s = spec.structure();
      Vector<Scalar> grad = Vector<Scalar>::Zero(spec.p());
      for (std::size_t g = 0; g < s.num_groups(); ++g) {
        const Scalar n = detail::subnorm(s, g, x);
        if (n == Scalar(0))
          throw NonDifferentiablePoint("norm_gradient: group " +
                                       std::to_string(g + 1) + " sub-vector is zero");
        const Scalar scale = std::sqrt(static_cast<Scalar>(s.group_weight(g))) / n;
        for (Index l : s.group(g)) grad[l] = scale * x[l];
      }
      return grad;
    }
    case NormKind::OverlapGroupL2: {
      const auto& s = spec.structure();
      // grad_l = x_l wtilde_l^2 sum over groups containing l of 1/|c_g .* x_g|.
      Vector<Scalar> inv_sum = Vector<Scalar>::Zero(spec.p());
      for (std::size_t g = 0; g < s.num_groups(); ++g) {
        const Scalar n = detail::weighted_subnorm(s, g, x);
        if (n == Scalar(0))
          throw NonDifferentiablePoint("norm_gradient: group " +
                                       std::to_string(g + 1) +
                                       " weighted sub-vector is zero");
        for (Index l : s.group(g)) inv_sum[l] += Scalar(1) / n;
      }
      Vector<Scalar> grad(spec.p());
      for (Index l = 0; l < spec.p(); ++l) {
        const Scalar w = static_cast<Scalar>(s.coordinate_weight(l));
        grad[l] = x[l] * w * w * inv_sum[l];
      }
      return grad;
    }
  }
  throw Error("norm_gradient: unreachable");
}

/// Omega''(x), same domain as norm_gradient. Positive semidefinite.
template <typename Derived>
Matrix<typename Derived::Scalar> norm_hessian(const NormSpec& spec,
                                              const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  detail::check_dimension(spec, x, "norm_hessian");
  switch (spec.kind()) {
    case NormKind::L1:
    case NormKind::Linf:
      throw UnsupportedNorm("norm_hessian: " + to_string(spec.kind()) +
                            " is not differentiable");
    case NormKind::L2: {
      const Scalar n = x.norm();
      if (n == Scalar(0))
        throw NonDifferentiablePoint("norm_hessian: x = 0 for l2");
      Matrix<Scalar> H = Matrix<Scalar>::Identity(spec.p(), spec.p()) / n;
      H.noalias() -= (x * x.transpose()) / (n * n * n);
      return H;
    }
    case NormKind::GroupL2: {
      const auto& s = spec.structure();
      Matrix<Scalar> H = Matrix<Scalar>::Zero(spec.p(), spec.p());
      for (std::size_t g = 0; g < s.num_groups(); ++g) {
        const auto& idx = s.group(g);
        const Scalar n = detail::subnorm(s, g, x);
        if (n == Scalar(0))
          throw NonDifferentiablePoint("norm_hessian: group " +
                                       std::to_string(g + 1) + " sub-vector is zero");
        const Scalar w = std::sqrt(static_cast<Scalar>(s.group_weight(g)));
        const Scalar inv_n = w / n;
        const Scalar inv_n3 = w / (n * n * n);
        for (std::size_t a = 0; a < idx.size(); ++a) {
          H(idx[a], idx[a]) += inv_n;
          for (std::size_t b = 0; b < idx.size(); ++b)
            H(idx[a], idx[b]) -= inv_n3 * x[idx[a]] * x[idx[b]];
        }
      }
      return H;
    }
    case NormKind::OverlapGroupL2: {
      const auto& s = spec.structure();
      // Per-group Hessian of |c_g .* x_g|: diag(c^2)/n - (c^2 x)(c^2 x)'/n^3,
      // accumulated over groups; the cross term only couples coordinates that
      // share a group.
      Matrix<Scalar> H = Matrix<Scalar>::Zero(spec.p(), spec.p());
      for (std::size_t g = 0; g < s.num_groups(); ++g) {
        const auto& idx = s.group(g);
        const auto& cg = s.c(g);
        const Scalar n = detail::weighted_subnorm(s, g, x);
        if (n == Scalar(0))
          throw NonDifferentiablePoint("norm_hessian: group " +
                                       std::to_string(g + 1) +
                                       " weighted sub-vector is zero");
        const Scalar inv_n = Scalar(1) / n;
        const Scalar inv_n3 = Scalar(1) / (n * n * n);
        for (std::size_t a = 0; a < idx.size(); ++a) {
          const Scalar wa = static_cast<Scalar>(cg[a]);
          const Scalar wa2 = wa * wa;
          H(idx[a], idx[a]) += wa2 * inv_n;
          for (std::size_t b = 0; b < idx.size(); ++b) {
            const Scalar wb = static_cast<Scalar>(cg[b]);
            H(idx[a], idx[b]) -= wa2 * (wb * wb) * x[idx[a]] * x[idx[b]] * inv_n3;
          }
        }
      }
      return H;
    }
  }
  throw Error("norm_hessian: unreachable");
}

/// Closed-form dual norm where one exists: l1 <-> linf, l2 self-dual,
/// group l2 -> max_g |x_g| / sqrt(w_g).
template <typename Derived>
typename Derived::Scalar analytic_dual(const NormSpec& spec,
                                       const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  detail::check_dimension(spec, x, "analytic_dual");
  switch (spec.kind()) {
    case NormKind::L1:
      return x.template lpNorm<Eigen::Infinity>();
    case NormKind::Linf:
      return x.cwiseAbs().sum();
    case NormKind::L2:
      return x.norm();
    case NormKind::GroupL2: {
      const auto& s = spec.structure();
      Scalar best = Scalar(0);
      for (std::size_t g = 0; g < s.num_groups(); ++g)
        best = std::max(best, detail::subnorm(s, g, x) /
                                  std::sqrt(static_cast<Scalar>(s.group_weight(g))));
      return best;
    }
    case NormKind::OverlapGroupL2:
      throw NoClosedForm("analytic_dual: overlap group l2 has no closed form");
  }
  throw Error("analytic_dual: unreachable");
}

}  // namespace dualnorm
