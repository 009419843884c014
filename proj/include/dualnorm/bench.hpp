#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "dualnorm/norms.hpp"
#include "dualnorm/solver.hpp"

namespace dualnorm {

/// Grid of dual-norm evaluations on random Gaussian targets. l2 plans vary
/// the dimension p directly; group plans vary (group size, group count).
struct ExperimentPlan {
  NormKind kind = NormKind::L2;
  int replications = 50;
  std::vector<int> p_grid;           // l2 plans
  std::vector<int> group_size_grid;  // group plans
  std::vector<int> group_count_grid;
  std::uint64_t seed = 0;
  SolverConfig solver;
  std::vector<double> rho_schedule = default_continuation_schedule();

  void validate() const;
};

/// {"norm": str, "n": int, "p": [int...] | "group_sizes": [...] +
///  "group_counts": [...], "seed": int, "rho_final": number}.
ExperimentPlan parse_experiment_plan(const std::string& json_text);

enum class ReferenceKind { None, Analytic, Oracle, Newton };

std::string to_string(ReferenceKind kind);

struct ExperimentRecord {
  int cell = 0;         // index into the plan's grid, canonical order
  int replication = 0;  // 0-based
  Index p = 0;
  int group_size = 0;   // 0 for non-group plans
  int group_count = 0;
  ReferenceKind reference_kind = ReferenceKind::None;
  double reference = std::numeric_limits<double>::quiet_NaN();
  double dual_value = 0;
  double difference = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  double wall_time_s = 0;
  bool converged = false;

  std::string cell_label() const;
};

/// Runs the plan. Targets are drawn with i.i.d. standard normal entries from
/// counter-based streams keyed by (seed, cell, replication), so the records
/// are deterministic for a given plan regardless of threading. Replications
/// run in parallel up to the DUALNORM_THREADS cap; the returned order is
/// always (cell, replication). References: analytic dual where closed forms
/// exist, brute force at p <= 4 for the overlap norm, and the plain-Newton
/// baseline otherwise.
std::vector<ExperimentRecord> run_benchmark(const ExperimentPlan& plan);

/// Header row plus one RFC-4180 row per record.
void emit_csv(const std::vector<ExperimentRecord>& records, const std::string& path);

/// One box of `difference` per grid cell.
void emit_boxplot_svg(const std::vector<ExperimentRecord>& records,
                      const std::string& path);

/// Norm over a coordinate subset: groups are intersected with the kept
/// coordinates and renumbered; group weights (and the overlap's coordinate
/// weights) carry over from the full structure.
NormSpec restrict_to(const NormSpec& spec, const std::vector<Index>& coords);

/// Entries of Omega'(x_star) at the support coordinates, requiring only the
/// sub-norms that those entries touch to be nonzero (groups disjoint from
/// the support may vanish).
Eigen::VectorXd support_gradient(const NormSpec& spec, const Eigen::VectorXd& x_star,
                                 const std::vector<Index>& support);

struct IrrepresentableReport {
  double dual_value = 0;
  bool holds = false;  // dual_value < 1
  Eigen::VectorXd v;   // A0' A1 (A1'A1)^-1 r1
  std::vector<Index> support;     // 0-based, sorted
  std::vector<Index> complement;  // 0-based, sorted
  SolveResult<double> solve;
};

/// Irrepresentable-condition check: partitions the design's columns into the
/// support block A1 and the rest A0, forms v = A0' A1 (A1'A1)^-1 r1 with
/// r1 the support entries of Omega'(x_star), and evaluates the dual norm of
/// v under the spec restricted to the complement coordinates.
IrrepresentableReport irrepresentable_dual(
    const Eigen::MatrixXd& A, const std::vector<Index>& support,
    const NormSpec& spec, const Eigen::VectorXd& x_star,
    const SolverConfig& cfg = {},
    const std::vector<double>& rho_schedule = default_continuation_schedule());

}  // namespace dualnorm
