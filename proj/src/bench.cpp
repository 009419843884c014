#include "dualnorm/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <Eigen/LU>
#include <json.hpp>

#include "dualnorm/io.hpp"
#include "dualnorm/oracle.hpp"
#include "dualnorm/rng.hpp"

namespace dualnorm {

void ExperimentPlan::validate() const {
  if (replications < 1)
    throw ValidationError("plan: replications must be >= 1");
  if (!is_smooth(kind))
    throw ValidationError("plan: the benchmark solves barrier problems; "
                          "norm kind must be l2, group_l2 or overlap_group_l2");
  if (kind == NormKind::L2) {
    if (p_grid.empty()) throw ValidationError("plan: l2 plans need a nonempty p grid");
    for (int p : p_grid)
      if (p < 1) throw ValidationError("plan: p grid entries must be >= 1");
  } else {
    if (group_size_grid.empty() || group_count_grid.empty())
      throw ValidationError("plan: group plans need nonempty size and count grids");
    for (int s : group_size_grid)
      if (s < 1) throw ValidationError("plan: group sizes must be >= 1");
    for (int c : group_count_grid)
      if (c < 1) throw ValidationError("plan: group counts must be >= 1");
  }
  solver.validate();
}

namespace {

std::vector<double> schedule_down_to(double rho_final) {
  if (!(rho_final > 0))
    throw ValidationError("plan: rho_final must be positive");
  std::vector<double> schedule;
  double rho = 10.0;
  while (rho > rho_final * (1 + 1e-12)) {
    schedule.push_back(rho);
    rho *= 0.1;
  }
  schedule.push_back(rho_final);
  return schedule;
}

}  // namespace

ExperimentPlan parse_experiment_plan(const std::string& json_text) {
  nlohmann::json doc = nlohmann::json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) throw ValidationError("plan: malformed JSON");
  if (!doc.is_object()) throw ValidationError("plan: expected a JSON object");

  ExperimentPlan plan;
  for (const auto& [key, value] : doc.items()) {
    if (key == "norm") {
      if (!value.is_string()) throw ValidationError("plan: \"norm\" must be a string");
      plan.kind = norm_kind_from_string(value.get<std::string>());
    } else if (key == "n") {
      if (!value.is_number_integer()) throw ValidationError("plan: \"n\" must be an integer");
      plan.replications = value.get<int>();
    } else if (key == "p") {
      if (!value.is_array()) throw ValidationError("plan: \"p\" must be an array");
      for (const auto& entry : value) plan.p_grid.push_back(entry.get<int>());
    } else if (key == "group_sizes") {
      if (!value.is_array()) throw ValidationError("plan: \"group_sizes\" must be an array");
      for (const auto& entry : value) plan.group_size_grid.push_back(entry.get<int>());
    } else if (key == "group_counts") {
      if (!value.is_array()) throw ValidationError("plan: \"group_counts\" must be an array");
      for (const auto& entry : value) plan.group_count_grid.push_back(entry.get<int>());
    } else if (key == "seed") {
      if (!value.is_number_integer()) throw ValidationError("plan: \"seed\" must be an integer");
      plan.seed = value.get<std::uint64_t>();
    } else if (key == "rho_final") {
      if (!value.is_number()) throw ValidationError("plan: \"rho_final\" must be a number");
      plan.rho_schedule = schedule_down_to(value.get<double>());
    } else if (key == "eps") {
      if (!value.is_number()) throw ValidationError("plan: \"eps\" must be a number");
      plan.solver.eps = value.get<double>();
    } else if (key == "maxiter") {
      if (!value.is_number_integer())
        throw ValidationError("plan: \"maxiter\" must be an integer");
      plan.solver.maxiter = value.get<int>();
    } else {
      throw ValidationError("plan: unknown key \"" + key + "\"");
    }
  }
  plan.validate();
  return plan;
}

std::string to_string(ReferenceKind kind) {
  switch (kind) {
    case ReferenceKind::None: return "";
    case ReferenceKind::Analytic: return "analytic";
    case ReferenceKind::Oracle: return "oracle";
    case ReferenceKind::Newton: return "newton";
  }
  return "?";
}

std::string ExperimentRecord::cell_label() const {
  if (group_count == 0) return "p=" + std::to_string(p);
  return std::to_string(group_size) + "x" + std::to_string(group_count);
}

namespace {

struct Cell {
  Index p = 0;
  int group_size = 0;
  int group_count = 0;
};

std::vector<Cell> plan_cells(const ExperimentPlan& plan) {
  std::vector<Cell> cells;
  if (plan.kind == NormKind::L2) {
    for (int p : plan.p_grid) cells.push_back({p, 0, 0});
    return cells;
  }
  for (int size : plan.group_size_grid)
    for (int count : plan.group_count_grid) {
      Cell cell;
      cell.group_size = size;
      cell.group_count = count;
      if (plan.kind == NormKind::GroupL2) {
        cell.p = static_cast<Index>(size) * count;
      } else {
        // Consecutive groups share half their coordinates (floor(size/2)).
        const int stride = size - size / 2;
        cell.p = static_cast<Index>(stride) * (count - 1) + size;
      }
      cells.push_back(cell);
    }
  return cells;
}

NormSpec cell_spec(const ExperimentPlan& plan, const Cell& cell) {
  if (plan.kind == NormKind::L2) return NormSpec::l2(cell.p);
  std::vector<std::vector<Index>> groups;
  if (plan.kind == NormKind::GroupL2) {
    for (int g = 0; g < cell.group_count; ++g) {
      std::vector<Index> idx;
      for (int j = 0; j < cell.group_size; ++j)
        idx.push_back(static_cast<Index>(g) * cell.group_size + j);
      groups.push_back(std::move(idx));
    }
    return NormSpec::group_l2(GroupStructure(cell.p, std::move(groups)));
  }
  const int stride = cell.group_size - cell.group_size / 2;
  for (int g = 0; g < cell.group_count; ++g) {
    std::vector<Index> idx;
    for (int j = 0; j < cell.group_size; ++j)
      idx.push_back(static_cast<Index>(g) * stride + j);
    groups.push_back(std::move(idx));
  }
  return NormSpec::overlap_group_l2(GroupStructure(cell.p, std::move(groups)));
}

int thread_budget(std::size_t work_items) {
  unsigned threads = std::thread::hardware_concurrency();
  if (threads == 0) threads = 1;
  if (const char* env = std::getenv("DUALNORM_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || cap < 1)
      throw ValidationError("DUALNORM_THREADS: expected a positive integer");
    threads = std::min<unsigned>(threads, static_cast<unsigned>(cap));
  }
  return static_cast<int>(std::min<std::size_t>(threads, work_items));
}

}  // namespace

std::vector<ExperimentRecord> run_benchmark(const ExperimentPlan& plan) {
  plan.validate();
  const std::vector<Cell> cells = plan_cells(plan);

  std::vector<NormSpec> specs;
  specs.reserve(cells.size());
  for (const Cell& cell : cells) specs.push_back(cell_spec(plan, cell));

  const std::size_t total = cells.size() * static_cast<std::size_t>(plan.replications);
  std::vector<ExperimentRecord> records(total);

  const auto run_one = [&](std::size_t flat) {
    const auto cell_idx = flat / static_cast<std::size_t>(plan.replications);
    const int rep = static_cast<int>(flat % static_cast<std::size_t>(plan.replications));
    const Cell& cell = cells[cell_idx];
    const NormSpec& spec = specs[cell_idx];

    ExperimentRecord rec;
    rec.cell = static_cast<int>(cell_idx);
    rec.replication = rep;
    rec.p = cell.p;
    rec.group_size = cell.group_size;
    rec.group_count = cell.group_count;

    CounterRng rng(plan.seed, (static_cast<std::uint64_t>(cell_idx) << 32) |
                                  static_cast<std::uint64_t>(rep));
    Eigen::VectorXd x(cell.p);
    for (Index j = 0; j < cell.p; ++j) x[j] = rng.next_normal();

    const BarrierProblem<double> problem(x, spec, 1.0);
    const auto start = std::chrono::steady_clock::now();
    const SolveResult<double> result =
        solve_dual_continuation(problem, plan.solver, plan.rho_schedule);
    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - start;

    rec.dual_value = result.dual_value;
    rec.iterations = result.iterations;
    rec.wall_time_s = elapsed.count();
    rec.converged = result.converged;

    if (plan.kind != NormKind::OverlapGroupL2) {
      rec.reference_kind = ReferenceKind::Analytic;
      rec.reference = analytic_dual(spec, x);
    } else if (cell.p <= 4) {
      OracleConfig oracle;
      oracle.seed = splitmix64(plan.seed ^ (flat * 0x9e3779b97f4a7c15ULL + 17));
      rec.reference_kind = ReferenceKind::Oracle;
      rec.reference = brute_force_dual(spec, x, oracle);
    } else {
      rec.reference_kind = ReferenceKind::Newton;
      rec.reference = solve_dual_continuation(problem, plan.solver, plan.rho_schedule,
                                              SolveMethod::Newton)
                          .dual_value;
    }
    rec.difference = rec.dual_value - rec.reference;
    records[flat] = rec;
  };

  const int threads = thread_budget(total);
  if (threads <= 1) {
    for (std::size_t i = 0; i < total; ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1))
          run_one(i);
      });
    for (auto& worker : pool) worker.join();
  }

  return records;
}

void emit_csv(const std::vector<ExperimentRecord>& records, const std::string& path) {
  if (records.empty()) throw ValidationError("emit_csv: no records");
  std::ostringstream out;
  out << "cell,replication,p,group_size,group_count,reference_kind,reference,"
         "dual_value,difference,iterations,wall_time_s,converged\r\n";
  for (const ExperimentRecord& rec : records) {
    out << rec.cell << ',' << rec.replication << ',' << rec.p << ',';
    if (rec.group_count > 0)
      out << rec.group_size << ',' << rec.group_count;
    else
      out << ',';
    out << ',' << csv_field(to_string(rec.reference_kind)) << ',';
    if (rec.reference_kind != ReferenceKind::None)
      out << format_double(rec.reference);
    out << ',' << format_double(rec.dual_value) << ',';
    if (rec.reference_kind != ReferenceKind::None)
      out << format_double(rec.difference);
    out << ',' << rec.iterations << ',' << format_double(rec.wall_time_s) << ','
        << (rec.converged ? "true" : "false") << "\r\n";
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ValidationError(path + ": cannot open for writing");
  file << out.str();
  if (!file) throw ValidationError(path + ": write failed");
}

void emit_boxplot_svg(const std::vector<ExperimentRecord>& records,
                      const std::string& path) {
  if (records.empty()) throw ValidationError("emit_boxplot_svg: no records");
  std::map<int, std::pair<std::string, std::vector<double>>> by_cell;
  for (const ExperimentRecord& rec : records) {
    auto& entry = by_cell[rec.cell];
    entry.first = rec.cell_label();
    if (rec.reference_kind != ReferenceKind::None)
      entry.second.push_back(rec.difference);
  }
  std::vector<std::string> labels;
  std::vector<std::vector<double>> cells;
  for (auto& [cell, entry] : by_cell) {
    (void)cell;
    if (entry.second.empty())
      throw ValidationError("emit_boxplot_svg: cell " + entry.first +
                            " has no reference differences");
    labels.push_back(entry.first);
    cells.push_back(std::move(entry.second));
  }
  write_boxplot_svg(path, labels, cells, "dual value minus reference",
                    "difference");
}

NormSpec restrict_to(const NormSpec& spec, const std::vector<Index>& coords) {
  if (coords.empty()) throw ValidationError("restrict_to: empty coordinate set");
  std::vector<Index> sorted = coords;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ValidationError("restrict_to: duplicate coordinates");
  if (sorted.front() < 0 || sorted.back() >= spec.p())
    throw ValidationError("restrict_to: coordinate out of range");

  const auto sub_p = static_cast<Index>(sorted.size());
  if (!is_group_kind(spec.kind())) {
    switch (spec.kind()) {
      case NormKind::L1: return NormSpec::l1(sub_p);
      case NormKind::L2: return NormSpec::l2(sub_p);
      default: return NormSpec::linf(sub_p);
    }
  }

  std::vector<Index> position(static_cast<std::size_t>(spec.p()), -1);
  for (std::size_t i = 0; i < sorted.size(); ++i)
    position[static_cast<std::size_t>(sorted[i])] = static_cast<Index>(i);

  const GroupStructure& s = spec.structure();
  std::vector<std::vector<Index>> groups;
  std::vector<double> weights;
  for (std::size_t g = 0; g < s.num_groups(); ++g) {
    std::vector<Index> idx;
    for (Index l : s.group(g)) {
      const Index pos = position[static_cast<std::size_t>(l)];
      if (pos >= 0) idx.push_back(pos);
    }
    if (idx.empty()) continue;
    groups.push_back(std::move(idx));
    weights.push_back(s.group_weight(g));
  }

  if (spec.kind() == NormKind::GroupL2)
    return NormSpec::group_l2(GroupStructure(sub_p, std::move(groups), std::move(weights)));
  return NormSpec::overlap_group_l2(GroupStructure(sub_p, std::move(groups)));
}

Eigen::VectorXd support_gradient(const NormSpec& spec, const Eigen::VectorXd& x_star,
                                 const std::vector<Index>& support) {
  if (x_star.size() != spec.p())
    throw DimensionMismatch("support_gradient: x_star has size " +
                            std::to_string(x_star.size()) + " but norm has p = " +
                            std::to_string(spec.p()));
  Eigen::VectorXd r(static_cast<Index>(support.size()));
  switch (spec.kind()) {
    case NormKind::L1:
    case NormKind::Linf:
      throw UnsupportedNorm("support_gradient: " + to_string(spec.kind()) +
                            " is not differentiable");
    case NormKind::L2: {
      const double n = x_star.norm();
      if (n == 0.0)
        throw NonDifferentiablePoint("support_gradient: x_star = 0");
      for (std::size_t i = 0; i < support.size(); ++i)
        r[static_cast<Index>(i)] = x_star[support[i]] / n;
      return r;
    }
    case NormKind::GroupL2:
    case NormKind::OverlapGroupL2: {
      const GroupStructure& s = spec.structure();
      // Sub-norms of the groups meeting the support; others may be zero.
      std::vector<double> inv_norm(s.num_groups(), 0.0);
      std::vector<bool> needed(s.num_groups(), false);
      std::set<Index> in_support(support.begin(), support.end());
      for (std::size_t g = 0; g < s.num_groups(); ++g)
        for (Index l : s.group(g))
          if (in_support.count(l)) needed[g] = true;
      for (std::size_t g = 0; g < s.num_groups(); ++g) {
        if (!needed[g]) continue;
        const double n = spec.kind() == NormKind::GroupL2
                             ? detail::subnorm(s, g, x_star)
                             : detail::weighted_subnorm(s, g, x_star);
        if (n == 0.0)
          throw NonDifferentiablePoint("support_gradient: group " +
                                       std::to_string(g + 1) +
                                       " sub-vector is zero on the support");
        inv_norm[g] = 1.0 / n;
      }
      for (std::size_t i = 0; i < support.size(); ++i) {
        const Index l = support[i];
        double value = 0.0;
        if (spec.kind() == NormKind::GroupL2) {
          for (std::size_t g = 0; g < s.num_groups(); ++g)
            for (Index m : s.group(g))
              if (m == l)
                value = std::sqrt(s.group_weight(g)) * x_star[l] * inv_norm[g];
        } else {
          const double w = s.coordinate_weight(l);
          double inv_sum = 0.0;
          for (std::size_t g = 0; g < s.num_groups(); ++g)
            for (Index m : s.group(g))
              if (m == l) inv_sum += inv_norm[g];
          value = x_star[l] * w * w * inv_sum;
        }
        r[static_cast<Index>(i)] = value;
      }
      return r;
    }
  }
  throw Error("support_gradient: unreachable");
}

IrrepresentableReport irrepresentable_dual(const Eigen::MatrixXd& A,
                                           const std::vector<Index>& support,
                                           const NormSpec& spec,
                                           const Eigen::VectorXd& x_star,
                                           const SolverConfig& cfg,
                                           const std::vector<double>& rho_schedule) {
  const Index p = A.cols();
  if (p != spec.p())
    throw DimensionMismatch("irrepresentable_dual: design has " +
                            std::to_string(p) + " columns but norm has p = " +
                            std::to_string(spec.p()));
  if (support.empty())
    throw ValidationError("irrepresentable_dual: empty support");

  std::vector<Index> sorted = support;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ValidationError("irrepresentable_dual: duplicate support indices");
  if (sorted.front() < 0 || sorted.back() >= p)
    throw ValidationError("irrepresentable_dual: support index out of range");
  if (static_cast<Index>(sorted.size()) == p)
    throw ValidationError("irrepresentable_dual: support must be a proper subset");

  std::vector<Index> complement;
  {
    std::size_t next = 0;
    for (Index j = 0; j < p; ++j) {
      if (next < sorted.size() && sorted[next] == j)
        ++next;
      else
        complement.push_back(j);
    }
  }

  Eigen::MatrixXd A1(A.rows(), static_cast<Index>(sorted.size()));
  for (std::size_t i = 0; i < sorted.size(); ++i)
    A1.col(static_cast<Index>(i)) = A.col(sorted[i]);
  Eigen::MatrixXd A0(A.rows(), static_cast<Index>(complement.size()));
  for (std::size_t i = 0; i < complement.size(); ++i)
    A0.col(static_cast<Index>(i)) = A.col(complement[i]);

  const Eigen::MatrixXd gram = A1.transpose() * A1;
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  if (!lu.isInvertible())
    throw SingularGram("irrepresentable_dual: A1'A1 is singular");

  const Eigen::VectorXd r1 = support_gradient(spec, x_star, sorted);
  const Eigen::VectorXd v = A0.transpose() * (A1 * lu.solve(r1));

  IrrepresentableReport report;
  report.v = v;
  report.support = std::move(sorted);
  report.complement = complement;

  const NormSpec restricted = restrict_to(spec, complement);
  const BarrierProblem<double> problem(v, restricted, 1.0);
  report.solve = solve_dual_continuation(problem, cfg, rho_schedule);
  report.dual_value = report.solve.dual_value;
  report.holds = report.dual_value < 1.0;
  return report;
}

}  // namespace dualnorm
