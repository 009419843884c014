#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dualnorm/bench.hpp"
#include "dualnorm/io.hpp"
#include "dualnorm/norms.hpp"
#include "dualnorm/oracle.hpp"
#include "dualnorm/solver.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNoConvergence = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dualnorm::ValidationError(path + ": cannot open");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<dualnorm::Index> parse_index_list(const std::string& text) {
  std::vector<dualnorm::Index> indices;
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    try {
      indices.push_back(std::stoll(token) - 1);  // 1-based on the command line
    } catch (const std::exception&) {
      throw dualnorm::ValidationError("--support: not an index: \"" + token + "\"");
    }
  }
  if (indices.empty()) throw dualnorm::ValidationError("--support: empty list");
  return indices;
}

int run_dual(const std::string& norm_path, const std::string& x_path,
             double rho_final) {
  const dualnorm::NormSpec spec = dualnorm::parse_norm_spec(slurp(norm_path));
  const Eigen::VectorXd x = dualnorm::read_vector_csv(x_path);

  if (!dualnorm::is_smooth(spec.kind())) {
    // l1 and linf have closed-form duals; the barrier solver does not apply.
    const double value = dualnorm::analytic_dual(spec, x);
    std::printf("dual_value = %.12g\n", value);
    std::printf("method = analytic\n");
    return 0;
  }

  std::vector<double> schedule;
  for (double rho = 10.0; rho > rho_final * (1 + 1e-12); rho *= 0.1)
    schedule.push_back(rho);
  schedule.push_back(rho_final);

  const dualnorm::BarrierProblem<double> problem(x, spec, 1.0);
  const auto result = dualnorm::solve_dual_continuation(problem, {}, schedule);
  std::printf("dual_value = %.12g\n", result.dual_value);
  std::printf("method = barrier_mm\n");
  std::printf("iterations = %d\n", result.iterations);
  std::printf("termination = %s\n",
              dualnorm::to_string(result.termination_reason).c_str());
  return result.converged ? 0 : kExitNoConvergence;
}

int run_bench(const std::string& plan_path, const std::string& out_dir,
              long long seed_override, bool have_seed) {
  dualnorm::ExperimentPlan plan = dualnorm::parse_experiment_plan(slurp(plan_path));
  if (have_seed) plan.seed = static_cast<std::uint64_t>(seed_override);

  std::filesystem::create_directories(out_dir);
  const auto records = dualnorm::run_benchmark(plan);
  const std::string csv_path = out_dir + "/records.csv";
  const std::string svg_path = out_dir + "/boxplot.svg";
  dualnorm::emit_csv(records, csv_path);
  dualnorm::emit_boxplot_svg(records, svg_path);

  std::vector<double> abs_diffs;
  int not_converged = 0;
  for (const auto& rec : records) {
    if (rec.reference_kind != dualnorm::ReferenceKind::None)
      abs_diffs.push_back(std::abs(rec.difference));
    if (!rec.converged) ++not_converged;
  }
  std::printf("records = %zu\n", records.size());
  if (!abs_diffs.empty()) {
    std::printf("max_abs_difference = %.6g\n",
                *std::max_element(abs_diffs.begin(), abs_diffs.end()));
    std::printf("median_abs_difference = %.6g\n",
                dualnorm::quantile_linear(abs_diffs, 0.5));
  }
  std::printf("not_converged = %d\n", not_converged);
  std::printf("csv = %s\n", csv_path.c_str());
  std::printf("svg = %s\n", svg_path.c_str());
  return 0;
}

int run_check_ic(const std::string& design_path, const std::string& support_list,
                 const std::string& norm_path, const std::string& xstar_path,
                 double rho_final) {
  const Eigen::MatrixXd A = dualnorm::read_matrix_csv(design_path);
  const auto support = parse_index_list(support_list);
  const dualnorm::NormSpec spec = dualnorm::parse_norm_spec(slurp(norm_path));
  const Eigen::VectorXd x_star = dualnorm::read_vector_csv(xstar_path);

  std::vector<double> schedule;
  for (double rho = 10.0; rho > rho_final * (1 + 1e-12); rho *= 0.1)
    schedule.push_back(rho);
  schedule.push_back(rho_final);

  const auto report =
      dualnorm::irrepresentable_dual(A, support, spec, x_star, {}, schedule);
  std::printf("dual_value = %.12g\n", report.dual_value);
  std::printf("condition_holds = %s\n", report.holds ? "true" : "false");
  std::printf("complement_size = %zu\n", report.complement.size());
  const bool solver_ok =
      report.solve.converged || report.v.lpNorm<Eigen::Infinity>() == 0.0;
  return solver_ok ? 0 : kExitNoConvergence;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical dual-norm evaluation via barrier MM"};
  app.require_subcommand(1);

  std::string norm_path, x_path, plan_path, out_dir, design_path, support_list,
      xstar_path;
  double rho_final = 1e-6;
  long long seed_override = 0;
  bool have_seed = false;

  auto* dual = app.add_subcommand("dual", "Evaluate the dual norm of a vector");
  dual->add_option("--norm", norm_path, "Norm spec JSON")->required();
  dual->add_option("--x", x_path, "Target vector, single-column CSV")->required();
  dual->add_option("--rho-final", rho_final, "Final barrier constant");

  auto* bench = app.add_subcommand("bench", "Run a benchmark plan");
  bench->add_option("--plan", plan_path, "Experiment plan JSON")->required();
  bench->add_option("--out", out_dir, "Output directory")->required();
  bench->add_option("--seed", seed_override, "Override the plan's RNG seed")
      ->each([&](const std::string&) { have_seed = true; });

  auto* check = app.add_subcommand("check-ic", "Irrepresentable-condition check");
  check->add_option("--design", design_path, "Design matrix CSV")->required();
  check->add_option("--support", support_list, "1-based support columns, comma separated")
      ->required();
  check->add_option("--norm", norm_path, "Norm spec JSON")->required();
  check->add_option("--xstar", xstar_path, "Optimal solution CSV")->required();
  check->add_option("--rho-final", rho_final, "Final barrier constant");

  CLI11_PARSE(app, argc, argv);

  try {
    if (dual->parsed()) return run_dual(norm_path, x_path, rho_final);
    if (bench->parsed()) return run_bench(plan_path, out_dir, seed_override, have_seed);
    if (check->parsed())
      return run_check_ic(design_path, support_list, norm_path, xstar_path, rho_final);
  } catch (const dualnorm::NotPositiveDefinite& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
