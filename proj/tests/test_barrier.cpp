#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "dualnorm/barrier.hpp"
#include "dualnorm/rng.hpp"
#include "support/finite_diff.hpp"
#include "support/test_points.hpp"

using namespace dualnorm;
using testsupport::close;
using Vec = Eigen::VectorXd;
using Problem = BarrierProblem<double>;

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Problem l2_problem(double rho = 1.0) {
  return Problem(vec2(3, 4), NormSpec::l2(2), rho);
}

std::vector<Problem> smooth_problems(double rho) {
  CounterRng rng(2024);
  std::vector<NormSpec> specs = {NormSpec::l2(4), testsupport::spec_group_small(),
                                 testsupport::spec_overlap_small(),
                                 testsupport::spec_overlap_medium()};
  std::vector<Problem> problems;
  for (const NormSpec& spec : specs)
    problems.emplace_back(testsupport::random_vector(rng, spec.p()), spec, rho);
  return problems;
}

}  // namespace

TEST_CASE("barrier problem: construction guards") {
  CHECK_THROWS_AS(Problem(vec2(1, 2), NormSpec::l1(2), 1.0), UnsupportedNorm);
  CHECK_THROWS_AS(Problem(vec2(1, 2), NormSpec::linf(2), 1.0), UnsupportedNorm);
  CHECK_THROWS_AS(Problem(Vec::Ones(3), NormSpec::l2(2), 1.0), DimensionMismatch);
  CHECK_THROWS_AS(Problem(vec2(1, 2), NormSpec::l2(2), 0.0), ValidationError);
  CHECK_THROWS_AS(Problem(vec2(1, 2), NormSpec::l2(2), -1.0), ValidationError);
}

TEST_CASE("slack: boundary geometry") {
  const Problem prob = l2_problem();
  CHECK(slack(prob, Vec::Zero(2)) == 1.0);
  CHECK(slack(prob, vec2(0.3, 0.4)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(slack(prob, vec2(0.6, 0.8)) == doctest::Approx(0.0));
}

TEST_CASE("lagrangian: direct values, linear in rho") {
  CHECK(lagrangian(l2_problem(), Vec::Zero(2)) == 0.0);
  CHECK(lagrangian(l2_problem(1.0), vec2(0.3, 0.4)) ==
        doctest::Approx(-2.5 - std::log(0.5)).epsilon(1e-14));
  CHECK(lagrangian(l2_problem(2.0), vec2(0.3, 0.4)) ==
        doctest::Approx(-2.5 - 2.0 * std::log(0.5)).epsilon(1e-14));

  CHECK_THROWS_AS((void)lagrangian(l2_problem(), vec2(0.6, 0.8)), InfeasiblePoint);
  CHECK_THROWS_AS((void)lagrangian(l2_problem(), vec2(3.0, 0.0)), InfeasiblePoint);
}

TEST_CASE("lagrangian_gradient: closed form and affine dependence on rho") {
  const Vec g = lagrangian_gradient(l2_problem(), vec2(0.3, 0.4));
  CHECK(g[0] == doctest::Approx(-1.8).epsilon(1e-13));
  CHECK(g[1] == doctest::Approx(-2.4).epsilon(1e-13));

  const Vec z = vec2(0.25, -0.35);
  const Vec g1 = lagrangian_gradient(l2_problem(1.0), z);
  const Vec g2 = lagrangian_gradient(l2_problem(2.0), z);
  const Vec g3 = lagrangian_gradient(l2_problem(3.0), z);
  CHECK(((g3 - g2) - (g2 - g1)).lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("lagrangian derivatives match finite differences") {
  for (const Problem& prob : smooth_problems(0.7)) {
    CounterRng rng(55 + prob.x.size());
    for (int trial = 0; trial < 30; ++trial) {
      const Vec z = testsupport::feasible_point(prob.spec, rng, 0.55);
      const Vec grad = lagrangian_gradient(prob, z);
      const Vec fd = testsupport::fd_gradient(
          [&](const Vec& w) { return lagrangian(prob, w); }, z);
      for (Index j = 0; j < z.size(); ++j) CHECK(close(grad[j], fd[j], 1e-5));
    }
    for (int trial = 0; trial < 10; ++trial) {
      const Vec z = testsupport::feasible_point(prob.spec, rng, 0.5);
      const Eigen::MatrixXd H = lagrangian_hessian(prob, z);
      const Eigen::MatrixXd fd = testsupport::fd_jacobian_symmetric(
          [&](const Vec& w) { return lagrangian_gradient(prob, w); }, z);
      CHECK(testsupport::max_entry_error(H, fd) <= 1e-4);
    }
  }
}

TEST_CASE("lagrangian_hessian: PSD and exactly linear in rho") {
  const Problem p1 = l2_problem(1.0);
  const Eigen::MatrixXd H1 = lagrangian_hessian(p1, vec2(0.3, 0.4));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(H1);
  CHECK(eig.eigenvalues().minCoeff() >= 0.0);

  const Eigen::MatrixXd H2 = lagrangian_hessian(l2_problem(2.0), vec2(0.3, 0.4));
  CHECK((H2 - 2.0 * H1).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("surrogate: value at the anchor") {
  // -z'x - rho*upsilon(anchor)*log(upsilon(anchor)) at z = anchor = (0.3,0.4)
  const double value = surrogate_value(l2_problem(), vec2(0.3, 0.4), vec2(0.3, 0.4));
  CHECK(value == doctest::Approx(-2.5 - 0.5 * std::log(0.5)).epsilon(1e-14));

  CHECK_THROWS_AS(
      (void)surrogate_value(l2_problem(), vec2(0.9, 0.9), vec2(0.3, 0.4)),
      InfeasiblePoint);
  CHECK_THROWS_AS(
      (void)surrogate_value(l2_problem(), vec2(0.3, 0.4), vec2(0.9, 0.9)),
      InfeasiblePoint);
}

TEST_CASE("surrogate: gradient at the anchor is -x, independent of rho") {
  for (double rho : {0.5, 1.0, 4.0}) {
    const Problem prob = l2_problem(rho);
    const Vec anchor = vec2(0.31, -0.22);
    const Vec fd = testsupport::fd_gradient(
        [&](const Vec& z) { return surrogate_value(prob, z, anchor); }, anchor,
        1e-7);
    CHECK(close(fd[0], -3.0, 1e-6));
    CHECK(close(fd[1], -4.0, 1e-6));
  }
}

TEST_CASE("surrogate: curvature at the anchor") {
  for (const Problem& prob : smooth_problems(1.3)) {
    CounterRng rng(99);
    const Vec anchor = testsupport::feasible_point(prob.spec, rng, 0.5);
    const Eigen::MatrixXd expected = surrogate_hessian_at_anchor(prob, anchor);
    const Eigen::MatrixXd fd = testsupport::fd_jacobian_symmetric(
        [&](const Vec& z) {
          return testsupport::fd_gradient(
              [&](const Vec& w) { return surrogate_value(prob, w, anchor); }, z,
              1e-5);
        },
        anchor, 1e-5);
    CHECK(testsupport::max_entry_error(expected, fd) <= 1e-4);

    // d2g at the anchor equals upsilon * L'': check the identity directly.
    const double s = slack(prob, anchor);
    const Eigen::MatrixXd via_lagrangian = s * lagrangian_hessian(prob, anchor);
    CHECK(testsupport::max_entry_error(expected, via_lagrangian) <= 1e-12);
  }
}

TEST_CASE("surrogate: shifted majorization of the linear objective") {
  for (const Problem& prob : smooth_problems(0.9)) {
    CounterRng rng(123 + prob.x.size());
    for (int trial = 0; trial < 200; ++trial) {
      const Vec anchor = testsupport::feasible_point(
          prob.spec, rng, 0.15 + 0.8 * rng.next_uniform());
      const Vec z = testsupport::feasible_point(prob.spec, rng,
                                                0.15 + 0.8 * rng.next_uniform());
      const double surrogate_drop =
          surrogate_value(prob, z, anchor) - surrogate_value(prob, anchor, anchor);
      const double objective_drop = -dot(z, prob.x) + dot(anchor, prob.x);
      CHECK(surrogate_drop - objective_drop >= -1e-10);
    }
  }
}

TEST_CASE("barrier blow-up as the slack vanishes at fixed z'x") {
  const Problem prob = l2_problem();
  // direction orthogonal to x keeps z'x = 0 while Omega(z) -> 1
  double previous = -std::numeric_limits<double>::infinity();
  for (double s : {1e-3, 1e-6, 1e-9}) {
    const Vec z = (1.0 - s) * vec2(0.8, -0.6);
    CHECK(dot(z, prob.x) == doctest::Approx(0.0));
    const double value = lagrangian(prob, z);
    CHECK(value > previous);
    previous = value;
  }
}
