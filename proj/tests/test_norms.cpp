#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "dualnorm/norms.hpp"
#include "dualnorm/rng.hpp"
#include "support/finite_diff.hpp"
#include "support/test_points.hpp"

using namespace dualnorm;
using testsupport::close;
using Vec = Eigen::VectorXd;

namespace {

Vec make_vec(std::initializer_list<double> values) {
  Vec v(static_cast<Index>(values.size()));
  Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

std::vector<NormSpec> all_specs() {
  return {NormSpec::l1(3),          NormSpec::l2(3),
          NormSpec::linf(3),        testsupport::spec_group_small(),
          testsupport::spec_group_medium(), testsupport::spec_overlap_small(),
          testsupport::spec_overlap_medium()};
}

std::vector<NormSpec> smooth_specs() {
  return {NormSpec::l2(5), testsupport::spec_group_small(),
          testsupport::spec_group_medium(), testsupport::spec_overlap_small(),
          testsupport::spec_overlap_medium()};
}

}  // namespace

TEST_CASE("norm_value: catalogue examples") {
  CHECK(norm_value(NormSpec::l2(2), make_vec({3, 4})) == doctest::Approx(5.0));

  const NormSpec group = testsupport::spec_group_small();
  CHECK(norm_value(group, make_vec({3, 4, 2})) ==
        doctest::Approx(std::sqrt(2.0) * 5.0 + 2.0).epsilon(1e-14));

  const NormSpec overlap = testsupport::spec_overlap_small();
  // wtilde = (1, 1/2, 1); both weighted sub-norms are sqrt(1.25)
  CHECK(norm_value(overlap, make_vec({1, 1, 1})) ==
        doctest::Approx(2.0 * std::sqrt(1.25)).epsilon(1e-14));

  CHECK(norm_value(NormSpec::l1(3), make_vec({1, -2, 3})) == doctest::Approx(6.0));
  CHECK(norm_value(NormSpec::linf(3), make_vec({1, -2, 3})) == doctest::Approx(3.0));
}

TEST_CASE("norm_value: zero iff x = 0, dimension checked") {
  for (const NormSpec& spec : all_specs()) {
    CHECK(norm_value(spec, Vec::Zero(spec.p())) == 0.0);
    CounterRng rng(3);
    const Vec x = testsupport::random_vector(rng, spec.p());
    CHECK(norm_value(spec, x) > 0.0);
    CHECK_THROWS_AS((void)norm_value(spec, Vec::Zero(spec.p() + 1)),
                    DimensionMismatch);
  }
}

TEST_CASE("norm_gradient: closed-form examples") {
  const Vec g2 = norm_gradient(NormSpec::l2(2), make_vec({3, 4}));
  CHECK(g2[0] == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(g2[1] == doctest::Approx(0.8).epsilon(1e-14));

  const Vec og = norm_gradient(testsupport::spec_overlap_small(), make_vec({1, 1, 1}));
  CHECK(og[0] == doctest::Approx(0.8944271909999159).epsilon(1e-9));
  CHECK(og[1] == doctest::Approx(0.4472135954999579).epsilon(1e-9));
  CHECK(og[2] == doctest::Approx(0.8944271909999159).epsilon(1e-9));

  const Vec gg = norm_gradient(testsupport::spec_group_small(), make_vec({3, 4, 2}));
  CHECK(gg[0] == doctest::Approx(std::sqrt(2.0) * 0.6).epsilon(1e-12));
  CHECK(gg[1] == doctest::Approx(std::sqrt(2.0) * 0.8).epsilon(1e-12));
  CHECK(gg[2] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("norm_gradient: error paths") {
  CHECK_THROWS_AS((void)norm_gradient(NormSpec::l1(2), make_vec({1, 1})),
                  UnsupportedNorm);
  CHECK_THROWS_AS((void)norm_gradient(NormSpec::linf(2), make_vec({1, 1})),
                  UnsupportedNorm);
  CHECK_THROWS_AS((void)norm_gradient(NormSpec::l2(2), Vec::Zero(2)),
                  NonDifferentiablePoint);
  CHECK_THROWS_AS(
      (void)norm_gradient(testsupport::spec_group_small(), make_vec({0, 0, 1})),
      NonDifferentiablePoint);
  CHECK_THROWS_AS(
      (void)norm_gradient(testsupport::spec_overlap_small(), make_vec({1, 0, 0})),
      NonDifferentiablePoint);
}

TEST_CASE("norm_hessian: l2 closed forms") {
  const Eigen::MatrixXd H1 = norm_hessian(NormSpec::l2(2), make_vec({1, 0}));
  CHECK(H1(0, 0) == doctest::Approx(0.0));
  CHECK(H1(0, 1) == doctest::Approx(0.0));
  CHECK(H1(1, 1) == doctest::Approx(1.0));

  const Eigen::MatrixXd H2 = norm_hessian(NormSpec::l2(2), make_vec({3, 4}));
  CHECK(H2(0, 0) == doctest::Approx(0.128).epsilon(1e-12));
  CHECK(H2(0, 1) == doctest::Approx(-0.096).epsilon(1e-12));
  CHECK(H2(1, 0) == doctest::Approx(-0.096).epsilon(1e-12));
  CHECK(H2(1, 1) == doctest::Approx(0.072).epsilon(1e-12));
}

TEST_CASE("norm_hessian: overlap example matches finite differences") {
  const NormSpec spec = testsupport::spec_overlap_small();
  const Vec x = make_vec({1, 1, 1});
  const Eigen::MatrixXd H = norm_hessian(spec, x);
  const Eigen::MatrixXd fd = testsupport::fd_jacobian_symmetric(
      [&](const Vec& z) { return norm_gradient(spec, z); }, x);
  CHECK(testsupport::max_entry_error(H, fd) <= 1e-5);
  CHECK((H - H.transpose()).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("derivative check: gradients and Hessians vs finite differences") {
  for (const NormSpec& spec : smooth_specs()) {
    CounterRng rng(100 + spec.p());
    for (int trial = 0; trial < 100; ++trial) {
      const Vec x = testsupport::differentiable_point(spec, rng);
      const Vec grad = norm_gradient(spec, x);
      const Vec fd = testsupport::fd_gradient(
          [&](const Vec& z) { return norm_value(spec, z); }, x);
      for (Index j = 0; j < x.size(); ++j) CHECK(close(grad[j], fd[j], 1e-5));
    }
    for (int trial = 0; trial < 25; ++trial) {
      const Vec x = testsupport::differentiable_point(spec, rng);
      const Eigen::MatrixXd H = norm_hessian(spec, x);
      const Eigen::MatrixXd fd = testsupport::fd_jacobian_symmetric(
          [&](const Vec& z) { return norm_gradient(spec, z); }, x);
      CHECK(testsupport::max_entry_error(H, fd) <= 1e-4);
    }
  }
}

TEST_CASE("norm axioms: homogeneity and triangle inequality") {
  for (const NormSpec& spec : all_specs()) {
    CounterRng rng(11 + spec.p());
    for (int trial = 0; trial < 50; ++trial) {
      const Vec x = testsupport::random_vector(rng, spec.p());
      const Vec y = testsupport::random_vector(rng, spec.p());
      const double nx = norm_value(spec, x);
      for (double alpha : {-2.0, 0.5, 10.0}) {
        const double scaled = norm_value(spec, (alpha * x).eval());
        CHECK(std::abs(scaled - std::abs(alpha) * nx) <=
              1e-12 * std::max(1.0, std::abs(alpha) * nx));
      }
      CHECK(norm_value(spec, (x + y).eval()) <=
            nx + norm_value(spec, y) + 1e-12);
    }
  }
}

TEST_CASE("norm axioms: Euler identity for smooth kinds") {
  for (const NormSpec& spec : smooth_specs()) {
    CounterRng rng(23 + spec.p());
    for (int trial = 0; trial < 50; ++trial) {
      const Vec x = testsupport::differentiable_point(spec, rng);
      const double lhs = dot(norm_gradient(spec, x), x);
      const double rhs = norm_value(spec, x);
      CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("overlap with disjoint groups reduces to unit-weight group norm") {
  GroupStructure partition(5, {{0, 1}, {2, 3, 4}});
  const NormSpec overlap = NormSpec::overlap_group_l2(partition);
  const NormSpec group = NormSpec::group_l2(
      GroupStructure(5, {{0, 1}, {2, 3, 4}}, std::vector<double>{1.0, 1.0}));
  // Disjoint groups give membership 1 everywhere, so wtilde is identically 1.
  for (Index l = 0; l < 5; ++l) CHECK(partition.coordinate_weight(l) == 1.0);

  CounterRng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec x = testsupport::random_vector(rng, 5);
    CHECK(std::abs(norm_value(overlap, x) - norm_value(group, x)) <= 1e-12);
  }
}

TEST_CASE("norm_hessian: positive semidefinite at random points") {
  for (const NormSpec& spec : smooth_specs()) {
    CounterRng rng(17 + spec.p());
    for (int trial = 0; trial < 20; ++trial) {
      const Vec x = testsupport::differentiable_point(spec, rng);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(norm_hessian(spec, x));
      CHECK(eig.eigenvalues().minCoeff() >= -1e-8);
    }
  }
}

TEST_CASE("analytic_dual: closed forms and the l1/linf pairing") {
  CHECK(analytic_dual(NormSpec::l1(3), make_vec({1, -2, 3})) == 3.0);
  CHECK(analytic_dual(NormSpec::l2(2), make_vec({3, 4})) == doctest::Approx(5.0));
  CHECK(analytic_dual(testsupport::spec_group_small(), make_vec({3, 4, 2})) ==
        doctest::Approx(3.5355339059327378).epsilon(1e-12));
  CHECK(analytic_dual(NormSpec::linf(3), make_vec({1, -2, 3})) == 6.0);
  CHECK_THROWS_AS(
      (void)analytic_dual(testsupport::spec_overlap_small(), make_vec({1, 1, 1})),
      NoClosedForm);

  CounterRng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec x = testsupport::random_vector(rng, 6);
    CHECK(analytic_dual(NormSpec::l1(6), x) == norm_value(NormSpec::linf(6), x));
    CHECK(analytic_dual(NormSpec::linf(6), x) == norm_value(NormSpec::l1(6), x));
  }
}

TEST_CASE("validate_groups: coverage and overlap reporting") {
  const GroupStructure overlapping(3, {{0, 1}, {1, 2}});
  const auto r1 = validate_groups(overlapping);
  CHECK(r1.valid_for_overlap());
  CHECK_FALSE(r1.valid_for_partition());
  CHECK(r1.shared_coordinates == std::vector<Index>{1});

  const GroupStructure gap(3, {{0}, {2}});
  const auto r2 = validate_groups(gap);
  CHECK_FALSE(r2.valid_for_overlap());
  CHECK(r2.uncovered_coordinates == std::vector<Index>{1});

  const GroupStructure full(3, {{0, 1, 2}});
  const auto r3 = validate_groups(full);
  CHECK(r3.valid_for_overlap());
  CHECK(r3.valid_for_partition());

  const GroupStructure with_empty(2, {{0, 1}, {}});
  const auto r4 = validate_groups(with_empty);
  CHECK(r4.empty_groups == std::vector<std::size_t>{1});
  CHECK_FALSE(r4.valid_for_overlap());
}

TEST_CASE("group structure: derived weights") {
  const GroupStructure s(3, {{0, 1}, {1, 2}});
  CHECK(s.coordinate_weight(0) == 1.0);
  CHECK(s.coordinate_weight(1) == 0.5);
  CHECK(s.coordinate_weight(2) == 1.0);
  CHECK(s.c(0) == std::vector<double>{1.0, 0.5});
  CHECK(s.c(1) == std::vector<double>{0.5, 1.0});
  CHECK(s.group_weight(0) == 2.0);  // defaults to the group size

  CHECK_THROWS_AS(GroupStructure(3, {{0, 3}}), ValidationError);
  CHECK_THROWS_AS(GroupStructure(3, {{0, 0}}), ValidationError);
  CHECK_THROWS_AS(GroupStructure(3, {{0, 1, 2}}, std::vector<double>{1.0, 2.0}),
                  ValidationError);
  CHECK_THROWS_AS(GroupStructure(3, {{0, 1, 2}}, std::vector<double>{-1.0}),
                  ValidationError);
}

TEST_CASE("norm spec construction enforces the structure invariants") {
  CHECK_THROWS_AS(NormSpec::group_l2(GroupStructure(3, {{0, 1}, {1, 2}})),
                  ValidationError);
  CHECK_THROWS_AS(NormSpec::group_l2(GroupStructure(3, {{0}, {2}})),
                  ValidationError);
  CHECK_THROWS_AS(NormSpec::overlap_group_l2(GroupStructure(3, {{0}, {2}})),
                  ValidationError);
  CHECK_NOTHROW(NormSpec::overlap_group_l2(GroupStructure(3, {{0, 1}, {1, 2}})));
}

TEST_CASE("norm spec JSON: happy paths") {
  const NormSpec l2 = parse_norm_spec(R"({"kind": "l2", "p": 4})");
  CHECK(l2.kind() == NormKind::L2);
  CHECK(l2.p() == 4);

  const NormSpec group = parse_norm_spec(
      R"({"kind": "group_l2", "p": 3, "groups": [[1, 2], [3]], "weights": [2.0, 1.0]})");
  CHECK(group.kind() == NormKind::GroupL2);
  CHECK(group.structure().group_weight(0) == 2.0);
  CHECK(group.structure().group(0) == std::vector<Index>{0, 1});

  const NormSpec overlap = parse_norm_spec(
      R"({"kind": "overlap_group_l2", "p": 3, "groups": [[1, 2], [2, 3]]})");
  CHECK(overlap.kind() == NormKind::OverlapGroupL2);
  CHECK(overlap.structure().coordinate_weight(1) == 0.5);
}

TEST_CASE("norm spec JSON: schema violations") {
  CHECK_THROWS_AS((void)parse_norm_spec("not json"), ValidationError);
  CHECK_THROWS_AS((void)parse_norm_spec(R"({"kind": "l2"})"), ValidationError);
  CHECK_THROWS_AS((void)parse_norm_spec(R"({"kind": "huber", "p": 3})"),
                  ValidationError);
  CHECK_THROWS_AS((void)parse_norm_spec(R"({"kind": "l2", "p": 3, "typo": 1})"),
                  ValidationError);
  CHECK_THROWS_AS(
      (void)parse_norm_spec(R"({"kind": "l2", "p": 3, "groups": [[1]]})"),
      ValidationError);
  CHECK_THROWS_AS((void)parse_norm_spec(R"({"kind": "group_l2", "p": 3})"),
                  ValidationError);
  CHECK_THROWS_AS(
      (void)parse_norm_spec(
          R"({"kind": "overlap_group_l2", "p": 3, "groups": [[1,2],[2,3]], "weights": [1,1]})"),
      ValidationError);
  CHECK_THROWS_AS(
      (void)parse_norm_spec(
          R"({"kind": "group_l2", "p": 3, "groups": [[1, 4]]})"),
      ValidationError);
}
