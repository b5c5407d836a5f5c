#include <doctest.h>

#include <cmath>
#include <random>

#include "conedual/core_model.hpp"
#include "conedual/dual_solver.hpp"
#include "oracles.hpp"

using namespace conedual;

namespace {

ProblemInstance indefinite_2x2() {
  Matrix Q(2, 2);
  Q << 1.8, 0.4, 0.4, -0.6;
  return ProblemInstance::create(Q, Vector{{0.5, 0.6}});
}

ProblemInstance unbounded_3x3() {
  Matrix Q(3, 3);
  Q << 2, -1, 2, -1, -2, 0, 2, 0, 1;
  return ProblemInstance::create(Q, Vector{{1.5, -0.5, 1.5}});
}

Vector random_vector(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

}  // namespace

TEST_CASE("lambda_map") {
  CHECK(lambda_map(Vector{{1.0, 0.0}}) == doctest::Approx(-0.5));
  CHECK(std::abs(lambda_map(Vector{{0.55, 0.55}})) <= 1e-12);
  // Rounded to 4 digits; the refined KKT point sits exactly on the boundary.
  CHECK(std::abs(lambda_map(Vector{{0.4355, 0.0416, 0.4335}})) <= 2e-3);
  const Vector refined = recover_primal(unbounded_3x3(), 0.45093996697655);
  CHECK(std::abs(lambda_map(refined)) <= 1e-10);
  CHECK((refined - Vector{{0.4355, 0.0416, 0.4335}}).cwiseAbs().maxCoeff() <= 1e-3);
}

TEST_CASE("primal_objective") {
  CHECK(primal_objective(indefinite_2x2(), Vector{{0.55, 0.55}}) == doctest::Approx(-0.3025));
  CHECK(primal_objective(indefinite_2x2(), Vector::Zero(2)) == 0.0);
  CHECK(std::abs(primal_objective(unbounded_3x3(), Vector{{0.4355, 0.0416, 0.4335}}) + 0.6413) <= 1e-3);
}

TEST_CASE("is_feasible") {
  CHECK(is_feasible(Vector{{1.0, 0.5}}, 0.0).feasible);
  const auto neg = is_feasible(Vector{{-1.0, -1.0}}, 0.0);
  CHECK_FALSE(neg.feasible);
  CHECK(lambda_map(Vector{{-1.0, -1.0}}) == 0.0);
  CHECK(neg.violation == doctest::Approx(2.0));
  CHECK(is_feasible(Vector{{0.55, 0.55}}, 1e-9).feasible);
  CHECK(is_feasible(Vector::Zero(3), 0.0).feasible);
  CHECK(is_feasible(Vector{{1.0, 0.6, 0.8}}, 0.0).feasible);
  CHECK_FALSE(is_feasible(Vector{{1.0, 0.6, 0.81}}, 0.0).feasible);
}

TEST_CASE("assemble_G") {
  const auto p = indefinite_2x2();
  CHECK(assemble_G(p, 0.0) == p.Q());
  Matrix expect(2, 2);
  expect << 0.51, 0.4, 0.4, 0.69;
  CHECK((assemble_G(p, 1.29) - expect).cwiseAbs().maxCoeff() <= 1e-15);

  Matrix expect3(3, 3);
  expect3 << 1.5491, -1, 2, -1, -1.5491, 0, 2, 0, 1.4509;
  CHECK((assemble_G(unbounded_3x3(), 0.4509) - expect3).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("total_complementary") {
  const auto p = indefinite_2x2();
  CHECK(total_complementary(p, Vector::Zero(2), 0.7) == 0.0);
  CHECK(std::abs(total_complementary(p, Vector{{0.55, 0.55}}, 1.290909) + 0.3025) <= 1e-4);
  CHECK(std::abs(total_complementary(unbounded_3x3(), Vector{{0.4355, 0.0416, 0.4335}}, 0.4509) + 0.6413) <= 1e-3);
  CHECK_THROWS_AS(total_complementary(p, Vector::Zero(2), -0.1), std::domain_error);
}

TEST_CASE("ProblemInstance validation") {
  Matrix Q(2, 2);
  Q << 1, 2, 2 + 1e-14, 3;
  const auto p = ProblemInstance::create(Q, Vector{{1, 1}}, "near-symmetric");
  CHECK(p.Q()(0, 1) == p.Q()(1, 0));
  CHECK(p.name() == "near-symmetric");

  Matrix bad(2, 2);
  bad << 1, 2, 2.001, 3;
  CHECK_THROWS_AS(ProblemInstance::create(bad, Vector{{1, 1}}), InputError);
  CHECK_THROWS_AS(ProblemInstance::create(Matrix::Identity(1, 1), Vector{{1}}), InputError);
  CHECK_THROWS_AS(ProblemInstance::create(Matrix::Identity(3, 3), Vector{{1, 1}}), InputError);
  Matrix nan = Matrix::Identity(2, 2);
  nan(0, 0) = std::nan("");
  CHECK_THROWS_AS(ProblemInstance::create(nan, Vector{{1, 1}}), InputError);
}

TEST_CASE("property: two-nappe characterization and complementary identity") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 + trial % 4;
    const Vector x = random_vector(n, rng);
    const double tail = x.tail(n - 1).norm();
    CHECK((lambda_map(x) <= 0.0) == (std::abs(x(0)) >= tail));
    const bool feas = is_feasible(x, 0.0).feasible;
    CHECK(feas == (lambda_map(x) <= 0.0 && x(0) >= 0.0));

    const auto p = generate_instance(oracle::kind_for(trial), n, trial);
    const double sigma = std::abs(random_vector(1, rng)(0));
    const double lhs = total_complementary(p, x, sigma);
    const double rhs = primal_objective(p, x) + sigma * lambda_map(x);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("property: rotation of the x_2 block leaves the objective invariant") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + trial % 3;
    const auto p = generate_instance(InstanceKind::indefinite, n, 100 + trial);
    const Matrix B = oracle::block_rotation(oracle::random_orthogonal(n - 1, rng));
    const auto rotated = ProblemInstance::create(B * p.Q() * B.transpose(), B * p.c());
    const Vector x = random_vector(n, rng);
    CHECK(std::abs(primal_objective(p, x) - primal_objective(rotated, B * x)) <= 1e-11);
    CHECK(std::abs(lambda_map(x) - lambda_map(B * x)) <= 1e-11);
  }
}
