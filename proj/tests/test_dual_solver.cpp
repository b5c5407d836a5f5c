#include <doctest.h>

#include <cmath>
#include <random>

#include "conedual/dual_solver.hpp"
#include "conedual/io.hpp"
#include "conedual/verify_oracle.hpp"
#include "oracles.hpp"

using namespace conedual;

namespace {

ProblemInstance load(const char* name) { return io::load_problem(oracle::fixture(name)); }

}  // namespace

TEST_CASE("2x2 example: certified interior root") {
  const auto p = load("indefinite_2x2.json");
  const auto interval = pd_interval(p);
  REQUIRE(interval);
  CHECK(interval->lo == doctest::Approx(1.2 - std::sqrt(0.2)));
  CHECK(interval->hi == doctest::Approx(1.2 + std::sqrt(0.2)));
  CHECK(interval->lo_singular);
  CHECK(interval->hi_singular);

  const auto r = maximize_dual(p);
  REQUIRE(r.certified());
  CHECK(r.outcome == DualMaximum::Outcome::certified_root);
  const auto& pt = *r.point;
  CHECK(pt.sigma == doctest::Approx(1.2909090909090909).epsilon(1e-12));
  CHECK(std::abs(pt.x(0) - 0.55) <= 1e-9);
  CHECK(std::abs(pt.x(1) - 0.55) <= 1e-9);
  CHECK(std::abs(pt.primal_value + 0.3025) <= 1e-9);
  CHECK(std::abs(pt.dual_value - pt.primal_value) <= 1e-10);
  CHECK(std::abs(pt.dual_gradient) <= 1e-10);
  CHECK(pt.inertia == Inertia{2, 0, 0});
  CHECK(min_eigenvalue(assemble_G(p, pt.sigma)) ==
        doctest::Approx(oracle::min_eig_2x2(1.8 - pt.sigma, 0.4, -0.6 + pt.sigma)).epsilon(1e-10));
}

TEST_CASE("3x3 example: KKT point without certificate") {
  const auto p = load("unbounded_3x3.json");
  const auto r = maximize_dual(p);
  CHECK_FALSE(r.certified());

  const auto points = enumerate_kkt(p);
  const CriticalPoint* boundary = nullptr;
  for (const auto& pt : points)
    if (pt.sigma > 0.1 && pt.nappe_ok) boundary = &pt;
  REQUIRE(boundary != nullptr);
  CHECK(boundary->sigma == doctest::Approx(0.45093996697655).epsilon(1e-10));
  CHECK(std::abs(boundary->x(0) - 0.4355) <= 1e-4);
  CHECK(std::abs(boundary->x(1) - 0.0416) <= 1e-4);
  CHECK(std::abs(boundary->x(2) - 0.4335) <= 1e-4);
  CHECK(std::abs(boundary->primal_value + 0.6413) <= 1e-4);
  CHECK(boundary->inertia == Inertia{1, 0, 2});
  CHECK(boundary->certificate == Certificate::kkt_no_certificate);
  CHECK(std::abs(boundary->dual_value - oracle::dual_value(p.Q(), p.c(), boundary->sigma)) <= 1e-12);
}

TEST_CASE("diagonal instance with both dual roots on the mirror nappe") {
  const auto p = load("diag_mirror_nappe.json");
  const auto points = enumerate_kkt(p);
  std::vector<CriticalPoint> stationary;
  for (const auto& pt : points)
    if (pt.dual_stationary) stationary.push_back(pt);
  REQUIRE(stationary.size() == 2);
  CHECK(stationary[0].sigma == doctest::Approx(0.225).epsilon(1e-10));
  CHECK(stationary[1].sigma == doctest::Approx(0.6).epsilon(1e-10));
  for (const auto& pt : stationary) {
    CHECK_FALSE(pt.nappe_ok);
    CHECK(pt.certificate == Certificate::kkt_no_certificate);
  }
  const auto r = maximize_dual(p);
  CHECK_FALSE(r.certified());
}

TEST_CASE("diagonal instance certified at an interior root") {
  const auto p = load("diag_certified.json");
  const auto r = maximize_dual(p);
  REQUIRE(r.certified());
  CHECK(std::abs(r.point->sigma - 0.45) <= 1e-9);
  CHECK(std::abs(r.point->x(0) - 2.0) <= 1e-8);
  CHECK(std::abs(r.point->x(1) + 2.0) <= 1e-8);
  CHECK(std::abs(r.point->primal_value + 0.8) <= 1e-10);
  CHECK(r.point->inertia == Inertia{2, 0, 0});
}

TEST_CASE("certified at sigma = 0 for an interior minimizer") {
  Matrix Q = Matrix::Identity(2, 2) * 2.0;
  const auto p = ProblemInstance::create(Q, Vector{{2.0, 0.5}});
  const auto r = maximize_dual(p);
  REQUIRE(r.certified());
  CHECK(r.outcome == DualMaximum::Outcome::certified_at_zero);
  CHECK(r.point->sigma == 0.0);
  CHECK(r.point->x(0) == doctest::Approx(1.0));
  CHECK(r.point->x(1) == doctest::Approx(0.25));
}

TEST_CASE("hard case") {
  const auto p = load("hard_case.json");
  const auto r = maximize_dual(p);
  CHECK(r.outcome == DualMaximum::Outcome::boundary_hard_case);
  REQUIRE(r.point);
  CHECK(r.point->certificate == Certificate::boundary_hard_case);
  CHECK(r.point->sigma == doctest::Approx(1.0));
  CHECK(r.point->x(0) == doctest::Approx(0.5));
  CHECK(r.point->x(1) == doctest::Approx(0.5));
  CHECK(r.point->primal_value == doctest::Approx(-0.25));
  CHECK(kkt_check(p, r.point->x, r.point->sigma).within(1e-8));

  CHECK_THROWS_AS(dual_value(p, 1.0), SingularMatrixError);
  CHECK_THROWS_AS(recover_primal(p, 1.0), SingularMatrixError);

  // c not orthogonal to the null vector: the boundary route has no solution.
  const auto bad = ProblemInstance::create(Matrix::Identity(2, 2), Vector{{0.1, 1.0}});
  CHECK_THROWS_AS(hard_case_solve(bad, 1.0), HardCaseError);
}

TEST_CASE("negative sigma is rejected") {
  const auto p = load("indefinite_2x2.json");
  CHECK_THROWS_AS(dual_value(p, -0.5), std::domain_error);
  CHECK_THROWS_AS(dual_derivative(p, -0.5), std::domain_error);
  CHECK_THROWS_AS(recover_primal(p, -0.5), std::domain_error);
}

TEST_CASE("no positive-definite interval") {
  Matrix Q(2, 2);
  Q << -1, 0, 0, -1;
  const auto p = ProblemInstance::create(Q, Vector{{1.0, 0.0}});
  CHECK_FALSE(pd_interval(p));
  const auto r = maximize_dual(p);
  CHECK(r.outcome == DualMaximum::Outcome::no_pd_interval);
  CHECK_FALSE(r.certified());
}

TEST_CASE("certificate strings") {
  for (auto c : {Certificate::global_min_certified, Certificate::kkt_no_certificate,
                 Certificate::boundary_hard_case})
    CHECK(certificate_from_string(to_string(c)) == c);
  CHECK_FALSE(certificate_from_string("certified"));
}

TEST_CASE("property: dual matches hand elimination and duality gap closes") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 4;
    const auto p = generate_instance(oracle::kind_for(trial), n, 300 + trial);
    const double s = u(rng);
    if (factorize(assemble_G(p, s)).singular()) continue;
    const double ref = oracle::dual_value(p.Q(), p.c(), s);
    CHECK(std::abs(dual_value(p, s) - ref) <= 1e-9 * (1.0 + std::abs(ref)));
    const Vector x = recover_primal(p, s);
    CHECK(std::abs(total_complementary(p, x, s) - dual_value(p, s)) <= 1e-9 * (1.0 + std::abs(ref)));
  }
}

TEST_CASE("property: derivatives agree with central differences") {
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 4;
    const auto p = generate_instance(oracle::kind_for(trial), n, 500 + trial);
    const auto interval = pd_interval(p);
    if (!interval) continue;
    const double hi = std::isfinite(interval->hi) ? interval->hi : interval->lo + 5.0;
    const double s = interval->lo + 0.37 * (hi - interval->lo);
    const double h = 1e-5 * (hi - interval->lo);
    auto P = [&](double t) { return dual_value(p, t); };
    auto g = [&](double t) { return dual_derivative(p, t); };
    const double fd1 = oracle::central_difference(P, s, h);
    const double fd2 = oracle::central_difference(g, s, h);
    const double g1 = dual_derivative(p, s);
    const double g2 = dual_second_derivative(p, s);
    CHECK(std::abs(g1 - fd1) <= 1e-5 * (1.0 + std::abs(g1)));
    CHECK(std::abs(g2 - fd2) <= 1e-5 * (1.0 + std::abs(g2)));
    CHECK(g2 <= 1e-12);
    ++checked;
  }
  CHECK(checked > 50);
}

TEST_CASE("property: certified points satisfy KKT and beat every enumerated point") {
  int certified = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 4;
    const auto p = generate_instance(oracle::kind_for(trial), n, 1200 + trial);
    const auto r = maximize_dual(p);
    if (!r.certified()) continue;
    ++certified;
    const auto& pt = *r.point;
    const double scale = 1.0 + pt.x.cwiseAbs().maxCoeff();
    CHECK(kkt_check(p, pt.x, pt.sigma).within(1e-7 * scale * scale));
    CHECK(duality_gap(p, pt.x, pt.sigma) <= 1e-7 * (1.0 + std::abs(pt.primal_value)));
    for (const auto& other : enumerate_kkt(p))
      if (other.nappe_ok) CHECK(pt.primal_value <= other.primal_value + 1e-8 * (1.0 + std::abs(pt.primal_value)));
  }
  CHECK(certified > 25);
}

TEST_CASE("property: rotating the x_2 block preserves the dual") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 3 + trial % 3;
    const auto p = generate_instance(oracle::kind_for(trial), n, 1700 + trial);
    const Matrix B = oracle::block_rotation(oracle::random_orthogonal(n - 1, rng));
    const auto q = ProblemInstance::create(B * p.Q() * B.transpose(), B * p.c());
    const auto a = maximize_dual(p);
    const auto b = maximize_dual(q);
    CHECK(a.certified() == b.certified());
    if (a.certified() && b.certified()) {
      CHECK(std::abs(a.point->sigma - b.point->sigma) <= 1e-8 * (1.0 + a.point->sigma));
      CHECK(std::abs(a.point->primal_value - b.point->primal_value) <= 1e-8 * (1.0 + std::abs(a.point->primal_value)));
    }
  }
}
