#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include <json.hpp>

#include "conedual/dual_solver.hpp"
#include "conedual/io.hpp"
#include "conedual/verify_oracle.hpp"
#include "oracles.hpp"

using namespace conedual;

TEST_CASE("kkt_check on the 2x2 example") {
  const auto p = io::load_problem(oracle::fixture("indefinite_2x2.json"));
  const double s = 1.2909090909090909;
  const auto r = kkt_check(p, Vector{{0.55, 0.55}}, s);
  CHECK(r.within(1e-12));
  const auto off = kkt_check(p, Vector{{0.55, 0.56}}, s);
  CHECK(off.stationarity > 1e-3);
  CHECK(off.primal_feas > 0.0);
  CHECK(kkt_check(p, Vector{{-0.55, 0.55}}, s).nappe_violation == doctest::Approx(0.55));
  CHECK(kkt_check(p, Vector{{0.55, 0.55}}, -1.0).dual_feas == doctest::Approx(1.0));
  CHECK(duality_gap(p, Vector{{0.55, 0.55}}, s) <= 1e-12);
}

TEST_CASE("bad claim fails stationarity") {
  const auto p = io::load_problem(oracle::fixture("diag_mirror_nappe.json"));
  const auto r = kkt_check(p, Vector{{2.0, -2.0}}, 0.45);
  CHECK(r.stationarity > 0.1);
  CHECK_FALSE(r.within(1e-8));
}

TEST_CASE("duality_gap at a singular sigma") {
  const auto p = io::load_problem(oracle::fixture("hard_case.json"));
  CHECK_THROWS_AS(duality_gap(p, Vector{{0.5, 0.5}}, 1.0), SingularMatrixError);
}

TEST_CASE("projection_lorentz") {
  const Vector inside{{2.0, 1.0, 0.5}};
  CHECK(projection_lorentz(inside) == inside);
  CHECK(projection_lorentz(Vector{{-3.0, 1.0, 0.0}}).isZero());
  const Vector y = projection_lorentz(Vector{{0.0, 2.0, 0.0}});
  CHECK(y(0) == doctest::Approx(1.0));
  CHECK(y(1) == doctest::Approx(1.0));

  std::mt19937_64 rng(41);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 200; ++trial) {
    Vector x(3 + trial % 3);
    for (auto& v : x) v = nd(rng);
    const Vector px = projection_lorentz(x);
    CHECK(is_feasible(px, 1e-12).feasible);
    CHECK((projection_lorentz(px) - px).norm() <= 1e-12);
    // Moreau: x - P(x) lies in the polar cone and is orthogonal to P(x).
    CHECK(std::abs(px.dot(x - px)) <= 1e-10 * (1.0 + x.squaredNorm()));
    CHECK(is_feasible(-(x - px), 1e-10).feasible);
  }
}

TEST_CASE("oracle on the 3x3 example detects the unbounded direction") {
  const auto p = io::load_problem(oracle::fixture("unbounded_3x3.json"));
  std::ifstream in(oracle::fixture("unbounded_3x3_oracle.json"));
  const auto expect = nlohmann::json::parse(in);
  const auto r = brute_force_min(p, expect.at("radius").get<double>(), expect.at("resolution").get<int>());

  const double reported = expect.at("reported_value").get<double>();
  CHECK((r.best_value < reported - 1e-4) == expect.at("beats_reported_by_more_than_1e-4").get<bool>());
  CHECK(r.unbounded_direction.has_value() == expect.at("unbounded_direction_reported").get<bool>());
  CHECK(r.best_value == doctest::Approx(expect.at("best_value").get<double>()).epsilon(1e-6));
  CHECK(r.min_sampled_curvature == doctest::Approx(expect.at("min_sampled_curvature").get<double>()).epsilon(1e-9));
  CHECK(r.min_sampled_curvature >= oracle::jacobi_eigenvalues(p.Q()).front() - 1e-12);
  CHECK(is_feasible(r.best_x, 1e-12).feasible);
  CHECK(r.best_x(0) <= 5.0 + 1e-12);
  CHECK(primal_objective(p, r.best_x) == r.best_value);
  REQUIRE(r.unbounded_direction);
  CHECK(is_feasible(*r.unbounded_direction, 1e-12).feasible);
  CHECK(r.unbounded_direction->dot(p.Q() * *r.unbounded_direction) < -1e-10);
}

TEST_CASE("oracle agrees with certified 2x2 solution") {
  const auto p = io::load_problem(oracle::fixture("indefinite_2x2.json"));
  const auto r = brute_force_min(p, 5.0, 128);
  CHECK(std::abs(r.best_value + 0.3025) <= 1e-6);
  CHECK(r.refined);
  CHECK(r.grid_resolution == 128);
}

TEST_CASE("oracle input validation") {
  const auto p = io::load_problem(oracle::fixture("indefinite_2x2.json"));
  CHECK_THROWS_AS(brute_force_min(p, 0.0, 128), InputError);
  CHECK_THROWS_AS(brute_force_min(p, 1.0, 8), InputError);
  const auto big = generate_instance(InstanceKind::convex, 5, 1);
  CHECK_THROWS_AS(brute_force_min(big, 1.0, 64), InputError);
}

TEST_CASE("oracle is deterministic") {
  const auto p = generate_instance(InstanceKind::indefinite, 4, 77);
  const auto a = brute_force_min(p, 3.0, 32);
  const auto b = brute_force_min(p, 3.0, 32);
  CHECK(a.best_value == b.best_value);
  CHECK(a.best_x == b.best_x);
}

TEST_CASE("default_oracle_radius") {
  const auto p = io::load_problem(oracle::fixture("indefinite_2x2.json"));
  CHECK(default_oracle_radius(p, std::nullopt) == 10.0);
  CHECK(default_oracle_radius(p, 0.5) == doctest::Approx(4.0 * (1.0 + std::sqrt(0.61) / 0.5)));
}

TEST_CASE("property: certified minima are never beaten by the oracle") {
  int checked = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const int n = 2 + trial % 2;
    const auto p = generate_instance(oracle::kind_for(trial), n, 4000 + trial);
    const auto r = maximize_dual(p);
    if (!r.certified()) continue;
    const double curv = min_eigenvalue(assemble_G(p, r.point->sigma));
    const auto o = brute_force_min(p, default_oracle_radius(p, curv), 64);
    CHECK(r.point->primal_value <= o.best_value + 1e-6 * (1.0 + std::abs(o.best_value)));
    ++checked;
  }
  CHECK(checked > 10);
}
