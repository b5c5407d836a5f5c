#include "conedual/verify_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>
#include <vector>

namespace conedual {

namespace {

constexpr int kPolishStarts = 32;
constexpr int kPolishIterations = 2000;
constexpr double kPolishStopStep = 1e-12;
constexpr double kNegativeCurvature = -1e-10;

// Lexicographic order on coordinates, used to break value ties so the
// reduction does not depend on visiting order.
bool lex_less(const Vector& a, const Vector& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

bool better(double va, const Vector& a, double vb, const Vector& b) {
  if (va != vb) return va < vb;
  return lex_less(a, b);
}

// Directions (1, w) with w on a deterministic grid of the unit ball of R^{n-1}.
std::vector<Vector> cone_directions(int n, int resolution) {
  std::vector<Vector> dirs;
  auto push = [&](std::initializer_list<double> w) {
    Vector d(n);
    d(0) = 1.0;
    int i = 1;
    for (double v : w) d(i++) = v;
    dirs.push_back(std::move(d));
  };
  const double pi = std::numbers::pi;
  if (n == 2) {
    for (int j = 0; j <= resolution; ++j) push({-1.0 + 2.0 * j / resolution});
  } else if (n == 3) {
    const int radial = std::max(4, resolution / 4);
    const int angular = std::max(8, resolution / 2);
    push({0.0, 0.0});
    for (int j = 1; j <= radial; ++j) {
      const double r = static_cast<double>(j) / radial;
      for (int m = 0; m < angular; ++m) {
        const double th = 2.0 * pi * m / angular;
        push({r * std::cos(th), r * std::sin(th)});
      }
    }
  } else {
    const int radial = std::max(4, resolution / 8);
    const int polar = std::max(4, resolution / 8);
    const int azimuth = std::max(8, resolution / 4);
    push({0.0, 0.0, 0.0});
    for (int j = 1; j <= radial; ++j) {
      const double r = static_cast<double>(j) / radial;
      for (int k = 0; k <= polar; ++k) {
        const double ph = pi * k / polar;
        const int nth = (k == 0 || k == polar) ? 1 : azimuth;
        for (int m = 0; m < nth; ++m) {
          const double th = 2.0 * pi * m / azimuth;
          push({r * std::sin(ph) * std::cos(th), r * std::sin(ph) * std::sin(th), r * std::cos(ph)});
        }
      }
    }
  }
  return dirs;
}

// Projection onto {x in K : x_1 <= radius}. When the cone projection leaves
// the slice, the answer lies on the cap x_1 = radius, a ball of that radius.
Vector project_truncated(const Vector& x, double radius) {
  Vector y = projection_lorentz(x);
  if (y(0) <= radius) return y;
  y = x;
  y(0) = radius;
  const double r = y.tail(y.size() - 1).norm();
  if (r > radius) y.tail(y.size() - 1) *= radius / r;
  return y;
}

}  // namespace

double KKTResiduals::max() const {
  return std::max({stationarity, primal_feas, nappe_violation, dual_feas, complementarity});
}

KKTResiduals kkt_check(const ProblemInstance& p, const Vector& x, double sigma) {
  KKTResiduals r;
  const Vector residual = p.Q() * x + sigma * lorentz_apply(x) - p.c();
  const double lam = lambda_map(x);
  r.stationarity = residual.lpNorm<Eigen::Infinity>();
  r.primal_feas = std::max(lam, 0.0);
  r.nappe_violation = std::max(-x(0), 0.0);
  r.dual_feas = std::max(-sigma, 0.0);
  r.complementarity = std::abs(sigma * lam);
  return r;
}

double duality_gap(const ProblemInstance& p, const Vector& x, double sigma, double tol_eig) {
  const Factorization f = factorize(assemble_G(p, sigma), tol_eig);
  if (f.singular()) throw SingularMatrixError("G(sigma) is singular; duality gap undefined", sigma);
  const double dual = -0.5 * p.c().dot(f.solve(p.c()));
  return std::abs(primal_objective(p, x) - dual);
}

Vector projection_lorentz(const Vector& x) {
  const Eigen::Index m = x.size() - 1;
  const double t = x(0);
  const double r = x.tail(m).norm();
  if (r <= t) return x;
  if (r <= -t) return Vector::Zero(x.size());
  const double scale = 0.5 * (t + r);
  Vector y(x.size());
  y(0) = scale;
  y.tail(m) = (scale / r) * x.tail(m);
  return y;
}

OracleResult brute_force_min(const ProblemInstance& p, double radius, int resolution) {
  const int n = p.dim();
  if (n > kOracleMaxDim) {
    throw InputError("brute-force oracle supports n <= 4, got n = " + std::to_string(n));
  }
  if (!(radius > 0.0)) throw InputError("oracle radius must be positive");
  if (resolution < kOracleMinResolution) {
    throw InputError("oracle resolution must be at least " + std::to_string(kOracleMinResolution));
  }

  const Matrix& Q = p.Q();
  const Vector& c = p.c();
  const std::vector<Vector> dirs = cone_directions(n, resolution);

  OracleResult result;
  result.grid_resolution = resolution;

  // Along x = t d the objective is t^2 a - t b with a = d'Qd / 2, b = c'd.
  struct Candidate {
    double value;
    int level;
    int dir;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(static_cast<std::size_t>(resolution) * dirs.size() + 1);
  candidates.push_back({0.0, 0, 0});

  std::optional<Vector> steepest;
  double steepest_curv = 0.0;
  for (int j = 0; j < static_cast<int>(dirs.size()); ++j) {
    const Vector& d = dirs[j];
    const double a = 0.5 * d.dot(Q * d);
    const double b = c.dot(d);
    for (int k = 1; k <= resolution; ++k) {
      const double t = radius * k / resolution;
      candidates.push_back({t * t * a - t * b, k, j});
    }
    const Vector unit = d.normalized();
    const double curv = unit.dot(Q * unit);
    if (!steepest || better(curv, unit, steepest_curv, *steepest)) {
      steepest = unit;
      steepest_curv = curv;
    }
  }
  result.min_sampled_curvature = steepest_curv;
  if (steepest_curv < kNegativeCurvature) result.unbounded_direction = steepest;

  auto point_of = [&](const Candidate& cand) -> Vector {
    return (radius * cand.level / resolution) * dirs[cand.dir];
  };
  auto cand_less = [&](const Candidate& u, const Candidate& v) {
    if (u.value != v.value) return u.value < v.value;
    return lex_less(point_of(u), point_of(v));
  };
  const std::size_t starts = std::min<std::size_t>(kPolishStarts, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + starts, candidates.end(), cand_less);

  result.best_x = point_of(candidates.front());
  result.best_value = primal_objective(p, result.best_x);

  const double step = 1.0 / (Q.cwiseAbs().rowwise().sum().maxCoeff() + 1.0);
  for (std::size_t s = 0; s < starts; ++s) {
    Vector x = point_of(candidates[s]);
    for (int it = 0; it < kPolishIterations; ++it) {
      const Vector next = project_truncated(x - step * (Q * x - c), radius);
      const double moved = (next - x).norm();
      x = next;
      if (moved < kPolishStopStep) break;
    }
    const double value = primal_objective(p, x);
    if (better(value, x, result.best_value, result.best_x)) {
      result.best_value = value;
      result.best_x = x;
    }
  }
  result.refined = true;
  return result;
}

double default_oracle_radius(const ProblemInstance& p,
                             std::optional<double> certified_min_curvature) {
  if (!certified_min_curvature) return 10.0;
  return 4.0 * (1.0 + p.c().norm() / std::max(1e-6, std::abs(*certified_min_curvature)));
}

}  // namespace conedual
