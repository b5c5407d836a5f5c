#include "conedual/dual_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "root_scan.hpp"

namespace conedual {

namespace {

constexpr std::array<std::pair<Certificate, std::string_view>, 3> kCertificateNames{{
    {Certificate::global_min_certified, "global_min_certified"},
    {Certificate::kkt_no_certificate, "kkt_no_certificate"},
    {Certificate::boundary_hard_case, "boundary_hard_case"},
}};

void require_nonnegative(double sigma) {
  if (!(sigma >= 0.0)) {
    throw std::domain_error("sigma must be >= 0, got " + std::to_string(sigma));
  }
}

Factorization factor_at(const ProblemInstance& p, double sigma, double tol_eig) {
  Factorization f = factorize(assemble_G(p, sigma), tol_eig);
  if (f.singular()) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "G(sigma) is singular at sigma = " << sigma;
    throw SingularMatrixError(msg.str(), sigma);
  }
  return f;
}

double inf_norm(const Matrix& M) { return M.cwiseAbs().rowwise().sum().maxCoeff(); }

// Moves a singular endpoint onto the exact pencil pole when it is close.
double snap_to_pole(double sigma, const std::vector<double>& poles) {
  for (double pole : poles) {
    if (std::abs(pole - sigma) <= 1e-7 * (1.0 + std::abs(pole))) return pole;
  }
  return sigma;
}

// Bisects the PD boundary between a PD point `inside` and a non-PD point
// `outside` on the sign of lambda_min(G(sigma)).
double bisect_pd_boundary(const ProblemInstance& p, double inside, double outside,
                          const Tolerances& tol) {
  for (int it = 0; it < tol.max_iter; ++it) {
    const double mid = 0.5 * (inside + outside);
    if (mid == inside || mid == outside) break;
    if (min_eigenvalue(assemble_G(p, mid)) > 0.0) {
      inside = mid;
    } else {
      outside = mid;
    }
    if (std::abs(outside - inside) <= 1e-3 * tol.root * (1.0 + std::abs(mid))) break;
  }
  return 0.5 * (inside + outside);
}

// Steps inward from a singular endpoint until g can be evaluated.
std::optional<std::pair<double, double>> inner_sample(const ProblemInstance& p, double end,
                                                      double toward, const Tolerances& tol) {
  double offset = 1e-9 * (1.0 + std::abs(end));
  const double span = std::abs(toward - end);
  const double dir = toward > end ? 1.0 : -1.0;
  for (int k = 0; k < 12 && offset < 0.5 * span; ++k, offset *= 10.0) {
    const double s = end + dir * offset;
    try {
      return std::make_pair(s, dual_derivative(p, s, tol.eig));
    } catch (const SingularMatrixError&) {
    }
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(Certificate c) {
  for (const auto& [value, name] : kCertificateNames) {
    if (value == c) return name;
  }
  return "unknown";
}

std::optional<Certificate> certificate_from_string(std::string_view s) {
  for (const auto& [value, name] : kCertificateNames) {
    if (name == s) return value;
  }
  return std::nullopt;
}

double dual_value(const ProblemInstance& p, double sigma, double tol_eig) {
  require_nonnegative(sigma);
  const Vector x = factor_at(p, sigma, tol_eig).solve(p.c());
  return -0.5 * p.c().dot(x);
}

double dual_derivative(const ProblemInstance& p, double sigma, double tol_eig) {
  require_nonnegative(sigma);
  return lambda_map(factor_at(p, sigma, tol_eig).solve(p.c()));
}

double dual_second_derivative(const ProblemInstance& p, double sigma, double tol_eig) {
  require_nonnegative(sigma);
  const Factorization f = factor_at(p, sigma, tol_eig);
  const Vector w = lorentz_apply(f.solve(p.c()));
  return -w.dot(f.solve(w));
}

Vector recover_primal(const ProblemInstance& p, double sigma, double tol_eig) {
  require_nonnegative(sigma);
  return factor_at(p, sigma, tol_eig).solve(p.c());
}

std::optional<DualInterval> pd_interval(const ProblemInstance& p, const Tolerances& tol) {
  const double q11 = p.Q()(0, 0);
  auto is_pd = [&](double s) {
    return factorize(assemble_G(p, s), tol.eig).inertia().positive_definite();
  };

  std::optional<double> seed;
  if (is_pd(0.0)) {
    seed = 0.0;
  } else if (q11 > 0.0) {
    // G_11 = Q_11 - sigma caps the interval below Q_11.
    constexpr int kGrid = 128;
    for (int k = 0; k < kGrid && !seed; ++k) {
      const double geometric = q11 * std::pow(10.0, -12.0 + 12.0 * k / kGrid);
      const double uniform = q11 * (k + 0.5) / kGrid;
      if (is_pd(geometric)) seed = geometric;
      else if (is_pd(uniform)) seed = uniform;
    }
    if (!seed) {
      // lambda_min(G(sigma)) is concave in sigma: golden-section search for
      // its maximum catches intervals narrower than the grid spacing.
      const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
      double a = 0.0;
      double b = q11;
      double x1 = b - phi * (b - a);
      double x2 = a + phi * (b - a);
      double f1 = min_eigenvalue(assemble_G(p, x1));
      double f2 = min_eigenvalue(assemble_G(p, x2));
      for (int it = 0; it < tol.max_iter && b - a > 1e-15 * (1.0 + q11); ++it) {
        if (f1 < f2) {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + phi * (b - a);
          f2 = min_eigenvalue(assemble_G(p, x2));
        } else {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = b - phi * (b - a);
          f1 = min_eigenvalue(assemble_G(p, x1));
        }
        if (is_pd(x1)) {
          seed = x1;
          break;
        }
        if (is_pd(x2)) {
          seed = x2;
          break;
        }
      }
    }
  }
  if (!seed) return std::nullopt;

  const std::vector<double> poles = pencil_singular_sigmas(p);
  DualInterval interval;
  interval.kind = DualInterval::Kind::positive_definite;
  if (*seed == 0.0) {
    interval.lo = 0.0;
    interval.lo_closed = true;
  } else {
    interval.lo = snap_to_pole(bisect_pd_boundary(p, *seed, 0.0, tol), poles);
    interval.lo_singular = true;
  }
  // sigma = Q_11 is never PD (zero diagonal entry), so it brackets from above.
  interval.hi = snap_to_pole(bisect_pd_boundary(p, *seed, std::max(q11, *seed), tol), poles);
  interval.hi_singular = true;
  return interval;
}

CriticalPoint make_critical_point(const ProblemInstance& p, double sigma,
                                  const Tolerances& tol) {
  const Factorization f = factor_at(p, sigma, tol.eig);
  CriticalPoint pt;
  pt.sigma = sigma;
  pt.x = f.solve(p.c());
  pt.dual_value = -0.5 * p.c().dot(pt.x);
  pt.primal_value = primal_objective(p, pt.x);
  pt.dual_gradient = lambda_map(pt.x);
  pt.inertia = f.inertia();
  pt.nappe_ok = pt.x(0) >= -tol.kkt * (1.0 + pt.x.lpNorm<Eigen::Infinity>());
  pt.dual_stationary = std::abs(pt.dual_gradient) <= tol.root;
  pt.certificate = pt.inertia.positive_definite() && pt.nappe_ok
                       ? Certificate::global_min_certified
                       : Certificate::kkt_no_certificate;
  return pt;
}

CriticalPoint hard_case_solve(const ProblemInstance& p, double sigma_sing,
                              const Tolerances& tol) {
  require_nonnegative(sigma_sing);
  const Factorization f = factorize(assemble_G(p, sigma_sing), tol.eig);
  if (!f.singular()) {
    throw HardCaseError("G(sigma) is not singular at the requested sigma");
  }

  const Vector& c = p.c();
  Eigen::Index null_index = 0;
  f.eigenvalues().cwiseAbs().minCoeff(&null_index);
  for (Eigen::Index i = 0; i < f.eigenvalues().size(); ++i) {
    if (std::abs(f.eigenvalues()(i)) > f.zero_threshold()) continue;
    if (std::abs(f.eigenvectors().col(i).dot(c)) > tol.kkt * c.norm()) {
      throw HardCaseError(
          "no boundary solution via this route: c is not orthogonal to the null space of G(sigma)");
    }
  }

  const Vector xp = f.pseudo_solve(c);
  const Vector v = f.eigenvectors().col(null_index);

  // Lambda(xp + t v) = a t^2 + b t + c0.
  const double a = lambda_map(v);
  const double b = xp.dot(lorentz_apply(v));
  const double c0 = lambda_map(xp);
  std::vector<double> roots;
  if (std::abs(a) <= 1e-14) {
    if (std::abs(b) > 1e-14) roots.push_back(-c0 / b);
    else if (std::abs(c0) <= tol.kkt) roots.push_back(0.0);
  } else {
    const double disc = b * b - 4.0 * a * c0;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      // Cancellation-free pair of roots.
      const double qq = -0.5 * (b + std::copysign(sq, b));
      if (qq != 0.0) {
        roots.push_back(qq / a);
        roots.push_back(c0 / qq);
      } else {
        roots.push_back(0.0);
      }
    }
  }

  std::optional<double> chosen;
  for (double t : roots) {
    const double x1 = xp(0) + t * v(0);
    if (x1 < -tol.kkt * (1.0 + std::abs(t) + xp.lpNorm<Eigen::Infinity>())) continue;
    if (!chosen || std::abs(t) < std::abs(*chosen)) chosen = t;
  }
  if (!chosen) {
    throw HardCaseError("no boundary solution via this route: no null-space step reaches the cone");
  }

  CriticalPoint pt;
  pt.sigma = sigma_sing;
  pt.x = xp + *chosen * v;
  pt.primal_value = primal_objective(p, pt.x);
  pt.dual_value = total_complementary(p, pt.x, sigma_sing);
  pt.dual_gradient = lambda_map(pt.x);
  pt.inertia = f.inertia();
  pt.certificate = Certificate::boundary_hard_case;
  pt.nappe_ok = true;
  pt.dual_stationary = true;
  return pt;
}

DualMaximum maximize_dual(const ProblemInstance& p, const Tolerances& tol) {
  DualMaximum result;
  result.interval = pd_interval(p, tol);
  if (!result.interval) {
    result.outcome = DualMaximum::Outcome::no_pd_interval;
    result.message = "no sigma >= 0 with G(sigma) positive definite";
    return result;
  }
  const DualInterval& I = *result.interval;

  auto finish = [&](CriticalPoint pt, DualMaximum::Outcome ok) {
    if (!pt.nappe_ok) {
      result.outcome = DualMaximum::Outcome::negative_nappe;
      result.message = "stationary point in the PD interval lies on the negative nappe (x_1 < 0)";
    } else {
      result.outcome = ok;
    }
    result.point = std::move(pt);
    return result;
  };

  std::optional<std::pair<double, double>> lower;
  if (I.lo_closed) {
    const double g0 = dual_derivative(p, I.lo, tol.eig);
    if (g0 <= tol.root) {
      return finish(make_critical_point(p, I.lo, tol), DualMaximum::Outcome::certified_at_zero);
    }
    lower = std::make_pair(I.lo, g0);
  } else {
    lower = inner_sample(p, I.lo, I.hi, tol);
  }
  const auto upper = inner_sample(p, I.hi, I.lo, tol);
  if (!lower || !upper) {
    result.outcome = DualMaximum::Outcome::no_pd_interval;
    result.message = "PD interval too narrow to evaluate the dual";
    return result;
  }

  const auto [a, ga] = *lower;
  const auto [b, gb] = *upper;
  if (ga <= 0.0) {
    result.outcome = DualMaximum::Outcome::decreasing_from_lower;
    result.message = "dual is decreasing from the singular lower endpoint; no certified point";
    return result;
  }
  if (gb > 0.0) {
    try {
      result.point = hard_case_solve(p, I.hi, tol);
      result.outcome = DualMaximum::Outcome::boundary_hard_case;
      result.message = "dual supremum at the singular upper endpoint (hard case)";
    } catch (const HardCaseError& e) {
      result.outcome = DualMaximum::Outcome::hard_case_unattained;
      result.message = std::string("no certificate; see oracle (") + e.what() + ")";
    }
    return result;
  }

  const detail::ScalarFn g = [&](double s) { return dual_derivative(p, s, tol.eig); };
  const detail::ScalarFn dg = [&](double s) { return dual_second_derivative(p, s, tol.eig); };
  const double root = detail::refine_root(g, dg, a, b, ga, gb, tol.max_iter);
  CriticalPoint pt = make_critical_point(p, root, tol);
  pt.dual_stationary = true;
  return finish(std::move(pt), DualMaximum::Outcome::certified_root);
}

std::vector<CriticalPoint> enumerate_kkt(const ProblemInstance& p, const Tolerances& tol) {
  const std::vector<double> poles = pencil_singular_sigmas(p);
  const double sigma_max = detail::enumeration_limit(poles, inf_norm(p.Q()));

  const detail::ScalarFn g = [&](double s) { return dual_derivative(p, s, tol.eig); };
  const detail::ScalarFn dg = [&](double s) { return dual_second_derivative(p, s, tol.eig); };

  std::vector<double> roots;
  for (const auto& [a, b] : detail::pole_intervals(poles, sigma_max)) {
    const auto found = detail::scan_roots(g, dg, a, b, tol.samples_per_interval, tol.max_iter);
    roots.insert(roots.end(), found.begin(), found.end());
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double u, double v) { return std::abs(u - v) <= 1e-12 * (1.0 + std::abs(u)); }),
              roots.end());

  std::vector<CriticalPoint> points;
  bool have_zero = !roots.empty() && roots.front() == 0.0;
  if (!have_zero) {
    try {
      if (dual_derivative(p, 0.0, tol.eig) <= tol.root) {
        CriticalPoint pt = make_critical_point(p, 0.0, tol);
        pt.dual_stationary = std::abs(pt.dual_gradient) <= tol.root;
        points.push_back(std::move(pt));
      }
    } catch (const SingularMatrixError&) {
    }
  }
  for (double s : roots) {
    try {
      CriticalPoint pt = make_critical_point(p, s, tol);
      pt.dual_stationary = true;
      points.push_back(std::move(pt));
    } catch (const SingularMatrixError&) {
    }
  }
  std::sort(points.begin(), points.end(),
            [](const CriticalPoint& u, const CriticalPoint& v) { return u.sigma < v.sigma; });
  return points;
}

}  // namespace conedual
