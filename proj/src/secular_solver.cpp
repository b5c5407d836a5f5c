#include "conedual/secular_solver.hpp"

#include <algorithm>
#include <cmath>

#include "root_scan.hpp"

namespace conedual {

namespace {

constexpr double kPoleTol = 1e-12;

// q_i + sigma delta_i with delta_1 = -1, delta_i = +1 otherwise.
Vector shifted_diagonal(const DiagonalInstance& d, double sigma) {
  if (sigma < 0.0) throw std::domain_error("sigma must be nonnegative");
  Vector h = d.q.array() + sigma;
  h(0) = d.q(0) - sigma;
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    if (std::abs(h(i)) <= kPoleTol) {
      throw PoleError("sigma hits the pole of term " + std::to_string(i + 1),
                      static_cast<int>(i));
    }
  }
  return h;
}

}  // namespace

DiagonalInstance DiagonalInstance::create(Vector q, Vector c) {
  if (q.size() < 2) throw InputError("diagonal instance needs n >= 2");
  if (q.size() != c.size()) throw InputError("q and c must have the same length");
  return {std::move(q), std::move(c)};
}

ProblemInstance DiagonalInstance::to_dense(std::string name) const {
  return ProblemInstance::create(q.asDiagonal(), c, std::move(name));
}

double secular_value(const DiagonalInstance& d, double sigma) {
  const Vector h = shifted_diagonal(d, sigma);
  return -0.5 * (d.c.array().square() / h.array()).sum();
}

double secular_derivative(const DiagonalInstance& d, double sigma) {
  const Vector h = shifted_diagonal(d, sigma);
  const Vector x = d.c.array() / h.array();
  return lambda_map(x);
}

double secular_second_derivative(const DiagonalInstance& d, double sigma) {
  const Vector h = shifted_diagonal(d, sigma);
  return -(d.c.array().square() / h.array().cube()).sum();
}

std::vector<double> secular_poles(const DiagonalInstance& d) {
  std::vector<double> poles;
  if (d.q(0) >= 0.0) poles.push_back(d.q(0));
  for (Eigen::Index i = 1; i < d.q.size(); ++i) {
    if (-d.q(i) >= 0.0) poles.push_back(-d.q(i));
  }
  std::sort(poles.begin(), poles.end());
  poles.erase(std::unique(poles.begin(), poles.end(),
                          [](double u, double v) { return std::abs(u - v) <= 1e-9 * (1.0 + std::abs(u)); }),
              poles.end());
  return poles;
}

std::vector<CriticalPoint> secular_enumerate(const DiagonalInstance& d, const Tolerances& tol) {
  const std::vector<double> poles = secular_poles(d);
  const double sigma_max = detail::enumeration_limit(poles, d.q.cwiseAbs().maxCoeff());

  // Same singularity threshold as the dense factorization, so both paths
  // skip the same near-pole samples.
  const detail::ScalarFn g = [&](double s) {
    const Vector h = shifted_diagonal(d, s);
    if (h.cwiseAbs().minCoeff() <= tol.eig * std::max(1.0, h.cwiseAbs().maxCoeff())) {
      throw PoleError("sigma is numerically at a pole", -1);
    }
    return secular_derivative(d, s);
  };
  const detail::ScalarFn dg = [&](double s) { return secular_second_derivative(d, s); };

  std::vector<double> roots;
  for (const auto& [a, b] : detail::pole_intervals(poles, sigma_max)) {
    const auto found = detail::scan_roots(g, dg, a, b, tol.samples_per_interval, tol.max_iter);
    roots.insert(roots.end(), found.begin(), found.end());
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double u, double v) { return std::abs(u - v) <= 1e-12 * (1.0 + std::abs(u)); }),
              roots.end());

  auto complete = [&](double sigma, bool stationary) {
    const Vector h = shifted_diagonal(d, sigma);
    CriticalPoint pt;
    pt.sigma = sigma;
    pt.x = d.c.array() / h.array();
    pt.dual_value = -0.5 * d.c.dot(pt.x);
    pt.primal_value = 0.5 * (d.q.array() * pt.x.array().square()).sum() - d.c.dot(pt.x);
    pt.dual_gradient = lambda_map(pt.x);
    const double threshold = tol.eig * std::max(1.0, h.cwiseAbs().maxCoeff());
    for (double hi : h) {
      if (std::abs(hi) <= threshold) ++pt.inertia.zero;
      else if (hi > 0.0) ++pt.inertia.positive;
      else ++pt.inertia.negative;
    }
    pt.nappe_ok = pt.x(0) >= -tol.kkt * (1.0 + pt.x.lpNorm<Eigen::Infinity>());
    pt.dual_stationary = stationary;
    pt.certificate = pt.inertia.positive_definite() && pt.nappe_ok
                         ? Certificate::global_min_certified
                         : Certificate::kkt_no_certificate;
    return pt;
  };

  std::vector<CriticalPoint> points;
  const bool have_zero = !roots.empty() && roots.front() == 0.0;
  if (!have_zero) {
    try {
      const double g0 = g(0.0);
      if (g0 <= tol.root) points.push_back(complete(0.0, std::abs(g0) <= tol.root));
    } catch (const PoleError&) {
    }
  }
  for (double s : roots) {
    try {
      points.push_back(complete(s, true));
    } catch (const PoleError&) {
    }
  }
  std::sort(points.begin(), points.end(),
            [](const CriticalPoint& u, const CriticalPoint& v) { return u.sigma < v.sigma; });
  return points;
}

}  // namespace conedual
