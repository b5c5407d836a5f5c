#pragma once

// Canonical dual of the cone-constrained quadratic problem:
//
//   P^d(sigma) = -1/2 c' G(sigma)^{-1} c,   G(sigma) = Q + sigma L0,
//
// maximized over sigma >= 0 with det G(sigma) != 0. A dual KKT point sigma
// maps to the primal KKT point x = G(sigma)^{-1} c with P(x) = P^d(sigma); when
// G(sigma) is positive definite (and x lies on the x_1 >= 0 nappe) x is a
// global minimizer over the cone.

#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "conedual/core_model.hpp"
#include "conedual/symmetric_kernel.hpp"

namespace conedual {

struct Tolerances {
  double root = 1e-10;  // sigma bracket / |g| acceptance for dual roots
  double kkt = 1e-8;    // KKT residuals, duality gap, nappe and null-space checks
  double eig = 1e-10;   // relative singularity threshold for G(sigma)
  int max_iter = 200;
  int samples_per_interval = 64;
};

enum class Certificate {
  global_min_certified,
  kkt_no_certificate,
  boundary_hard_case,
};

std::string_view to_string(Certificate c);
std::optional<Certificate> certificate_from_string(std::string_view s);

struct DualInterval {
  enum class Kind { positive_definite, nonsingular_indefinite };

  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  Kind kind = Kind::positive_definite;
  bool lo_closed = false;
  bool lo_singular = false;
  bool hi_singular = false;

  bool contains(double sigma) const {
    return (lo_closed ? sigma >= lo : sigma > lo) && sigma < hi;
  }
};

struct CriticalPoint {
  double sigma = 0.0;
  Vector x;
  /// P^d(sigma); for boundary_hard_case points Xi(x, sigma), the limit value
  /// at the singular sigma.
  double dual_value = 0.0;
  double primal_value = 0.0;
  /// g(sigma) = dP^d/dsigma = Lambda(x).
  double dual_gradient = 0.0;
  Inertia inertia;
  Certificate certificate = Certificate::kkt_no_certificate;
  /// x_1 >= -tol, i.e. x is on the cone rather than its mirror nappe.
  bool nappe_ok = true;
  /// True for roots of g; false for the sigma = 0 point admitted with g(0) < 0.
  bool dual_stationary = true;
};

double dual_value(const ProblemInstance& p, double sigma,
                  double tol_eig = kDefaultEigTol);

/// g(sigma) = Lambda(G(sigma)^{-1} c).
double dual_derivative(const ProblemInstance& p, double sigma,
                       double tol_eig = kDefaultEigTol);

/// g'(sigma) = -(L0 x)' G(sigma)^{-1} (L0 x); non-positive where G is PD.
double dual_second_derivative(const ProblemInstance& p, double sigma,
                              double tol_eig = kDefaultEigTol);

/// x solving G(sigma) x = c. Throws SingularMatrixError when G is singular.
Vector recover_primal(const ProblemInstance& p, double sigma,
                      double tol_eig = kDefaultEigTol);

/// The maximal interval of sigma >= 0 with G(sigma) positive definite.
std::optional<DualInterval> pd_interval(const ProblemInstance& p,
                                        const Tolerances& tol = {});

/// Raised by hard_case_solve when the boundary route has no solution (the
/// dual supremum is not attained there).
class HardCaseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Solution at a singular sigma: x = x_p + t v with x_p the pseudo-solution of
/// G x = c, v a unit null vector and t chosen so that Lambda(x) = 0, x_1 >= 0.
CriticalPoint hard_case_solve(const ProblemInstance& p, double sigma_sing,
                              const Tolerances& tol = {});

struct DualMaximum {
  enum class Outcome {
    certified_at_zero,      // sigma = 0 in the PD interval and g(0) <= 0
    certified_root,         // interior root of g in the PD interval
    boundary_hard_case,     // g > 0 up to a singular upper endpoint, resolved
    hard_case_unattained,   // as above but the boundary route failed
    decreasing_from_lower,  // g < 0 from a positive lower endpoint
    negative_nappe,         // the PD stationary point lies on x_1 < 0
    no_pd_interval,
  };

  Outcome outcome = Outcome::no_pd_interval;
  std::optional<DualInterval> interval;
  /// Certified or hard-case point; for negative_nappe the rejected point.
  std::optional<CriticalPoint> point;
  std::string message;

  bool certified() const {
    return point && point->certificate == Certificate::global_min_certified;
  }
};

/// Maximizes the concave dual over the positive-definite interval.
DualMaximum maximize_dual(const ProblemInstance& p, const Tolerances& tol = {});

/// Completes a dual point: recovers x, evaluates both objectives, inertia,
/// nappe check and certificate.
CriticalPoint make_critical_point(const ProblemInstance& p, double sigma,
                                  const Tolerances& tol);

/// All dual KKT points on [0, sigma_max], sorted by sigma. Sampling per pole
/// interval is heuristic: tangential double roots can be missed.
std::vector<CriticalPoint> enumerate_kkt(const ProblemInstance& p,
                                         const Tolerances& tol = {});

}  // namespace conedual
