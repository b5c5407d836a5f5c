#pragma once

// Independent referees for solver output: KKT residuals, the primal/dual
// gap, and a deterministic grid + projected-gradient search for the global
// minimum at desk scale (n <= 4). Nothing here calls into the dual solver.

#include <optional>

#include "conedual/core_model.hpp"
#include "conedual/symmetric_kernel.hpp"

namespace conedual {

struct KKTResiduals {
  double stationarity = 0.0;     // ||G(sigma) x - c||_inf
  double primal_feas = 0.0;      // max(Lambda(x), 0)
  double nappe_violation = 0.0;  // max(-x_1, 0)
  double dual_feas = 0.0;        // max(-sigma, 0)
  double complementarity = 0.0;  // |sigma Lambda(x)|

  double max() const;
  bool within(double tol) const { return max() <= tol; }
};

KKTResiduals kkt_check(const ProblemInstance& p, const Vector& x, double sigma);

/// |P(x) - P^d(sigma)|. Throws SingularMatrixError when G(sigma) is singular.
double duality_gap(const ProblemInstance& p, const Vector& x, double sigma,
                   double tol_eig = kDefaultEigTol);

/// Euclidean projection onto the closed Lorentz cone.
Vector projection_lorentz(const Vector& x);

struct OracleResult {
  Vector best_x;
  double best_value = 0.0;
  int grid_resolution = 0;
  bool refined = false;
  /// Feasible unit direction with d'Qd < -1e-10, if one was sampled.
  std::optional<Vector> unbounded_direction;
  double min_sampled_curvature = 0.0;
};

inline constexpr int kOracleMaxDim = 4;
inline constexpr int kOracleMinResolution = 16;

/// Deterministic grid over {0 <= x_1 <= radius, ||x_2|| <= x_1}, best grid
/// points polished by projected gradient. Throws InputError for n > 4,
/// radius <= 0 or resolution < 16.
OracleResult brute_force_min(const ProblemInstance& p, double radius, int resolution);

/// 4 (1 + ||c|| / max(1e-6, |min_curvature|)) with the smallest eigenvalue of
/// a certifying G(sigma); 10 when there is no certificate.
double default_oracle_radius(const ProblemInstance& p,
                             std::optional<double> certified_min_curvature);

}  // namespace conedual
