#pragma once

// Problem data and the Lorentz-cone geometry for
//
//   min  P(x) = 1/2 x'Qx - c'x   s.t.  ||x_2|| <= x_1
//
// with x = (x_1, x_2), x_2 in R^{n-1}. The cone constraint is handled through
// the scalar measure Lambda(x) = 1/2 x'L0 x, L0 = diag(-1, 1, ..., 1).

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace conedual {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Malformed problem data (dimension mismatch, asymmetric Q, n < 2, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Relative asymmetry of Q tolerated on ingestion before symmetrizing.
inline constexpr double kSymmetryTolerance = 1e-12;

/// Immutable instance of the cone-constrained quadratic problem.
///
/// Q is symmetrized as 1/2 (Q + Q') on construction; asymmetry above
/// kSymmetryTolerance relative to max|Q_ij| is rejected.
class ProblemInstance {
 public:
  static ProblemInstance create(Matrix Q, Vector c, std::string name = {});

  int dim() const { return static_cast<int>(c_.size()); }
  const Matrix& Q() const { return Q_; }
  const Vector& c() const { return c_; }
  const std::string& name() const { return name_; }

 private:
  ProblemInstance(Matrix Q, Vector c, std::string name)
      : Q_(std::move(Q)), c_(std::move(c)), name_(std::move(name)) {}

  Matrix Q_;
  Vector c_;
  std::string name_;
};

/// L0 x: flips the sign of the first coordinate.
Vector lorentz_apply(const Vector& x);

/// Lambda(x) = 1/2 (-x_1^2 + ||x_2||^2). Non-positive on both nappes.
double lambda_map(const Vector& x);

/// P(x) = 1/2 x'Qx - c'x.
double primal_objective(const ProblemInstance& p, const Vector& x);

struct Feasibility {
  bool feasible;
  double violation;  // max(||x_2|| - x_1, -x_1, 0)
};

/// Membership in the closed cone {x_1 >= 0, ||x_2|| <= x_1} up to tol.
Feasibility is_feasible(const Vector& x, double tol);

/// G(sigma) = Q + sigma L0.
Matrix assemble_G(const ProblemInstance& p, double sigma);

/// Xi(x, sigma) = 1/2 x'G(sigma)x - c'x, defined for sigma >= 0.
/// Throws std::domain_error for sigma < 0, where the conjugate of the cone
/// indicator is +infinity.
double total_complementary(const ProblemInstance& p, const Vector& x,
                           double sigma);

}  // namespace conedual
