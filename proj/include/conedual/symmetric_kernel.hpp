#pragma once

#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "conedual/core_model.hpp"

namespace conedual {

inline constexpr double kDefaultEigTol = 1e-10;

/// Raised when a solve is attempted with a singular G(sigma). The caller
/// should route through the hard-case path instead.
class SingularMatrixError : public std::domain_error {
 public:
  explicit SingularMatrixError(const std::string& what,
                               double sigma = std::numeric_limits<double>::quiet_NaN())
      : std::domain_error(what), sigma_(sigma) {}

  /// Offending sigma, NaN when the matrix did not come from G(sigma).
  double sigma() const { return sigma_; }

 private:
  double sigma_;
};

/// Eigenvalue sign counts (n_pos, n_zero, n_neg).
struct Inertia {
  int positive = 0;
  int zero = 0;
  int negative = 0;

  bool operator==(const Inertia&) const = default;
  bool positive_definite() const { return zero == 0 && negative == 0; }
};

/// Symmetric factorization: full eigendecomposition for the inertia and an
/// LU factorization for solves. Read-only after construction.
class Factorization {
 public:
  Factorization(const Matrix& G, double tol_eig);

  const Inertia& inertia() const { return inertia_; }
  bool singular() const { return inertia_.zero > 0; }
  int dim() const { return static_cast<int>(eigenvalues_.size()); }

  /// Ascending eigenvalues and matching orthonormal eigenvectors.
  const Vector& eigenvalues() const { return eigenvalues_; }
  const Matrix& eigenvectors() const { return eigenvectors_; }

  /// |lambda| at or below this counts as zero: tol_eig * max(1, ||G||_inf).
  double zero_threshold() const { return zero_threshold_; }

  /// Solves G x = rhs. Throws SingularMatrixError when singular.
  Vector solve(const Vector& rhs) const;

  /// Minimum-norm least-squares solution ignoring the numerically null
  /// eigenspace. Valid for singular factorizations.
  Vector pseudo_solve(const Vector& rhs) const;

 private:
  Vector eigenvalues_;
  Matrix eigenvectors_;
  Eigen::PartialPivLU<Matrix> lu_;
  Inertia inertia_;
  double zero_threshold_;
};

Factorization factorize(const Matrix& G, double tol_eig = kDefaultEigTol);

Vector solve_linear(const Factorization& f, const Vector& rhs);

double min_eigenvalue(const Matrix& G);

/// Sorted real sigma >= 0 with det(Q + sigma L0) = 0, i.e. the real
/// nonnegative eigenvalues of -L0 Q. Near-duplicates (double roots) are merged.
std::vector<double> pencil_singular_sigmas(const ProblemInstance& p);

}  // namespace conedual
