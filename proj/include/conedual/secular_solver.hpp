#pragma once

// Diagonal specialization Q = diag(q). G(sigma) is diagonal with entries
// q_1 - sigma and q_i + sigma (i >= 2), so the dual is the rational secular
// function
//
//   P^d(sigma) = -1/2 [ c_1^2 / (q_1 - sigma) + sum_{i>=2} c_i^2 / (q_i + sigma) ]
//
// with poles at q_1 and at -q_i.

#include <stdexcept>
#include <vector>

#include "conedual/core_model.hpp"
#include "conedual/dual_solver.hpp"

namespace conedual {

struct DiagonalInstance {
  Vector q;
  Vector c;

  static DiagonalInstance create(Vector q, Vector c);
  int dim() const { return static_cast<int>(q.size()); }
  ProblemInstance to_dense(std::string name = {}) const;
};

/// Sigma landed within 1e-12 of the pole of term `index` (0-based).
class PoleError : public std::domain_error {
 public:
  PoleError(const std::string& what, int index) : std::domain_error(what), index_(index) {}
  int index() const { return index_; }

 private:
  int index_;
};

double secular_value(const DiagonalInstance& d, double sigma);
double secular_derivative(const DiagonalInstance& d, double sigma);
double secular_second_derivative(const DiagonalInstance& d, double sigma);

/// Sorted poles on [0, inf): {q_1 if q_1 >= 0} and {-q_i : i >= 2, -q_i >= 0}.
std::vector<double> secular_poles(const DiagonalInstance& d);

/// Every dual KKT point, completed componentwise (x_i = c_i / (q_i + sigma
/// delta_i)), sorted by sigma.
std::vector<CriticalPoint> secular_enumerate(const DiagonalInstance& d,
                                             const Tolerances& tol = {});

}  // namespace conedual
