#include "conedual/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace conedual {

ProblemInstance ProblemInstance::create(Matrix Q, Vector c, std::string name) {
  const auto n = c.size();
  if (n < 2) {
    throw InputError("dimension n must be at least 2, got " + std::to_string(n));
  }
  if (Q.rows() != n || Q.cols() != n) {
    std::ostringstream msg;
    msg << "Q must be " << n << "x" << n << ", got " << Q.rows() << "x" << Q.cols();
    throw InputError(msg.str());
  }
  if (!Q.allFinite() || !c.allFinite()) {
    throw InputError("Q and c must contain only finite values");
  }
  const double scale = std::max(1.0, Q.cwiseAbs().maxCoeff());
  const double asym = (Q - Q.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTolerance * scale) {
    std::ostringstream msg;
    msg << "Q is not symmetric (max |Q_ij - Q_ji| = " << asym << ")";
    throw InputError(msg.str());
  }
  Matrix sym = 0.5 * (Q + Q.transpose());
  return ProblemInstance(std::move(sym), std::move(c), std::move(name));
}

Vector lorentz_apply(const Vector& x) {
  Vector y = x;
  y(0) = -y(0);
  return y;
}

double lambda_map(const Vector& x) {
  const double tail = x.tail(x.size() - 1).squaredNorm();
  return 0.5 * (tail - x(0) * x(0));
}

double primal_objective(const ProblemInstance& p, const Vector& x) {
  return 0.5 * x.dot(p.Q() * x) - p.c().dot(x);
}

Feasibility is_feasible(const Vector& x, double tol) {
  const double tail = x.tail(x.size() - 1).norm();
  const double violation = std::max({tail - x(0), -x(0), 0.0});
  return {tail <= x(0) + tol && x(0) >= -tol, violation};
}

Matrix assemble_G(const ProblemInstance& p, double sigma) {
  Matrix G = p.Q();
  G(0, 0) -= sigma;
  G.diagonal().tail(G.rows() - 1).array() += sigma;
  return G;
}

double total_complementary(const ProblemInstance& p, const Vector& x,
                           double sigma) {
  if (sigma < 0.0) {
    throw std::domain_error("total complementary function undefined for sigma < 0");
  }
  return primal_objective(p, x) + sigma * lambda_map(x);
}

}  // namespace conedual
