#include "conedual/symmetric_kernel.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace conedual {

Factorization::Factorization(const Matrix& G, double tol_eig) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(G);
  eigenvalues_ = eig.eigenvalues();
  eigenvectors_ = eig.eigenvectors();
  const double norm_inf = G.cwiseAbs().rowwise().sum().maxCoeff();
  zero_threshold_ = tol_eig * std::max(1.0, norm_inf);
  for (double lambda : eigenvalues_) {
    if (std::abs(lambda) <= zero_threshold_) {
      ++inertia_.zero;
    } else if (lambda > 0.0) {
      ++inertia_.positive;
    } else {
      ++inertia_.negative;
    }
  }
  if (!singular()) lu_.compute(G);
}

Vector Factorization::solve(const Vector& rhs) const {
  if (singular()) {
    throw SingularMatrixError("matrix is singular; evaluate via the hard-case path instead");
  }
  return lu_.solve(rhs);
}

Vector Factorization::pseudo_solve(const Vector& rhs) const {
  Vector coeffs = eigenvectors_.transpose() * rhs;
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    coeffs(i) = std::abs(eigenvalues_(i)) <= zero_threshold_ ? 0.0 : coeffs(i) / eigenvalues_(i);
  }
  return eigenvectors_ * coeffs;
}

Factorization factorize(const Matrix& G, double tol_eig) { return Factorization(G, tol_eig); }

Vector solve_linear(const Factorization& f, const Vector& rhs) { return f.solve(rhs); }

double min_eigenvalue(const Matrix& G) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(G, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

std::vector<double> pencil_singular_sigmas(const ProblemInstance& p) {
  // det(Q + sigma L0) = -det(L0 Q + sigma I), so the singular sigmas are the
  // eigenvalues of -L0 Q.
  Matrix M = -p.Q();
  M.row(0) = p.Q().row(0);
  Eigen::EigenSolver<Matrix> eig(M, false);
  const double scale = 1.0 + p.Q().cwiseAbs().rowwise().sum().maxCoeff();

  std::vector<double> sigmas;
  for (const auto& lambda : eig.eigenvalues()) {
    // Double real roots may come back as a close complex pair.
    if (std::abs(lambda.imag()) > 1e-7 * scale) continue;
    double s = lambda.real();
    if (s < -1e-12 * scale) continue;
    sigmas.push_back(std::max(s, 0.0));
  }
  std::sort(sigmas.begin(), sigmas.end());

  std::vector<double> merged;
  for (double s : sigmas) {
    if (!merged.empty() && s - merged.back() <= 1e-9 * (1.0 + std::abs(s))) continue;
    merged.push_back(s);
  }

  // Polish each pole with Newton steps on the eigenvalue of G(sigma) nearest
  // zero; d lambda / d sigma = v' L0 v.
  for (double& s : merged) {
    for (int it = 0; it < 4; ++it) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(assemble_G(p, s));
      Eigen::Index k = 0;
      es.eigenvalues().cwiseAbs().minCoeff(&k);
      const Vector v = es.eigenvectors().col(k);
      const double slope = lambda_map(v) * 2.0;
      if (std::abs(slope) < 1e-8) break;
      const double step = es.eigenvalues()(k) / slope;
      if (std::abs(step) > 1e-6 * (1.0 + std::abs(s))) break;
      s = std::max(0.0, s - step);
      if (std::abs(step) <= 1e-16 * (1.0 + std::abs(s))) break;
    }
  }
  std::sort(merged.begin(), merged.end());
  return merged;
}

}  // namespace conedual
