#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "conedual/core_model.hpp"
#include "conedual/dual_solver.hpp"
#include "conedual/io.hpp"

namespace conedual {

/// Process exit codes.
enum ExitCode : int {
  kExitCertified = 0,
  kExitCheckFailed = 1,
  kExitKktNoCertificate = 2,
  kExitHardCase = 3,
  kExitNoKktPoint = 4,
  kExitUsage = 64,     // malformed input or arguments
  kExitDimension = 65, // problem and report disagree on dimensions
};

/// Problem and report dimensions disagree.
class DimensionError : public InputError {
 public:
  using InputError::InputError;
};

/// Exit code implied by a report's solution certificate.
int exit_code_for(const std::optional<CriticalPoint>& solution);

struct SolveOptions {
  Tolerances tol;
  bool run_oracle = false;
  std::optional<double> oracle_radius;
  int oracle_resolution = 128;
};

/// Maximizes the dual, falls back to KKT enumeration when no certificate is
/// available, and assembles the report.
io::SolveReport solve_problem(const ProblemInstance& p, const SolveOptions& opts = {});

/// Dual curve samples with header sigma,dual_value,dual_derivative,min_eigenvalue,is_pd.
void write_sweep_csv(const ProblemInstance& p, double sigma_min, double sigma_max, int steps,
                     std::ostream& out, double tol_eig = kDefaultEigTol);

struct CheckOutcome {
  bool passed = false;
  KKTResiduals residuals;
  std::optional<double> duality_gap;
  double residual_limit = 0.0;
  double gap_limit = 0.0;
  std::vector<std::string> failures;
};

/// Recomputes the KKT residuals and duality gap of a report's solution.
/// Throws DimensionError when dimensions disagree and InputError when the
/// report has no solution.
CheckOutcome check_report(const ProblemInstance& p, const io::SolveReport& report);

/// Entry point behind the `conedual` binary.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace conedual
