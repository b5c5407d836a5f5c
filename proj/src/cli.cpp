#include "conedual/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "conedual/generator.hpp"
#include "conedual/verify_oracle.hpp"

namespace conedual {

namespace {

std::string fmt(double v) { return io::format_double(v); }

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
  } else {
    io::write_file_atomic(out_path, text);
  }
}

void add_tolerance_flags(CLI::App* cmd, Tolerances& tol) {
  cmd->add_option("--tol-kkt", tol.kkt, "KKT residual / duality gap tolerance")->capture_default_str();
  cmd->add_option("--tol-eig", tol.eig, "relative eigenvalue singularity threshold")->capture_default_str();
  cmd->add_option("--tol-root", tol.root, "dual root tolerance")->capture_default_str();
  cmd->add_option("--max-iter", tol.max_iter, "root-finding iteration cap")->capture_default_str();
}

}  // namespace

int exit_code_for(const std::optional<CriticalPoint>& solution) {
  if (!solution) return kExitNoKktPoint;
  switch (solution->certificate) {
    case Certificate::global_min_certified:
      return kExitCertified;
    case Certificate::kkt_no_certificate:
      return kExitKktNoCertificate;
    case Certificate::boundary_hard_case:
      return kExitHardCase;
  }
  return kExitNoKktPoint;
}

io::SolveReport solve_problem(const ProblemInstance& p, const SolveOptions& opts) {
  const Tolerances& tol = opts.tol;
  io::SolveReport report;
  report.problem_name = p.name();
  report.n = p.dim();
  report.tolerances = tol;

  const DualMaximum best = maximize_dual(p, tol);
  report.critical_points = enumerate_kkt(p, tol);

  if (best.point && (best.certified() || best.point->certificate == Certificate::boundary_hard_case)) {
    report.solution = best.point;
    if (best.point->certificate == Certificate::boundary_hard_case) {
      report.critical_points.push_back(*best.point);
      std::sort(report.critical_points.begin(), report.critical_points.end(),
                [](const CriticalPoint& u, const CriticalPoint& v) { return u.sigma < v.sigma; });
      report.warnings.push_back("hard case: dual supremum attained only at singular G(sigma) = G(" +
                                fmt(best.point->sigma) + ")");
    }
  } else {
    if (!best.message.empty()) report.warnings.push_back(best.message);
    // Lowest primal value among KKT points on the admissible nappe.
    for (const auto& pt : report.critical_points) {
      if (!pt.nappe_ok) continue;
      if (!report.solution || pt.primal_value < report.solution->primal_value) report.solution = pt;
    }
  }

  for (const auto& pt : report.critical_points) {
    if (!pt.nappe_ok) {
      report.warnings.push_back("negative nappe: rejected KKT point at sigma = " + fmt(pt.sigma) +
                                " (x_1 = " + fmt(pt.x(0)) + ")");
    }
  }

  if (report.solution) {
    const CriticalPoint& s = *report.solution;
    if (s.certificate == Certificate::kkt_no_certificate) {
      report.warnings.push_back("certificate unavailable: G(sigma) not positive definite at sigma = " +
                                fmt(s.sigma) + ", inertia (" + std::to_string(s.inertia.positive) +
                                ", " + std::to_string(s.inertia.zero) + ", " +
                                std::to_string(s.inertia.negative) + ")");
    }
    report.kkt_residuals = kkt_check(p, s.x, s.sigma);
    try {
      report.duality_gap = duality_gap(p, s.x, s.sigma, tol.eig);
    } catch (const SingularMatrixError&) {
    }
  } else {
    report.warnings.push_back("no admissible KKT point found");
  }

  if (opts.run_oracle) {
    if (p.dim() > kOracleMaxDim) {
      report.warnings.push_back("oracle skipped: n > " + std::to_string(kOracleMaxDim));
    } else {
      std::optional<double> curvature;
      if (report.solution && report.solution->certificate == Certificate::global_min_certified) {
        curvature = min_eigenvalue(assemble_G(p, report.solution->sigma));
      }
      const double radius = opts.oracle_radius.value_or(default_oracle_radius(p, curvature));
      report.oracle = brute_force_min(p, radius, opts.oracle_resolution);
      if (report.oracle->unbounded_direction) {
        report.warnings.push_back("objective unbounded below on the cone: feasible direction with d'Qd = " +
                                  fmt(report.oracle->min_sampled_curvature));
      }
      if (report.solution) {
        const double slack = 1e-6 * (1.0 + std::abs(report.solution->primal_value));
        if (report.oracle->best_value < report.solution->primal_value - slack) {
          report.warnings.push_back("oracle found a feasible point with P = " +
                                    fmt(report.oracle->best_value) + " below the reported solution");
        }
      }
    }
  }

  report.exit_code = exit_code_for(report.solution);
  return report;
}

void write_sweep_csv(const ProblemInstance& p, double sigma_min, double sigma_max, int steps,
                     std::ostream& out, double tol_eig) {
  if (steps < 2) throw InputError("sweep needs at least 2 steps");
  out << "sigma,dual_value,dual_derivative,min_eigenvalue,is_pd\n";
  for (int k = 0; k < steps; ++k) {
    const double sigma = k + 1 == steps ? sigma_max
                                        : sigma_min + (sigma_max - sigma_min) * k / (steps - 1);
    const Factorization f = factorize(assemble_G(p, sigma), tol_eig);
    out << fmt(sigma) << ',';
    if (sigma >= 0.0 && !f.singular()) {
      const Vector x = f.solve(p.c());
      out << fmt(-0.5 * p.c().dot(x)) << ',' << fmt(lambda_map(x)) << ',';
    } else {
      out << ",,";
    }
    out << fmt(f.eigenvalues()(0)) << ','
        << (sigma >= 0.0 && f.inertia().positive_definite() ? "true" : "false") << '\n';
  }
}

CheckOutcome check_report(const ProblemInstance& p, const io::SolveReport& report) {
  if (report.n != 0 && report.n != p.dim()) {
    throw DimensionError("report is for n = " + std::to_string(report.n) + ", problem has n = " +
                         std::to_string(p.dim()));
  }
  if (!report.solution) throw InputError("report has no solution to check");
  const CriticalPoint& s = *report.solution;
  if (s.x.size() != p.dim()) {
    throw DimensionError("solution x has length " + std::to_string(s.x.size()) +
                         ", problem has n = " + std::to_string(p.dim()));
  }

  CheckOutcome outcome;
  const double tol = report.tolerances.kkt;
  const double xnorm = s.x.lpNorm<Eigen::Infinity>();
  outcome.residual_limit = tol * (1.0 + xnorm) * (1.0 + xnorm);
  outcome.residuals = kkt_check(p, s.x, s.sigma);
  const auto& r = outcome.residuals;
  auto require = [&](double value, const char* name) {
    if (value > outcome.residual_limit) {
      outcome.failures.push_back(std::string(name) + " residual " + fmt(value) + " exceeds " +
                                 fmt(outcome.residual_limit));
    }
  };
  require(r.stationarity, "stationarity");
  require(r.primal_feas, "primal feasibility");
  require(r.nappe_violation, "nappe");
  require(r.dual_feas, "dual feasibility");
  require(r.complementarity, "complementarity");

  const Factorization f = factorize(assemble_G(p, s.sigma), report.tolerances.eig);
  if (!f.singular()) {
    outcome.duality_gap = duality_gap(p, s.x, s.sigma, report.tolerances.eig);
    outcome.gap_limit = tol * (1.0 + std::abs(primal_objective(p, s.x)));
    if (*outcome.duality_gap > outcome.gap_limit) {
      outcome.failures.push_back("duality gap " + fmt(*outcome.duality_gap) + " exceeds " +
                                 fmt(outcome.gap_limit));
    }
  }
  if (s.certificate == Certificate::global_min_certified && !f.inertia().positive_definite()) {
    outcome.failures.push_back("certificate claimed but G(sigma) is not positive definite");
  }
  outcome.passed = outcome.failures.empty();
  return outcome;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Global minimization of quadratics over the Lorentz cone via the canonical dual"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(io::kToolVersion));

  SolveOptions solve_opts;
  std::string problem_path;
  std::string report_path;
  std::string out_path;
  double sigma_min = 0.0;
  double sigma_max = 1.0;
  int steps = 101;
  double radius = 10.0;
  int resolution = 128;
  std::string kind_name;
  int gen_n = 2;
  std::uint64_t seed = 0;
  std::vector<std::string> bench_files;
  int jobs = 1;

  auto* solve = app.add_subcommand("solve", "solve a problem file and write a report");
  solve->add_option("problem", problem_path, "problem file")->required();
  solve->add_option("--out", out_path, "report path (default: stdout)");
  add_tolerance_flags(solve, solve_opts.tol);
  solve->add_flag("--oracle", solve_opts.run_oracle, "also run the brute-force oracle (n <= 4)");
  auto* radius_opt = solve->add_option("--radius", radius, "oracle radius");
  solve->add_option("--resolution", solve_opts.oracle_resolution, "oracle grid resolution")
      ->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "sample the dual function as CSV");
  sweep->add_option("problem", problem_path, "problem file")->required();
  sweep->add_option("--sigma-min", sigma_min)->capture_default_str();
  sweep->add_option("--sigma-max", sigma_max)->capture_default_str();
  sweep->add_option("--steps", steps)->capture_default_str();
  sweep->add_option("--tol-eig", solve_opts.tol.eig)->capture_default_str();
  sweep->add_option("--out", out_path, "CSV path (default: stdout)");

  auto* check = app.add_subcommand("check", "re-verify a report against its problem");
  check->add_option("problem", problem_path, "problem file")->required();
  check->add_option("report", report_path, "report file")->required();

  auto* enumerate = app.add_subcommand("enumerate", "list every dual KKT point");
  enumerate->add_option("problem", problem_path, "problem file")->required();
  enumerate->add_option("--out", out_path, "output path (default: stdout)");
  add_tolerance_flags(enumerate, solve_opts.tol);

  auto* oracle = app.add_subcommand("oracle", "brute-force global minimum (n <= 4)");
  oracle->add_option("problem", problem_path, "problem file")->required();
  oracle->add_option("--radius", radius)->capture_default_str();
  oracle->add_option("--resolution", resolution)->capture_default_str();
  oracle->add_option("--out", out_path, "output path (default: stdout)");

  auto* gen = app.add_subcommand("gen", "generate a random problem file");
  gen->add_option("--kind", kind_name, "convex | indefinite | diagonal | hardcase")->required();
  gen->add_option("--n", gen_n, "dimension")->required();
  gen->add_option("--seed", seed, "generator seed")->capture_default_str();
  gen->add_option("--out", out_path, "output path (default: stdout)");

  auto* bench = app.add_subcommand("bench", "solve many problem files");
  bench->add_option("problems", bench_files, "problem files")->required();
  bench->add_option("--jobs", jobs, "concurrent solves")->capture_default_str();
  add_tolerance_flags(bench, solve_opts.tol);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*solve) {
      const ProblemInstance p = io::load_problem(problem_path);
      if (radius_opt->count() > 0) solve_opts.oracle_radius = radius;
      const io::SolveReport report = solve_problem(p, solve_opts);
      emit(io::report_to_json(report).dump(2) + "\n", out_path, out);
      if (!out_path.empty()) {
        out << "exit " << report.exit_code << ": "
            << (report.solution ? std::string(to_string(report.solution->certificate)) : "no solution")
            << '\n';
      }
      return report.exit_code;
    }
    if (*sweep) {
      const ProblemInstance p = io::load_problem(problem_path);
      std::ostringstream csv;
      write_sweep_csv(p, sigma_min, sigma_max, steps, csv, solve_opts.tol.eig);
      emit(csv.str(), out_path, out);
      return 0;
    }
    if (*check) {
      const ProblemInstance p = io::load_problem(problem_path);
      io::json j;
      try {
        j = io::json::parse(io::read_file(report_path));
      } catch (const io::json::parse_error& e) {
        throw io::ParseError("<report json>", e.what());
      }
      const io::SolveReport report = io::report_from_json(j);
      CheckOutcome outcome;
      try {
        outcome = check_report(p, report);
      } catch (const DimensionError& e) {
        err << "error: " << e.what() << '\n';
        return kExitDimension;
      }
      const auto& r = outcome.residuals;
      out << "stationarity " << fmt(r.stationarity) << "\nprimal_feas " << fmt(r.primal_feas)
          << "\nnappe_violation " << fmt(r.nappe_violation) << "\ndual_feas " << fmt(r.dual_feas)
          << "\ncomplementarity " << fmt(r.complementarity) << "\nduality_gap "
          << (outcome.duality_gap ? fmt(*outcome.duality_gap) : std::string("n/a (singular G)"))
          << '\n';
      for (const auto& f : outcome.failures) out << "FAIL " << f << '\n';
      out << (outcome.passed ? "PASS" : "FAIL") << '\n';
      return outcome.passed ? 0 : kExitCheckFailed;
    }
    if (*enumerate) {
      const ProblemInstance p = io::load_problem(problem_path);
      io::json points = io::json::array();
      for (const auto& pt : enumerate_kkt(p, solve_opts.tol)) points.push_back(io::point_to_json(pt));
      emit(io::json{{"critical_points", points}}.dump(2) + "\n", out_path, out);
      return 0;
    }
    if (*oracle) {
      const ProblemInstance p = io::load_problem(problem_path);
      const OracleResult r = brute_force_min(p, radius, resolution);
      emit(io::oracle_to_json(r).dump(2) + "\n", out_path, out);
      return 0;
    }
    if (*gen) {
      const auto kind = instance_kind_from_string(kind_name);
      if (!kind) {
        err << "error: unknown kind '" << kind_name << "' (convex | indefinite | diagonal | hardcase)\n";
        return kExitUsage;
      }
      emit(generate_problem_file(*kind, gen_n, seed), out_path, out);
      return 0;
    }
    if (*bench) {
      struct Row {
        std::string file;
        int code = kExitUsage;
        std::string detail;
        double millis = 0.0;
      };
      auto run_one = [&](const std::string& file) {
        Row row;
        row.file = file;
        const auto t0 = std::chrono::steady_clock::now();
        try {
          const io::SolveReport rep = solve_problem(io::load_problem(file), solve_opts);
          row.code = rep.exit_code;
          row.detail = rep.solution ? fmt(rep.solution->sigma) + "," + fmt(rep.solution->primal_value) + "," +
                                          std::string(to_string(rep.solution->certificate))
                                    : ",,none";
        } catch (const std::exception&) {
          row.detail = ",,error";
        }
        row.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        return row;
      };
      std::vector<Row> rows(bench_files.size());
      const std::size_t width = static_cast<std::size_t>(std::max(1, jobs));
      for (std::size_t start = 0; start < bench_files.size(); start += width) {
        std::vector<std::future<Row>> batch;
        for (std::size_t i = start; i < std::min(bench_files.size(), start + width); ++i) {
          batch.push_back(std::async(std::launch::async, run_one, bench_files[i]));
        }
        for (std::size_t i = 0; i < batch.size(); ++i) rows[start + i] = batch[i].get();
      }
      out << "file,exit_code,sigma,primal_value,certificate,millis\n";
      for (const auto& row : rows) {
        out << row.file << ',' << row.code << ',' << row.detail << ',' << fmt(row.millis) << '\n';
      }
      return 0;
    }
  } catch (const io::ParseError& e) {
    err << "error: malformed input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace conedual
