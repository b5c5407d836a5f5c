#pragma once

// Problem files and solve reports (JSON).
//
// Problem file:
//   {"name": "...", "n": 2, "Q": [[1.8, 0.4], [0.4, -0.6]], "c": [0.5, 0.6]}
// or, for diagonal Q,
//   {"name": "...", "n": 2, "diagonal": true, "q": [0.7, -0.3], "c": [0.5, -0.3]}

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "conedual/core_model.hpp"
#include "conedual/dual_solver.hpp"
#include "conedual/verify_oracle.hpp"

namespace conedual::io {

using nlohmann::json;

inline constexpr const char* kToolName = "conedual";
inline constexpr const char* kToolVersion = "1.0.0";

/// Malformed file content; `field()` names the offending key.
class ParseError : public InputError {
 public:
  ParseError(const std::string& field, const std::string& what)
      : InputError(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

ProblemInstance parse_problem(const json& j);
ProblemInstance parse_problem_text(const std::string& text);
ProblemInstance load_problem(const std::string& path);

/// Problem as JSON; `diagonal` emits the "q" form (Q must then be diagonal).
json problem_to_json(const ProblemInstance& p, bool diagonal = false);
std::string serialize_problem(const ProblemInstance& p, bool diagonal = false);

struct SolveReport {
  std::string problem_name;
  int n = 0;
  Tolerances tolerances;
  std::optional<CriticalPoint> solution;
  std::optional<KKTResiduals> kkt_residuals;
  std::optional<double> duality_gap;
  std::vector<CriticalPoint> critical_points;
  std::optional<OracleResult> oracle;
  std::vector<std::string> warnings;
  int exit_code = 4;
};

json point_to_json(const CriticalPoint& pt);
CriticalPoint point_from_json(const json& j);
json residuals_to_json(const KKTResiduals& r);
json oracle_to_json(const OracleResult& r);
json report_to_json(const SolveReport& r);
SolveReport report_from_json(const json& j);

std::string read_file(const std::string& path);

/// Writes via a temporary file in the same directory and renames it over
/// `path`.
void write_file_atomic(const std::string& path, const std::string& content);

/// Locale-independent, 17 significant digits.
std::string format_double(double v);

}  // namespace conedual::io
