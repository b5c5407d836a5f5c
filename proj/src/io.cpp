#include "conedual/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

namespace conedual::io {

namespace {

Vector vector_field(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ParseError(where + key, "missing");
  const json& arr = j.at(key);
  if (!arr.is_array()) throw ParseError(where + key, "expected an array of numbers");
  Vector v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) {
      throw ParseError(where + key + "[" + std::to_string(i) + "]", "expected a number");
    }
    v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
  }
  return v;
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (double x : v) arr.push_back(x);
  return arr;
}

double number_field(const json& j, const std::string& key) {
  if (!j.contains(key) || !j.at(key).is_number()) throw ParseError(key, "expected a number");
  return j.at(key).get<double>();
}

}  // namespace

ProblemInstance parse_problem(const json& j) {
  if (!j.is_object()) throw ParseError("<root>", "expected a JSON object");
  if (!j.contains("n")) throw ParseError("n", "missing");
  if (!j.at("n").is_number_integer()) throw ParseError("n", "expected an integer");
  const auto n = j.at("n").get<long long>();
  if (n < 2) throw ParseError("n", "must be at least 2");

  std::string name;
  if (j.contains("name")) {
    if (!j.at("name").is_string()) throw ParseError("name", "expected a string");
    name = j.at("name").get<std::string>();
  }

  const Vector c = vector_field(j, "c", "");
  if (c.size() != n) throw ParseError("c", "length " + std::to_string(c.size()) + " != n");

  Matrix Q;
  const bool diagonal = j.contains("diagonal") && j.at("diagonal").is_boolean() &&
                        j.at("diagonal").get<bool>();
  if (j.contains("diagonal") && !j.at("diagonal").is_boolean()) {
    throw ParseError("diagonal", "expected a boolean");
  }
  if (diagonal) {
    const Vector q = vector_field(j, "q", "");
    if (q.size() != n) throw ParseError("q", "length " + std::to_string(q.size()) + " != n");
    Q = q.asDiagonal();
  } else {
    if (!j.contains("Q")) throw ParseError("Q", "missing");
    const json& rows = j.at("Q");
    if (!rows.is_array() || static_cast<long long>(rows.size()) != n) {
      throw ParseError("Q", "expected n rows");
    }
    Q.resize(n, n);
    for (long long r = 0; r < n; ++r) {
      const std::string field = "Q[" + std::to_string(r) + "]";
      const json& row = rows[r];
      if (!row.is_array() || static_cast<long long>(row.size()) != n) {
        throw ParseError(field, "expected a row of n numbers");
      }
      for (long long col = 0; col < n; ++col) {
        if (!row[col].is_number()) {
          throw ParseError(field + "[" + std::to_string(col) + "]", "expected a number");
        }
        Q(r, col) = row[col].get<double>();
      }
    }
  }
  try {
    return ProblemInstance::create(std::move(Q), c, std::move(name));
  } catch (const ParseError&) {
    throw;
  } catch (const InputError& e) {
    throw ParseError(diagonal ? "q" : "Q", e.what());
  }
}

ProblemInstance parse_problem_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("<json>", e.what());
  }
  return parse_problem(j);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ProblemInstance load_problem(const std::string& path) { return parse_problem_text(read_file(path)); }

json problem_to_json(const ProblemInstance& p, bool diagonal) {
  json j;
  if (!p.name().empty()) j["name"] = p.name();
  j["n"] = p.dim();
  if (diagonal) {
    const Matrix off = p.Q() - Matrix(p.Q().diagonal().asDiagonal());
    if (off.cwiseAbs().maxCoeff() != 0.0) {
      throw InputError("diagonal serialization requested for a non-diagonal Q");
    }
    j["diagonal"] = true;
    j["q"] = vector_to_json(p.Q().diagonal());
  } else {
    json rows = json::array();
    for (Eigen::Index r = 0; r < p.Q().rows(); ++r) rows.push_back(vector_to_json(p.Q().row(r).transpose()));
    j["Q"] = rows;
  }
  j["c"] = vector_to_json(p.c());
  return j;
}

std::string serialize_problem(const ProblemInstance& p, bool diagonal) {
  return problem_to_json(p, diagonal).dump(2) + "\n";
}

json point_to_json(const CriticalPoint& pt) {
  return {
      {"sigma", pt.sigma},
      {"x", vector_to_json(pt.x)},
      {"primal_value", pt.primal_value},
      {"dual_value", pt.dual_value},
      {"dual_gradient", pt.dual_gradient},
      {"certificate", std::string(to_string(pt.certificate))},
      {"inertia", {pt.inertia.positive, pt.inertia.zero, pt.inertia.negative}},
      {"nappe_ok", pt.nappe_ok},
      {"dual_stationary", pt.dual_stationary},
  };
}

CriticalPoint point_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("solution", "expected an object");
  CriticalPoint pt;
  pt.sigma = number_field(j, "sigma");
  pt.x = vector_field(j, "x", "solution.");
  if (j.contains("primal_value")) pt.primal_value = j.at("primal_value").get<double>();
  if (j.contains("dual_value")) pt.dual_value = j.at("dual_value").get<double>();
  if (j.contains("dual_gradient")) pt.dual_gradient = j.at("dual_gradient").get<double>();
  if (j.contains("certificate")) {
    const auto cert = certificate_from_string(j.at("certificate").get<std::string>());
    if (!cert) throw ParseError("solution.certificate", "unknown certificate label");
    pt.certificate = *cert;
  }
  if (j.contains("inertia")) {
    const json& in = j.at("inertia");
    if (!in.is_array() || in.size() != 3) throw ParseError("solution.inertia", "expected [pos, zero, neg]");
    pt.inertia = {in[0].get<int>(), in[1].get<int>(), in[2].get<int>()};
  }
  if (j.contains("nappe_ok")) pt.nappe_ok = j.at("nappe_ok").get<bool>();
  if (j.contains("dual_stationary")) pt.dual_stationary = j.at("dual_stationary").get<bool>();
  return pt;
}

json residuals_to_json(const KKTResiduals& r) {
  return {
      {"stationarity", r.stationarity},
      {"primal_feas", r.primal_feas},
      {"nappe_violation", r.nappe_violation},
      {"dual_feas", r.dual_feas},
      {"complementarity", r.complementarity},
  };
}

json oracle_to_json(const OracleResult& r) {
  json j = {
      {"best_x", vector_to_json(r.best_x)},
      {"best_value", r.best_value},
      {"grid_resolution", r.grid_resolution},
      {"refined", r.refined},
      {"min_sampled_curvature", r.min_sampled_curvature},
  };
  j["unbounded_direction"] = r.unbounded_direction ? vector_to_json(*r.unbounded_direction) : json(nullptr);
  return j;
}

json report_to_json(const SolveReport& r) {
  json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["problem"] = {{"name", r.problem_name}, {"n", r.n}};
  j["tolerances"] = {
      {"kkt", r.tolerances.kkt},
      {"eig", r.tolerances.eig},
      {"root", r.tolerances.root},
      {"max_iter", r.tolerances.max_iter},
      {"samples_per_interval", r.tolerances.samples_per_interval},
  };
  j["solution"] = r.solution ? point_to_json(*r.solution) : json(nullptr);
  j["kkt_residuals"] = r.kkt_residuals ? residuals_to_json(*r.kkt_residuals) : json(nullptr);
  j["duality_gap"] = r.duality_gap ? json(*r.duality_gap) : json(nullptr);
  json points = json::array();
  for (const auto& pt : r.critical_points) points.push_back(point_to_json(pt));
  j["critical_points"] = points;
  if (r.oracle) j["oracle"] = oracle_to_json(*r.oracle);
  j["warnings"] = r.warnings;
  j["exit_code"] = r.exit_code;
  return j;
}

SolveReport report_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("<root>", "expected a JSON object");
  SolveReport r;
  if (j.contains("problem") && j.at("problem").is_object()) {
    const json& pj = j.at("problem");
    if (pj.contains("name") && pj.at("name").is_string()) r.problem_name = pj.at("name").get<std::string>();
    if (pj.contains("n") && pj.at("n").is_number_integer()) r.n = pj.at("n").get<int>();
  }
  if (!j.contains("tolerances") || !j.at("tolerances").is_object()) {
    throw ParseError("tolerances", "missing");
  }
  const json& tj = j.at("tolerances");
  r.tolerances.kkt = number_field(tj, "kkt");
  if (tj.contains("eig")) r.tolerances.eig = tj.at("eig").get<double>();
  if (tj.contains("root")) r.tolerances.root = tj.at("root").get<double>();
  if (tj.contains("max_iter")) r.tolerances.max_iter = tj.at("max_iter").get<int>();
  if (tj.contains("samples_per_interval")) {
    r.tolerances.samples_per_interval = tj.at("samples_per_interval").get<int>();
  }
  if (!j.contains("solution")) throw ParseError("solution", "missing");
  if (!j.at("solution").is_null()) r.solution = point_from_json(j.at("solution"));
  if (j.contains("critical_points") && j.at("critical_points").is_array()) {
    for (const auto& pj : j.at("critical_points")) r.critical_points.push_back(point_from_json(pj));
  }
  if (j.contains("warnings") && j.at("warnings").is_array()) {
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
  }
  if (j.contains("exit_code") && j.at("exit_code").is_number_integer()) {
    r.exit_code = j.at("exit_code").get<int>();
  }
  return r;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename onto " + path + ": " + ec.message());
  }
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

}  // namespace conedual::io
