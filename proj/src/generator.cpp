#include "conedual/generator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "conedual/io.hpp"
#include "conedual/symmetric_kernel.hpp"

namespace conedual {

namespace {

constexpr std::array<std::pair<InstanceKind, std::string_view>, 4> kKindNames{{
    {InstanceKind::convex, "convex"},
    {InstanceKind::indefinite, "indefinite"},
    {InstanceKind::diagonal, "diagonal"},
    {InstanceKind::hardcase, "hardcase"},
}};

// std::uniform_real_distribution is implementation-defined; build the
// uniform variate from the raw 64-bit engine output instead.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : engine_(seed) {}
  double operator()(double lo, double hi) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace

std::optional<InstanceKind> instance_kind_from_string(std::string_view s) {
  for (const auto& [kind, name] : kKindNames) {
    if (name == s) return kind;
  }
  return std::nullopt;
}

std::string_view to_string(InstanceKind k) {
  for (const auto& [kind, name] : kKindNames) {
    if (kind == k) return name;
  }
  return "unknown";
}

ProblemInstance generate_instance(InstanceKind kind, int n, std::uint64_t seed) {
  if (n < 2) throw InputError("generator needs n >= 2");
  Uniform draw(seed);
  Matrix Q = Matrix::Zero(n, n);
  Vector c(n);

  if (kind == InstanceKind::diagonal) {
    for (int i = 0; i < n; ++i) Q(i, i) = draw(-2.0, 2.0);
  } else {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        Q(i, j) = draw(-2.0, 2.0);
        Q(j, i) = Q(i, j);
      }
    }
  }
  for (int i = 0; i < n; ++i) c(i) = draw(-2.0, 2.0);

  if (kind == InstanceKind::convex) {
    const double lo = min_eigenvalue(Q);
    Q.diagonal().array() += std::max(0.0, -lo) + 0.5;
  } else if (kind == InstanceKind::hardcase) {
    for (int j = 1; j < n; ++j) {
      Q(0, j) = 0.0;
      Q(j, 0) = 0.0;
    }
    // G(sigma) = (Q_11 - sigma) (+) (R + sigma I) is PD on (-lambda_min(R), Q_11);
    // keep that interval nonempty.
    const double rest_min = min_eigenvalue(Q.bottomRightCorner(n - 1, n - 1));
    Q(0, 0) = std::max({std::abs(Q(0, 0)), -rest_min, 0.0}) + 0.5;
    c(0) = 0.0;
  }
  const std::string name = std::string(to_string(kind)) + "-n" + std::to_string(n) + "-s" +
                           std::to_string(seed);
  return ProblemInstance::create(std::move(Q), std::move(c), name);
}

std::string generate_problem_file(InstanceKind kind, int n, std::uint64_t seed) {
  return io::serialize_problem(generate_instance(kind, n, seed), kind == InstanceKind::diagonal);
}

}  // namespace conedual
