#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "conedual/core_model.hpp"

namespace conedual {

/// convex: Q shifted to be positive definite. indefinite: raw symmetric Q.
/// diagonal: Q = diag(q). hardcase: first axis decoupled in Q with Q_11 above
/// the PD threshold of the rest and c_1 = 0, so the dual supremum sits at the
/// singular sigma = Q_11.
enum class InstanceKind { convex, indefinite, diagonal, hardcase };

std::optional<InstanceKind> instance_kind_from_string(std::string_view s);
std::string_view to_string(InstanceKind k);

/// Entries uniform in [-2, 2] from a seeded mt19937_64; identical
/// (kind, n, seed) give identical instances on every platform.
ProblemInstance generate_instance(InstanceKind kind, int n, std::uint64_t seed);

/// The generated instance as problem-file text (diagonal kind uses the "q"
/// form).
std::string generate_problem_file(InstanceKind kind, int n, std::uint64_t seed);

}  // namespace conedual
