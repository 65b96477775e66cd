#pragma once

#include <cstdint>
#include <optional>

#include "uaq/deadline.hpp"
#include "uaq/model.hpp"

namespace uaq {

struct BruteForceOptions {
  /// Search nodes visited before giving up with ScaleError.
  std::uint64_t max_nodes = 50'000'000;
  const Deadline* deadline = nullptr;
};

/// Exhaustive search over role subsets of size <= kr, smallest size first and
/// lexicographic within a size. Branches that already break a monotone clause
/// (P_ub, extra budget, SoD) are cut.
std::optional<Solution> brute_force(const Instance& inst, const BruteForceOptions& opts = {});

struct TypeOneResult {
  std::optional<Solution> solution;
  /// Candidate subsets examined.
  std::uint64_t enumerated = 0;
};

/// Subset enumeration over the roles holding a permission outside P_lb; the
/// remaining roles are always taken. Requires D empty and kr >= |R|; throws
/// InputError naming the violated condition otherwise.
TypeOneResult type1_solver(const Instance& inst, const Deadline* deadline = nullptr);

}  // namespace uaq
