#pragma once

#include <cstddef>
#include <optional>

#include "uaq/deadline.hpp"
#include "uaq/reduce.hpp"
#include "uaq/repfam.hpp"

namespace uaq {

struct DpStats {
  std::size_t table_cells = 0;
  std::size_t y_slices = 0;
};

/// Representative-set dynamic program on one irreducible leaf. Returns a set
/// of local roles R2 such that lifting it with the leaf's forced roles solves
/// the root instance, or nothing when the leaf has no solution.
std::optional<RoleSet> solve_leaf(const BranchLeaf& leaf, const PartitionMatroid& csm, const RepConfig& cfg,
                                  DpStats* stats = nullptr, const Deadline* deadline = nullptr);

struct SolveOptions {
  ClassParams params;
  RepConfig rep;
  unsigned threads = 1;
  Deadline deadline;
};

struct SolveOutcome {
  std::optional<Solution> solution;
  std::size_t leaves = 0;
  std::size_t infeasible_leaves = 0;
  std::size_t table_cells = 0;
};

/// Class check, reduction 0, preprocessing, then the DP on every feasible
/// leaf. A returned solution is over `inst`'s roles and has been verified
/// against it. Throws ClassError when `inst` is outside the class.
SolveOutcome solve(const Instance& inst, const SolveOptions& opts);

}  // namespace uaq
