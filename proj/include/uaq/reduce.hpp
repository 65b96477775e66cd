#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uaq/model.hpp"

namespace uaq {

/// One applied rule, kept for the branch-tree dump.
struct RuleRecord {
  std::string rule;
  std::vector<std::string> roles;
  std::string note;
};

/// A (partially) reduced instance plus the roles already forced into the
/// solution.
///
/// `inst` is re-interned after every change, so its role ids are local;
/// `origin[r]` maps a local role to the root instance the preprocessing
/// started from, and `r1` is a set over the root's roles.
struct BranchLeaf {
  Instance inst;
  std::vector<RoleId> origin;
  RoleSet r1;
  std::vector<RuleRecord> trace;
  bool infeasible = false;

  /// Maps a set of local roles to root roles and adds r1.
  RoleSet lift(const RoleSet& local) const;
};

struct BranchTree {
  Instance root;
  std::vector<BranchLeaf> leaves;
};

/// The identity leaf over `inst` (empty r1, every role its own origin).
BranchLeaf root_leaf(const Instance& inst);

/// Reduction 0: drop roles that miss P_lb or leave P_ub, excise them from
/// constraints and RP, drop constraints with |X| < t; to fixpoint.
Instance reduction0(const Instance& inst);

/// UPDATE: force local role `r` into the solution. Marks the leaf infeasible
/// (instead of producing negative budgets or a t = 0 constraint) when r
/// cannot be afforded.
BranchLeaf update_role(BranchLeaf leaf, RoleId r);

/// Rule 1 parts (i), (iii)-(vi) to fixpoint.
BranchLeaf rule1(BranchLeaf leaf);
/// Rule 2 (unique holder of a P_lb permission) interleaved with rule 1 to fixpoint.
BranchLeaf rule2(BranchLeaf leaf);

/// b(q) = beta * kr^q + sum_{a=1}^{q-1} kr^a. Throws OverflowError.
std::int64_t threshold_b(int q, std::int64_t kr, int beta);
/// h = beta * kr^(alpha-1) + kr^(alpha-2) + ... + kr + 1. Throws OverflowError.
std::int64_t threshold_h(std::int64_t kr, int alpha, int beta);
/// beta * kr^alpha + sum_{a=1}^{alpha-1} kr^a; larger P_lb at an irreducible
/// leaf means no solution.
std::int64_t kernel_bound(std::int64_t kr, int alpha, int beta);

/// Branching rule 1.q for the first q in 1..alpha-2 that applies. Returns the
/// input leaf alone when no q applies.
std::vector<BranchLeaf> branching_rule(const BranchLeaf& leaf, const ClassParams& params);

/// Rule 3 for the first heavy role (|P(s) & P_lb| >= h), followed by a rule-1
/// pass. Precondition: branching rule inapplicable.
BranchLeaf rule3(BranchLeaf leaf, const ClassParams& params);

/// Rule 4: delete roles with more than kp extra permissions (thresholds
/// unchanged), followed by a rule-1 pass.
BranchLeaf rule4(BranchLeaf leaf);

/// Runs rules 1, 2, branching, 3, 4 with restart-on-change, then applies the
/// kernel-size gate at each irreducible leaf. `inst` should already be the
/// output of reduction0.
BranchTree preprocess(const Instance& inst, const ClassParams& params);

}  // namespace uaq
