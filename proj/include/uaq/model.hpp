#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uaq/index_set.hpp"

namespace uaq {

using RoleId = std::size_t;
using PermId = std::size_t;

/// <X, t>: a user may activate at most t - 1 roles of X.
struct SodConstraint {
  RoleSet roles;
  int threshold = 1;

  friend bool operator==(const SodConstraint&, const SodConstraint&) = default;
};

/// A non-hierarchical RBAC configuration together with a query.
///
/// Roles and permissions are dense indices; labels are the external names and
/// are unique within their kind. `role_perms[r]` is P(r), i.e. the RP relation
/// stored by role. Treat values as immutable once built; every transformation
/// in the library returns a new Instance.
struct Instance {
  std::vector<std::string> role_labels;
  std::vector<std::string> perm_labels;
  std::vector<PermSet> role_perms;
  PermSet plb;
  PermSet pub;
  std::vector<SodConstraint> constraints;
  int kr = 0;
  int kp = 0;

  std::size_t num_roles() const { return role_labels.size(); }
  std::size_t num_perms() const { return perm_labels.size(); }
  RoleSet no_roles() const { return RoleSet(num_roles()); }
  PermSet no_perms() const { return PermSet(num_perms()); }

  std::optional<RoleId> find_role(std::string_view label) const;
  std::optional<PermId> find_perm(std::string_view label) const;
  /// Throws InputError naming the label when absent.
  RoleId role_id(std::string_view label) const;
  PermId perm_id(std::string_view label) const;

  RoleSet roles_named(const std::vector<std::string>& labels) const;
  std::vector<std::string> labels_of(const RoleSet& roles) const;
  std::vector<std::string> labels_of(const PermSet& perms) const;

  friend bool operator==(const Instance&, const Instance&) = default;
};

/// Checks every structural invariant of Instance; throws InputError.
void validate(const Instance& inst);

/// Label-driven construction used by parsers, generators and tests.
class InstanceBuilder {
 public:
  RoleId role(const std::string& label);
  PermId perm(const std::string& label);
  InstanceBuilder& assign(const std::string& role_label, const std::string& perm_label);
  InstanceBuilder& require(const std::string& perm_label);
  /// Restricts P_ub; if never called P_ub is every permission.
  InstanceBuilder& allow(const std::string& perm_label);
  InstanceBuilder& constraint(const std::vector<std::string>& role_labels, int threshold);
  InstanceBuilder& budgets(int kr, int kp);

  Instance build() const;

 private:
  std::vector<std::string> roles_;
  std::vector<std::string> perms_;
  std::vector<std::pair<RoleId, PermId>> rp_;
  std::vector<PermId> plb_;
  std::optional<std::vector<PermId>> pub_;
  std::vector<std::pair<std::vector<RoleId>, int>> constraints_;
  int kr_ = 0;
  int kp_ = 0;
};

struct Solution {
  RoleSet roles;
};

/// P(R'), the union of P(r) over r in `roles`.
PermSet permissions_of(const Instance& inst, const RoleSet& roles);

/// For each permission, the roles assigned to it.
std::vector<RoleSet> permission_holders(const Instance& inst);

struct Violation {
  enum class Kind { too_many_roles, missing_permission, outside_upper_bound, too_many_extra, sod };
  Kind kind;
  std::string detail;
};

struct Verdict {
  bool ok = true;
  std::vector<Violation> violations;
};

std::string to_string(Violation::Kind kind);

/// Checks the four solution clauses literally and lists each failure.
Verdict verify_solution(const Instance& inst, const Solution& sol);

/// Boolean fast path of verify_solution.
bool is_solution(const Instance& inst, const RoleSet& roles);

struct ClassParams {
  int alpha = 2;
  int beta = 2;
  int c = 1;
};

void validate(const ClassParams& params);

struct ClassReport {
  bool kab_free = true;
  bool widths_ok = true;
  bool disjoint_ok = true;
  /// Human-readable witnesses, one per failed condition.
  std::vector<std::string> witnesses;
  /// Offending alpha-set of roles when !kab_free.
  std::optional<RoleSet> kab_witness;

  bool ok() const { return kab_free && widths_ok && disjoint_ok; }
};

/// (alpha, beta, c) class membership: K_{alpha,beta}-freeness of the
/// role-permission graph, constraint widths, pairwise-disjoint constraints.
ClassReport check_class(const Instance& inst, const ClassParams& params);

struct InstanceStats {
  std::size_t k_hat = 0;
  std::size_t r_hat = 0;
  std::size_t n_roles = 0;
  std::size_t n_perms = 0;
  std::size_t n_constraints = 0;

  friend bool operator==(const InstanceStats&, const InstanceStats&) = default;
};

InstanceStats stats(const Instance& inst);

/// Sets kr = |R| (no bound on the number of roles).
Instance with_unbounded_roles(Instance inst);

}  // namespace uaq
