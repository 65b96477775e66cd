#include "uaq/reduce.hpp"

#include <algorithm>
#include <optional>

#include "uaq/errors.hpp"

namespace uaq {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) throw OverflowError("threshold arithmetic overflow");
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) throw OverflowError("threshold arithmetic overflow");
  return out;
}

std::int64_t checked_pow(std::int64_t base, int exp) {
  std::int64_t out = 1;
  for (int i = 0; i < exp; ++i) out = checked_mul(out, base);
  return out;
}

// sum_{a=1}^{top} kr^a
std::int64_t power_sum(std::int64_t kr, int top) {
  std::int64_t sum = 0;
  for (int a = 1; a <= top; ++a) sum = checked_add(sum, checked_pow(kr, a));
  return sum;
}

// Restricts `in` to the kept roles and permissions, re-interning ids.
// Constraints keep their thresholds; role sets are intersected with the kept
// roles. `kept_old` receives, for each new role, its old id.
Instance compact(const Instance& in, const RoleSet& keep_roles, const PermSet& keep_perms,
                 std::vector<RoleId>& kept_old) {
  std::vector<std::size_t> perm_new(in.num_perms(), PermSet::npos);
  Instance out;
  keep_perms.for_each([&](std::size_t p) {
    perm_new[p] = out.perm_labels.size();
    out.perm_labels.push_back(in.perm_labels[p]);
  });
  const auto np = out.perm_labels.size();
  auto map_perms = [&](const PermSet& s) {
    PermSet m(np);
    (s & keep_perms).for_each([&](std::size_t p) { m.insert(perm_new[p]); });
    return m;
  };

  std::vector<std::size_t> role_new(in.num_roles(), RoleSet::npos);
  kept_old.clear();
  keep_roles.for_each([&](std::size_t r) {
    role_new[r] = out.role_labels.size();
    out.role_labels.push_back(in.role_labels[r]);
    out.role_perms.push_back(map_perms(in.role_perms[r]));
    kept_old.push_back(r);
  });
  const auto nr = out.role_labels.size();
  out.plb = map_perms(in.plb);
  out.pub = map_perms(in.pub);
  for (const auto& c : in.constraints) {
    SodConstraint nc{RoleSet(nr), c.threshold};
    (c.roles & keep_roles).for_each([&](std::size_t r) { nc.roles.insert(role_new[r]); });
    out.constraints.push_back(std::move(nc));
  }
  out.kr = in.kr;
  out.kp = in.kp;
  return out;
}

void restrict_leaf(BranchLeaf& leaf, const RoleSet& keep_roles, const PermSet& keep_perms) {
  std::vector<RoleId> kept_old;
  leaf.inst = compact(leaf.inst, keep_roles, keep_perms, kept_old);
  std::vector<RoleId> origin;
  origin.reserve(kept_old.size());
  for (auto r : kept_old) origin.push_back(leaf.origin[r]);
  leaf.origin = std::move(origin);
}

void drop_roles(BranchLeaf& leaf, const RoleSet& doomed, const std::string& rule) {
  leaf.trace.push_back({rule, leaf.inst.labels_of(doomed), "deleted"});
  restrict_leaf(leaf, RoleSet::full(leaf.inst.num_roles()) - doomed, PermSet::full(leaf.inst.num_perms()));
}

// Removes constraints with |X| < t; returns whether any was removed.
bool drop_slack_constraints(BranchLeaf& leaf, const std::string& rule) {
  auto& cs = leaf.inst.constraints;
  std::vector<std::string> gone;
  auto it = std::remove_if(cs.begin(), cs.end(), [&](const SodConstraint& c) {
    if (c.roles.count() >= static_cast<std::size_t>(c.threshold)) return false;
    gone.push_back("<" + std::to_string(c.roles.count()) + " roles, t=" + std::to_string(c.threshold) + ">");
    return true;
  });
  if (it == cs.end()) return false;
  cs.erase(it, cs.end());
  std::string note = "constraints removed:";
  for (const auto& g : gone) note += " " + g;
  leaf.trace.push_back({rule, {}, note});
  return true;
}

void mark_infeasible(BranchLeaf& leaf, const std::string& rule, std::vector<std::string> roles,
                     const std::string& why) {
  leaf.infeasible = true;
  leaf.trace.push_back({rule, std::move(roles), "infeasible: " + why});
}

std::size_t extras(const Instance& inst, RoleId r) { return (inst.role_perms[r] - inst.plb).count(); }

BranchLeaf force_role(BranchLeaf leaf, RoleId r, const std::string& rule) {
  if (leaf.infeasible) return leaf;
  auto& inst = leaf.inst;
  if (r >= inst.num_roles()) throw InputError("update of unknown role index " + std::to_string(r));
  const auto& label = inst.role_labels[r];
  if (inst.kr == 0) {
    mark_infeasible(leaf, rule, {label}, "kr exhausted");
    return leaf;
  }
  const auto extra = extras(inst, r);
  if (extra > static_cast<std::size_t>(inst.kp)) {
    mark_infeasible(leaf, rule, {label}, "kp would become negative");
    return leaf;
  }
  for (const auto& c : inst.constraints) {
    if (c.roles.contains(r) && c.threshold == 1) {
      mark_infeasible(leaf, rule, {label}, "constraint threshold would reach 0");
      return leaf;
    }
  }

  leaf.r1.insert(leaf.origin[r]);
  inst.kr -= 1;
  inst.kp -= static_cast<int>(extra);
  for (auto& c : inst.constraints)
    if (c.roles.contains(r)) c.threshold -= 1;
  const auto covered = inst.role_perms[r];
  RoleSet keep_roles = RoleSet::full(inst.num_roles());
  keep_roles.erase(r);
  leaf.trace.push_back({rule, {label}, "forced into R1"});
  restrict_leaf(leaf, keep_roles, PermSet::full(inst.num_perms()) - covered);
  return leaf;
}

// First (in lexicographic order) set of `size` roles whose common P_lb
// permissions exceed `bound`.
std::optional<std::vector<RoleId>> find_heavy_set(const Instance& inst, std::size_t size, std::int64_t bound) {
  auto exceeds = [bound](std::size_t n) { return static_cast<std::int64_t>(n) > bound; };
  std::vector<RoleId> candidates;
  for (RoleId r = 0; r < inst.num_roles(); ++r)
    if (exceeds((inst.role_perms[r] & inst.plb).count())) candidates.push_back(r);
  if (candidates.size() < size) return std::nullopt;

  std::vector<RoleId> chosen;
  auto search = [&](auto&& self, std::size_t from, const PermSet& common) -> bool {
    if (chosen.size() == size) return true;
    for (std::size_t i = from; i + (size - chosen.size()) <= candidates.size(); ++i) {
      auto next = common & inst.role_perms[candidates[i]];
      if (!exceeds(next.count())) continue;
      chosen.push_back(candidates[i]);
      if (self(self, i + 1, next)) return true;
      chosen.pop_back();
    }
    return false;
  };
  if (search(search, 0, inst.plb)) return chosen;
  return std::nullopt;
}

std::optional<std::vector<BranchLeaf>> try_branch(const BranchLeaf& leaf, const ClassParams& params) {
  if (leaf.infeasible) return std::nullopt;
  const auto& inst = leaf.inst;
  for (int q = 1; q <= params.alpha - 2; ++q) {
    const auto b = threshold_b(q, inst.kr, params.beta);
    auto set = find_heavy_set(inst, static_cast<std::size_t>(params.alpha - q), b);
    if (!set) continue;

    const std::string rule = "branch1." + std::to_string(q);
    std::vector<std::string> labels;
    for (auto r : *set) labels.push_back(inst.role_labels[r]);
    std::vector<BranchLeaf> children;
    if (inst.kr == 0) {
      children.push_back(leaf);
      mark_infeasible(children.back(), rule, labels, "kr exhausted with uncovered P_lb");
      return children;
    }
    for (auto r : *set) {
      if (extras(inst, r) <= static_cast<std::size_t>(inst.kp)) children.push_back(force_role(leaf, r, rule));
    }
    if (children.empty()) {
      children.push_back(leaf);
      mark_infeasible(children.back(), rule, labels, "no role of L fits within kp");
    }
    return children;
  }
  return std::nullopt;
}

}  // namespace

RoleSet BranchLeaf::lift(const RoleSet& local) const {
  RoleSet out = r1;
  local.for_each([&](std::size_t r) { out.insert(origin.at(r)); });
  return out;
}

BranchLeaf root_leaf(const Instance& inst) {
  BranchLeaf leaf;
  leaf.inst = inst;
  leaf.origin.resize(inst.num_roles());
  for (RoleId r = 0; r < inst.num_roles(); ++r) leaf.origin[r] = r;
  leaf.r1 = inst.no_roles();
  return leaf;
}

Instance reduction0(const Instance& inst) {
  BranchLeaf leaf = root_leaf(inst);
  while (true) {
    const auto& cur = leaf.inst;
    RoleSet doomed = cur.no_roles();
    for (RoleId r = 0; r < cur.num_roles(); ++r) {
      const auto& ps = cur.role_perms[r];
      if (!ps.intersects(cur.plb) || !ps.is_subset_of(cur.pub)) doomed.insert(r);
    }
    bool changed = false;
    if (doomed.any()) {
      drop_roles(leaf, doomed, "reduction0");
      changed = true;
    }
    changed |= drop_slack_constraints(leaf, "reduction0");
    if (!changed) break;
  }
  return leaf.inst;
}

BranchLeaf update_role(BranchLeaf leaf, RoleId r) { return force_role(std::move(leaf), r, "update"); }

BranchLeaf rule1(BranchLeaf leaf) {
  if (leaf.infeasible) return leaf;
  while (true) {
    const auto& cur = leaf.inst;
    RoleSet doomed = cur.no_roles();
    for (RoleId r = 0; r < cur.num_roles(); ++r)
      if (!cur.role_perms[r].intersects(cur.plb)) doomed.insert(r);
    for (const auto& c : cur.constraints)
      if (c.threshold == 1) doomed |= c.roles;
    bool changed = false;
    if (doomed.any()) {
      drop_roles(leaf, doomed, "rule1");
      changed = true;
    }
    changed |= drop_slack_constraints(leaf, "rule1");
    if (!changed) return leaf;
  }
}

BranchLeaf rule2(BranchLeaf leaf) {
  while (true) {
    leaf = rule1(std::move(leaf));
    if (leaf.infeasible) return leaf;
    const auto& inst = leaf.inst;
    const auto holders = permission_holders(inst);
    std::optional<RoleId> forced;
    inst.plb.for_each([&](std::size_t p) {
      if (!forced && holders[p].count() == 1) forced = holders[p].first();
    });
    if (!forced) return leaf;
    if (extras(inst, *forced) >= static_cast<std::size_t>(inst.kp) + 1) {
      mark_infeasible(leaf, "rule2", {inst.role_labels[*forced]}, "unique holder exceeds kp");
      return leaf;
    }
    leaf = force_role(std::move(leaf), *forced, "rule2");
  }
}

std::int64_t threshold_b(int q, std::int64_t kr, int beta) {
  if (q < 1) throw ConfigError("branching index q must be >= 1");
  if (kr < 0) throw ConfigError("kr must be non-negative");
  return checked_add(checked_mul(beta, checked_pow(kr, q)), power_sum(kr, q - 1));
}

std::int64_t threshold_h(std::int64_t kr, int alpha, int beta) {
  if (alpha < 2) throw ConfigError("alpha must be >= 2");
  if (kr < 0) throw ConfigError("kr must be non-negative");
  return checked_add(checked_add(checked_mul(beta, checked_pow(kr, alpha - 1)), power_sum(kr, alpha - 2)), 1);
}

std::int64_t kernel_bound(std::int64_t kr, int alpha, int beta) {
  if (alpha < 2) throw ConfigError("alpha must be >= 2");
  if (kr < 0) throw ConfigError("kr must be non-negative");
  return checked_add(checked_mul(beta, checked_pow(kr, alpha)), power_sum(kr, alpha - 1));
}

std::vector<BranchLeaf> branching_rule(const BranchLeaf& leaf, const ClassParams& params) {
  validate(params);
  if (auto children = try_branch(leaf, params)) return std::move(*children);
  return {leaf};
}

BranchLeaf rule3(BranchLeaf leaf, const ClassParams& params) {
  validate(params);
  if (leaf.infeasible) return leaf;
  const auto& inst = leaf.inst;
  const auto h = threshold_h(inst.kr, params.alpha, params.beta);
  for (RoleId s = 0; s < inst.num_roles(); ++s) {
    if (static_cast<std::int64_t>((inst.role_perms[s] & inst.plb).count()) < h) continue;
    if (extras(inst, s) > static_cast<std::size_t>(inst.kp)) {
      mark_infeasible(leaf, "rule3", {inst.role_labels[s]}, "heavy role exceeds kp");
      return leaf;
    }
    return rule1(force_role(std::move(leaf), s, "rule3"));
  }
  return leaf;
}

BranchLeaf rule4(BranchLeaf leaf) {
  if (leaf.infeasible) return leaf;
  const auto& inst = leaf.inst;
  RoleSet doomed = inst.no_roles();
  for (RoleId r = 0; r < inst.num_roles(); ++r)
    if (extras(inst, r) > static_cast<std::size_t>(inst.kp)) doomed.insert(r);
  if (doomed.empty()) return leaf;
  drop_roles(leaf, doomed, "rule4");
  return rule1(std::move(leaf));
}

BranchTree preprocess(const Instance& inst, const ClassParams& params) {
  validate(params);
  BranchTree tree{inst, {}};
  std::vector<BranchLeaf> pending{root_leaf(inst)};
  while (!pending.empty()) {
    BranchLeaf leaf = std::move(pending.back());
    pending.pop_back();
    bool branched = false;
    while (true) {
      leaf = rule2(std::move(leaf));
      if (leaf.infeasible) break;
      if (auto children = try_branch(leaf, params)) {
        for (auto it = children->rbegin(); it != children->rend(); ++it) pending.push_back(std::move(*it));
        branched = true;
        break;
      }
      auto before = leaf.trace.size();
      leaf = rule3(std::move(leaf), params);
      if (leaf.infeasible) break;
      if (leaf.trace.size() != before) continue;
      leaf = rule4(std::move(leaf));
      if (leaf.infeasible) break;
      if (leaf.trace.size() != before) continue;

      const auto bound = kernel_bound(leaf.inst.kr, params.alpha, params.beta);
      if (static_cast<std::int64_t>(leaf.inst.plb.count()) > bound)
        mark_infeasible(leaf, "kernel", {}, "|P_lb| = " + std::to_string(leaf.inst.plb.count()) + " > " +
                                                std::to_string(bound));
      break;
    }
    if (!branched) tree.leaves.push_back(std::move(leaf));
  }
  return tree;
}

}  // namespace uaq
