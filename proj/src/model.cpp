#include "uaq/model.hpp"

#include <algorithm>
#include <unordered_set>

#include "uaq/errors.hpp"

namespace uaq {

namespace {

template <class Labels>
std::optional<std::size_t> find_label(const Labels& labels, std::string_view label) {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels.begin());
}

std::string join(const std::vector<std::string>& items) {
  std::string out = "{";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out + "}";
}

}  // namespace

std::optional<RoleId> Instance::find_role(std::string_view label) const {
  return find_label(role_labels, label);
}

std::optional<PermId> Instance::find_perm(std::string_view label) const {
  return find_label(perm_labels, label);
}

RoleId Instance::role_id(std::string_view label) const {
  if (auto id = find_role(label)) return *id;
  throw InputError("unknown role \"" + std::string(label) + "\"");
}

PermId Instance::perm_id(std::string_view label) const {
  if (auto id = find_perm(label)) return *id;
  throw InputError("unknown permission \"" + std::string(label) + "\"");
}

RoleSet Instance::roles_named(const std::vector<std::string>& labels) const {
  RoleSet out = no_roles();
  for (const auto& l : labels) out.insert(role_id(l));
  return out;
}

std::vector<std::string> Instance::labels_of(const RoleSet& roles) const {
  std::vector<std::string> out;
  roles.for_each([&](std::size_t r) { out.push_back(role_labels.at(r)); });
  return out;
}

std::vector<std::string> Instance::labels_of(const PermSet& perms) const {
  std::vector<std::string> out;
  perms.for_each([&](std::size_t p) { out.push_back(perm_labels.at(p)); });
  return out;
}

void validate(const Instance& inst) {
  const auto nr = inst.num_roles();
  const auto np = inst.num_perms();
  auto check_unique = [](const std::vector<std::string>& labels, const char* kind) {
    std::unordered_set<std::string> seen;
    for (const auto& l : labels)
      if (!seen.insert(l).second) throw InputError(std::string("duplicate ") + kind + " \"" + l + "\"");
  };
  check_unique(inst.role_labels, "role");
  check_unique(inst.perm_labels, "permission");
  if (inst.role_perms.size() != nr) throw InputError("role/permission table size mismatch");
  for (const auto& ps : inst.role_perms)
    if (ps.universe() != np) throw InputError("role permission set over wrong universe");
  if (inst.plb.universe() != np || inst.pub.universe() != np)
    throw InputError("P_lb / P_ub over wrong universe");
  if (!inst.plb.is_subset_of(inst.pub)) {
    auto missing = inst.plb - inst.pub;
    throw InputError("P_lb not contained in P_ub: " + inst.perm_labels[missing.first()]);
  }
  for (const auto& c : inst.constraints) {
    if (c.roles.universe() != nr) throw InputError("constraint over wrong role universe");
    if (c.threshold < 1) throw InputError("constraint threshold must be >= 1");
  }
  if (inst.kr < 0 || inst.kp < 0) throw InputError("budgets must be non-negative");
}

RoleId InstanceBuilder::role(const std::string& label) {
  if (auto id = find_label(roles_, label)) return *id;
  roles_.push_back(label);
  return roles_.size() - 1;
}

PermId InstanceBuilder::perm(const std::string& label) {
  if (auto id = find_label(perms_, label)) return *id;
  perms_.push_back(label);
  return perms_.size() - 1;
}

InstanceBuilder& InstanceBuilder::assign(const std::string& role_label, const std::string& perm_label) {
  auto r = role(role_label);
  auto p = perm(perm_label);
  rp_.emplace_back(r, p);
  return *this;
}

InstanceBuilder& InstanceBuilder::require(const std::string& perm_label) {
  plb_.push_back(perm(perm_label));
  return *this;
}

InstanceBuilder& InstanceBuilder::allow(const std::string& perm_label) {
  if (!pub_) pub_.emplace();
  pub_->push_back(perm(perm_label));
  return *this;
}

InstanceBuilder& InstanceBuilder::constraint(const std::vector<std::string>& role_labels, int threshold) {
  std::vector<RoleId> ids;
  for (const auto& l : role_labels) ids.push_back(role(l));
  constraints_.emplace_back(std::move(ids), threshold);
  return *this;
}

InstanceBuilder& InstanceBuilder::budgets(int kr, int kp) {
  kr_ = kr;
  kp_ = kp;
  return *this;
}

Instance InstanceBuilder::build() const {
  Instance inst;
  inst.role_labels = roles_;
  inst.perm_labels = perms_;
  const auto nr = roles_.size();
  const auto np = perms_.size();
  inst.role_perms.assign(nr, PermSet(np));
  for (auto [r, p] : rp_) inst.role_perms[r].insert(p);
  inst.plb = PermSet(np);
  for (auto p : plb_) inst.plb.insert(p);
  if (pub_) {
    inst.pub = PermSet(np);
    for (auto p : *pub_) inst.pub.insert(p);
  } else {
    inst.pub = PermSet::full(np);
  }
  for (const auto& [ids, t] : constraints_) {
    SodConstraint c{RoleSet(nr), t};
    for (auto r : ids) c.roles.insert(r);
    inst.constraints.push_back(std::move(c));
  }
  inst.kr = kr_;
  inst.kp = kp_;
  validate(inst);
  return inst;
}

PermSet permissions_of(const Instance& inst, const RoleSet& roles) {
  if (roles.universe() != inst.num_roles()) throw InputError("role set over wrong universe");
  PermSet out = inst.no_perms();
  roles.for_each([&](std::size_t r) { out |= inst.role_perms[r]; });
  return out;
}

std::vector<RoleSet> permission_holders(const Instance& inst) {
  std::vector<RoleSet> out(inst.num_perms(), inst.no_roles());
  for (RoleId r = 0; r < inst.num_roles(); ++r)
    inst.role_perms[r].for_each([&](std::size_t p) { out[p].insert(r); });
  return out;
}

std::string to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::too_many_roles: return "too_many_roles";
    case Violation::Kind::missing_permission: return "missing_permission";
    case Violation::Kind::outside_upper_bound: return "outside_upper_bound";
    case Violation::Kind::too_many_extra: return "too_many_extra";
    case Violation::Kind::sod: return "sod";
  }
  return "unknown";
}

Verdict verify_solution(const Instance& inst, const Solution& sol) {
  Verdict v;
  auto fail = [&](Violation::Kind kind, std::string detail) {
    v.ok = false;
    v.violations.push_back({kind, std::move(detail)});
  };
  const auto covered = permissions_of(inst, sol.roles);
  const auto n = sol.roles.count();
  if (n > static_cast<std::size_t>(inst.kr))
    fail(Violation::Kind::too_many_roles, std::to_string(n) + " roles > kr=" + std::to_string(inst.kr));
  (inst.plb - covered).for_each([&](std::size_t p) {
    fail(Violation::Kind::missing_permission, inst.perm_labels[p]);
  });
  (covered - inst.pub).for_each([&](std::size_t p) {
    fail(Violation::Kind::outside_upper_bound, inst.perm_labels[p]);
  });
  const auto extra = (covered - inst.plb).count();
  if (extra > static_cast<std::size_t>(inst.kp))
    fail(Violation::Kind::too_many_extra,
         std::to_string(extra) + " extra permissions > kp=" + std::to_string(inst.kp));
  for (const auto& c : inst.constraints) {
    const auto hit = (c.roles & sol.roles).count();
    if (hit >= static_cast<std::size_t>(c.threshold)) {
      fail(Violation::Kind::sod, "<" + join(inst.labels_of(c.roles)) + ", " + std::to_string(c.threshold) +
                                     "> activated " + std::to_string(hit));
    }
  }
  return v;
}

bool is_solution(const Instance& inst, const RoleSet& roles) {
  if (roles.count() > static_cast<std::size_t>(inst.kr)) return false;
  const auto covered = permissions_of(inst, roles);
  if (!inst.plb.is_subset_of(covered) || !covered.is_subset_of(inst.pub)) return false;
  if ((covered - inst.plb).count() > static_cast<std::size_t>(inst.kp)) return false;
  for (const auto& c : inst.constraints)
    if ((c.roles & roles).count() >= static_cast<std::size_t>(c.threshold)) return false;
  return true;
}

void validate(const ClassParams& params) {
  if (params.alpha < 2 || params.beta < 2) throw ConfigError("alpha and beta must be >= 2");
  if (params.c < 1) throw ConfigError("max constraint width must be >= 1");
}

namespace {

// Depth-first search for `need` more roles (indices > `from`) whose running
// intersection keeps at least `beta` permissions.
bool find_dense_set(const Instance& inst, const std::vector<RoleId>& candidates, std::size_t from,
                    std::size_t need, const PermSet& common, std::size_t beta, std::vector<RoleId>& chosen) {
  if (need == 0) return true;
  for (std::size_t i = from; i + need <= candidates.size(); ++i) {
    const auto r = candidates[i];
    auto next = common & inst.role_perms[r];
    if (next.count() < beta) continue;
    chosen.push_back(r);
    if (find_dense_set(inst, candidates, i + 1, need - 1, next, beta, chosen)) return true;
    chosen.pop_back();
  }
  return false;
}

}  // namespace

ClassReport check_class(const Instance& inst, const ClassParams& params) {
  validate(params);
  ClassReport rep;
  const auto alpha = static_cast<std::size_t>(params.alpha);
  const auto beta = static_cast<std::size_t>(params.beta);

  std::vector<RoleId> candidates;
  for (RoleId r = 0; r < inst.num_roles(); ++r)
    if (inst.role_perms[r].count() >= beta) candidates.push_back(r);
  std::vector<RoleId> chosen;
  if (candidates.size() >= alpha &&
      find_dense_set(inst, candidates, 0, alpha, PermSet::full(inst.num_perms()), beta, chosen)) {
    rep.kab_free = false;
    RoleSet w = inst.no_roles();
    for (auto r : chosen) w.insert(r);
    rep.kab_witness = w;
    PermSet common = PermSet::full(inst.num_perms());
    w.for_each([&](std::size_t r) { common &= inst.role_perms[r]; });
    rep.witnesses.push_back("K_{" + std::to_string(alpha) + "," + std::to_string(beta) + "} roles " +
                            join(inst.labels_of(w)) + " share " + std::to_string(common.count()) +
                            " permissions");
  }

  for (const auto& c : inst.constraints) {
    if (c.roles.count() > static_cast<std::size_t>(params.c)) {
      rep.widths_ok = false;
      rep.witnesses.push_back("constraint " + join(inst.labels_of(c.roles)) + " wider than c=" +
                              std::to_string(params.c));
      break;
    }
  }
  for (std::size_t i = 0; i < inst.constraints.size() && rep.disjoint_ok; ++i) {
    for (std::size_t j = i + 1; j < inst.constraints.size(); ++j) {
      const auto shared = inst.constraints[i].roles & inst.constraints[j].roles;
      if (shared.any()) {
        rep.disjoint_ok = false;
        rep.witnesses.push_back("constraints " + join(inst.labels_of(inst.constraints[i].roles)) + " and " +
                                join(inst.labels_of(inst.constraints[j].roles)) + " share " +
                                join(inst.labels_of(shared)));
        break;
      }
    }
  }
  return rep;
}

InstanceStats stats(const Instance& inst) {
  InstanceStats s;
  s.n_roles = inst.num_roles();
  s.n_perms = inst.num_perms();
  s.n_constraints = inst.constraints.size();
  s.k_hat = inst.num_perms() - inst.plb.count();
  for (const auto& ps : inst.role_perms)
    if (!ps.is_subset_of(inst.plb)) ++s.r_hat;
  return s;
}

Instance with_unbounded_roles(Instance inst) {
  inst.kr = static_cast<int>(inst.num_roles());
  return inst;
}

}  // namespace uaq
