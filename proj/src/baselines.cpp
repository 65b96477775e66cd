#include "uaq/baselines.hpp"

#include "uaq/errors.hpp"

namespace uaq {

namespace {

class SubsetSearch {
 public:
  SubsetSearch(const Instance& inst, const BruteForceOptions& opts)
      : inst_(inst), max_nodes_(opts.max_nodes), deadline_(opts.deadline), chosen_(inst.no_roles()), sod_hits_(inst.constraints.size(), 0) {
    for (RoleId r = 0; r < inst.num_roles(); ++r)
      if (inst.role_perms[r].is_subset_of(inst.pub)) usable_.push_back(r);
    constraints_of_.resize(inst.num_roles());
    for (std::size_t c = 0; c < inst.constraints.size(); ++c)
      inst.constraints[c].roles.for_each([&](std::size_t r) { constraints_of_[r].push_back(c); });
  }

  std::optional<Solution> run() {
    const auto cap = std::min<std::size_t>(static_cast<std::size_t>(inst_.kr), usable_.size());
    for (std::size_t size = 0; size <= cap; ++size) {
      if (dfs(0, size, inst_.no_perms())) return Solution{chosen_};
    }
    return std::nullopt;
  }

 private:
  bool dfs(std::size_t from, std::size_t remaining, const PermSet& covered) {
    if (++nodes_ > max_nodes_) throw ScaleError("brute force exceeded " + std::to_string(max_nodes_) + " nodes");
    if (deadline_ && (nodes_ & 0xfff) == 0) deadline_->check();
    if (remaining == 0) return inst_.plb.is_subset_of(covered);
    for (std::size_t i = from; i + remaining <= usable_.size(); ++i) {
      const auto r = usable_[i];
      auto next = covered | inst_.role_perms[r];
      if ((next - inst_.plb).count() > static_cast<std::size_t>(inst_.kp)) continue;
      bool blocked = false;
      for (auto c : constraints_of_[r])
        if (sod_hits_[c] + 1 >= inst_.constraints[c].threshold) blocked = true;
      if (blocked) continue;
      for (auto c : constraints_of_[r]) ++sod_hits_[c];
      chosen_.insert(r);
      const bool ok = dfs(i + 1, remaining - 1, next);
      if (ok) return true;
      chosen_.erase(r);
      for (auto c : constraints_of_[r]) --sod_hits_[c];
    }
    return false;
  }

  const Instance& inst_;
  std::uint64_t max_nodes_;
  const Deadline* deadline_;
  std::uint64_t nodes_ = 0;
  std::vector<RoleId> usable_;
  std::vector<std::vector<std::size_t>> constraints_of_;
  RoleSet chosen_;
  std::vector<int> sod_hits_;
};

}  // namespace

std::optional<Solution> brute_force(const Instance& inst, const BruteForceOptions& opts) {
  SubsetSearch search(inst, opts);
  auto sol = search.run();
  if (sol && !is_solution(inst, sol->roles)) throw Error("internal: brute force produced an invalid solution");
  return sol;
}

TypeOneResult type1_solver(const Instance& inst, const Deadline* deadline) {
  if (!inst.constraints.empty()) throw InputError("type-1 solver requires an empty constraint set D");
  if (static_cast<std::size_t>(inst.kr) < inst.num_roles()) throw InputError("type-1 solver requires kr = |R|");
  RoleSet inside = inst.no_roles();
  std::vector<RoleId> rest;
  for (RoleId r = 0; r < inst.num_roles(); ++r) {
    if (inst.role_perms[r].is_subset_of(inst.plb))
      inside.insert(r);
    else
      rest.push_back(r);
  }
  if (rest.size() >= 63) throw ScaleError("type-1 solver limited to 62 roles outside P_lb");

  TypeOneResult out;
  const auto base = permissions_of(inst, inside);
  const auto limit = inst.plb.count() + static_cast<std::size_t>(inst.kp);
  const std::uint64_t total = 1ULL << rest.size();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    ++out.enumerated;
    if (deadline && (mask & 0xfff) == 0) deadline->check();
    PermSet covered = base;
    RoleSet pick = inside;
    for (std::size_t i = 0; i < rest.size(); ++i) {
      if (mask >> i & 1) {
        covered |= inst.role_perms[rest[i]];
        pick.insert(rest[i]);
      }
    }
    if (inst.plb.is_subset_of(covered) && covered.is_subset_of(inst.pub) && covered.count() <= limit) {
      out.solution = Solution{pick};
      break;
    }
  }
  return out;
}

}  // namespace uaq
