#include "uaq/dp_solver.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "uaq/errors.hpp"

namespace uaq {

namespace {

using CellMap = std::unordered_map<PermSet, Family, IndexSetHash<PermTag>>;

class YSlice {
 public:
  YSlice(const Instance& inst, const PartitionMatroid& csm, const RepConfig& cfg, const RoleSet& eligible,
         DpStats* stats, const Deadline* deadline)
      : inst_(inst), csm_(csm), cfg_(cfg), eligible_(eligible.items()), stats_(stats), deadline_(deadline),
        memo_(static_cast<std::size_t>(inst.kr) + 1) {}

  const Family& cell(const PermSet& w, int i) {
    auto& level = memo_[static_cast<std::size_t>(i)];
    if (auto it = level.find(w); it != level.end()) return it->second;
    if (deadline_) deadline_->check();

    Family x{static_cast<std::size_t>(i), {}};
    if (i == 0) {
      if (w.empty()) x.sets.push_back(inst_.no_roles());
      return level.emplace(w, std::move(x)).first->second;
    }
    std::unordered_set<RoleSet, IndexSetHash<RoleTag>> seen;
    for (auto r : eligible_) {
      const auto& prev = cell(w - inst_.role_perms[r], i - 1);
      for (const auto& a : prev.sets) {
        if (a.contains(r)) continue;
        auto s = a;
        s.insert(r);
        if (!is_independent(csm_, s) || !seen.insert(s).second) continue;
        x.sets.push_back(std::move(s));
      }
    }
    auto rep = compute_repfam(csm_, x, inst_.kr - i, cfg_);
    if (stats_) ++stats_->table_cells;
    return level.emplace(w, std::move(rep)).first->second;
  }

 private:
  const Instance& inst_;
  const PartitionMatroid& csm_;
  const RepConfig& cfg_;
  std::vector<RoleId> eligible_;
  DpStats* stats_;
  const Deadline* deadline_;
  std::vector<CellMap> memo_;
};

// Calls f(Y) for every Y subset of `pool` with |Y| <= limit, by size then lex.
template <class F>
bool for_each_small_subset(const Instance& inst, const std::vector<PermId>& pool, std::size_t limit, F&& f) {
  for (std::size_t k = 0; k <= std::min(limit, pool.size()); ++k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      PermSet y = inst.no_perms();
      for (auto i : idx) y.insert(pool[i]);
      if (f(y)) return true;
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == pool.size() - k + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return false;
}

}  // namespace

std::optional<RoleSet> solve_leaf(const BranchLeaf& leaf, const PartitionMatroid& csm, const RepConfig& cfg,
                                  DpStats* stats, const Deadline* deadline) {
  const auto& inst = leaf.inst;
  if (leaf.infeasible) return std::nullopt;
  if (csm.ground_size() != inst.num_roles()) throw InputError("matroid does not match leaf");
  if (inst.plb.empty()) return inst.no_roles();
  if (inst.kr <= 0) return std::nullopt;

  PermSet held = inst.no_perms();
  for (const auto& ps : inst.role_perms) held |= ps;
  const auto pool = ((held & inst.pub) - inst.plb).items();

  std::vector<RoleSet> explored;
  std::optional<RoleSet> found;
  for_each_small_subset(inst, pool, static_cast<std::size_t>(inst.kp), [&](const PermSet& y) {
    const auto allowed = inst.plb | y;
    RoleSet eligible = inst.no_roles();
    for (RoleId r = 0; r < inst.num_roles(); ++r)
      if (inst.role_perms[r].is_subset_of(allowed)) eligible.insert(r);
    // A slice whose eligible roles were all eligible in an earlier slice
    // cannot hold anything new.
    for (const auto& e : explored)
      if (eligible.is_subset_of(e)) return false;
    explored.push_back(eligible);
    if (stats) ++stats->y_slices;

    YSlice slice(inst, csm, cfg, eligible, stats, deadline);
    for (int i = 1; i <= inst.kr; ++i) {
      const auto& top = slice.cell(inst.plb, i);
      if (!top.sets.empty()) {
        found = top.sets.front();
        return true;
      }
    }
    return false;
  });
  return found;
}

namespace {

std::string join_lines(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += "; ";
    out += s;
  }
  return out;
}

}  // namespace

SolveOutcome solve(const Instance& inst, const SolveOptions& opts) {
  const auto report = check_class(inst, opts.params);
  if (!report.ok()) throw ClassError("instance outside the class: " + join_lines(report.witnesses));

  const auto reduced = reduction0(inst);
  const auto tree = preprocess(reduced, opts.params);

  SolveOutcome out;
  out.leaves = tree.leaves.size();
  const auto n = tree.leaves.size();
  std::vector<std::optional<RoleSet>> results(n);
  std::vector<std::size_t> cells(n, 0);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> best{n};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto worker = [&] {
    while (true) {
      const auto idx = next.fetch_add(1);
      if (idx >= n || idx > best.load()) return;
      const auto& leaf = tree.leaves[idx];
      if (leaf.infeasible) continue;
      try {
        DpStats st;
        auto csm = build_csm(leaf.inst);
        results[idx] = solve_leaf(leaf, csm, opts.rep, &st, &opts.deadline);
        cells[idx] = st.table_cells;
        if (results[idx]) {
          auto cur = best.load();
          while (idx < cur && !best.compare_exchange_weak(cur, idx)) {
          }
        }
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        best.store(0);
        return;
      }
    }
  };

  const auto nthreads = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t i = 0; i < n; ++i) {
    if (tree.leaves[i].infeasible) ++out.infeasible_leaves;
    out.table_cells += cells[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!results[i]) continue;
    const auto lifted = tree.leaves[i].lift(*results[i]);
    Solution sol{inst.roles_named(reduced.labels_of(lifted))};
    const auto verdict = verify_solution(inst, sol);
    if (!verdict.ok)
      throw Error("internal: solver witness fails verification (" + to_string(verdict.violations.front().kind) + ": " +
                  verdict.violations.front().detail + ")");
    out.solution = std::move(sol);
    break;
  }
  return out;
}

}  // namespace uaq
