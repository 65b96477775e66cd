#include "uaq/generators.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_set>

#include "uaq/errors.hpp"

namespace uaq {

void validate(const BipartiteGraph& g) {
  std::unordered_set<std::string> labels;
  for (const auto& v : g.a)
    if (!labels.insert(v).second) throw InputError("duplicate vertex \"" + v + "\"");
  for (const auto& v : g.b)
    if (!labels.insert(v).second) throw InputError("duplicate vertex \"" + v + "\"");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (auto e : g.edges) {
    if (e.first >= g.a.size() || e.second >= g.b.size()) throw InputError("edge endpoint out of range");
    if (!seen.insert(e).second) throw InputError("repeated edge " + g.a[e.first] + "-" + g.b[e.second]);
  }
}

void validate(const BipartiteInstance& g) {
  validate(g.graph);
  if (g.k < 1) throw InputError("k must be at least 1");
  if (g.a_block.size() != g.graph.a.size() || g.b_block.size() != g.graph.b.size())
    throw InputError("class assignment does not cover every vertex");
  const auto k = static_cast<std::size_t>(g.k);
  std::vector<int> a_count(k, 0), b_count(k, 0);
  for (auto c : g.a_block) {
    if (c >= k) throw InputError("class index out of range");
    ++a_count[c];
  }
  for (auto c : g.b_block) {
    if (c >= k) throw InputError("class index out of range");
    ++b_count[c];
  }
  for (std::size_t i = 0; i < k; ++i)
    if (!a_count[i] || !b_count[i]) throw InputError("class " + std::to_string(i + 1) + " is empty");
}

Instance gen_rbds_type1(const BipartiteGraph& g, int k) {
  validate(g);
  InstanceBuilder b;
  for (const auto& v : g.a) b.role(v);
  for (const auto& v : g.b) b.require(v);
  for (const auto& v : g.a) b.assign(v, "p_" + v);
  for (auto [u, v] : g.edges) b.assign(g.a[u], g.b[v]);
  b.budgets(static_cast<int>(g.a.size()), k);
  return b.build();
}

Instance gen_rbds_type2(const BipartiteGraph& g, int k) {
  validate(g);
  InstanceBuilder b;
  for (const auto& v : g.a) b.role(v);
  for (const auto& v : g.b) b.require(v);
  for (auto [u, v] : g.edges) b.assign(g.a[u], g.b[v]);
  b.budgets(k, 0);
  return b.build();
}

namespace {

std::string pair_perm(std::size_t i, std::size_t j) {
  return "p_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
}

}  // namespace

Instance gen_mcb_nosod(const BipartiteInstance& g) {
  validate(g);
  const auto k = static_cast<std::size_t>(g.k);
  InstanceBuilder b;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) b.require(pair_perm(i, j));
  for (const auto& v : g.graph.a) b.perm(v);
  for (const auto& v : g.graph.b) b.perm(v);
  for (auto [u, v] : g.graph.edges) {
    const auto role = "r_" + g.graph.a[u] + "_" + g.graph.b[v];
    b.assign(role, g.graph.a[u]);
    b.assign(role, g.graph.b[v]);
    b.assign(role, pair_perm(g.a_block[u], g.b_block[v]));
  }
  b.budgets(g.k * g.k, 2 * g.k);
  return b.build();
}

Instance gen_mcb_k22(const BipartiteInstance& g) {
  validate(g);
  const auto& gr = g.graph;
  InstanceBuilder b;
  auto vertex_role = [](const std::string& v) { return "r_" + v; };
  auto vertex_perm = [](const std::string& v) { return "p_" + v; };
  for (std::size_t u = 0; u < gr.a.size(); ++u) {
    b.assign(vertex_role(gr.a[u]), vertex_perm(gr.a[u]));
    b.assign(vertex_role(gr.a[u]), std::to_string(g.a_block[u] + 1));
  }
  for (std::size_t v = 0; v < gr.b.size(); ++v) {
    b.assign(vertex_role(gr.b[v]), vertex_perm(gr.b[v]));
    b.assign(vertex_role(gr.b[v]), std::to_string(static_cast<std::size_t>(g.k) + g.b_block[v] + 1));
  }
  for (const auto& v : gr.a) b.assign("s", vertex_perm(v));
  for (const auto& v : gr.b) b.assign("s", vertex_perm(v));
  b.assign("s", "q");

  std::set<std::pair<std::size_t, std::size_t>> adjacent(gr.edges.begin(), gr.edges.end());
  for (std::size_t u = 0; u < gr.a.size(); ++u)
    for (std::size_t v = 0; v < gr.b.size(); ++v)
      if (!adjacent.count({u, v})) b.constraint({vertex_role(gr.a[u]), vertex_role(gr.b[v])}, 2);

  // Every permission is required.
  auto draft = b.build();
  for (const auto& p : draft.perm_labels) b.require(p);
  b.budgets(2 * g.k + 1, 0);
  return b.build();
}

BipartiteGraph random_bipartite(std::size_t na, std::size_t nb, double edge_prob, std::mt19937_64& rng) {
  BipartiteGraph g;
  for (std::size_t i = 0; i < na; ++i) g.a.push_back("a" + std::to_string(i + 1));
  for (std::size_t j = 0; j < nb; ++j) g.b.push_back("b" + std::to_string(j + 1));
  std::bernoulli_distribution coin(edge_prob);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j)
      if (coin(rng)) g.edges.emplace_back(i, j);
  return g;
}

BipartiteInstance random_blocked(int k, std::size_t max_per_class, double edge_prob, bool plant,
                                 std::mt19937_64& rng) {
  if (k < 1 || max_per_class < 1) throw ConfigError("need k >= 1 and at least one vertex per class");
  BipartiteInstance out;
  out.k = k;
  std::uniform_int_distribution<std::size_t> size_dist(1, max_per_class);
  std::vector<std::size_t> a_first, b_first;
  for (int i = 0; i < k; ++i) {
    const auto n = size_dist(rng);
    a_first.push_back(out.a_block.size());
    for (std::size_t j = 0; j < n; ++j) out.a_block.push_back(static_cast<std::size_t>(i));
  }
  for (int i = 0; i < k; ++i) {
    const auto n = size_dist(rng);
    b_first.push_back(out.b_block.size());
    for (std::size_t j = 0; j < n; ++j) out.b_block.push_back(static_cast<std::size_t>(i));
  }
  for (std::size_t i = 0; i < out.a_block.size(); ++i) out.graph.a.push_back("a" + std::to_string(i + 1));
  for (std::size_t j = 0; j < out.b_block.size(); ++j) out.graph.b.push_back("b" + std::to_string(j + 1));

  std::vector<bool> a_hub(out.a_block.size(), false), b_hub(out.b_block.size(), false);
  if (plant) {
    for (int i = 0; i < k; ++i) {
      const auto ka = std::count(out.a_block.begin(), out.a_block.end(), static_cast<std::size_t>(i));
      const auto kb = std::count(out.b_block.begin(), out.b_block.end(), static_cast<std::size_t>(i));
      a_hub[a_first[i] + std::uniform_int_distribution<std::size_t>(0, ka - 1)(rng)] = true;
      b_hub[b_first[i] + std::uniform_int_distribution<std::size_t>(0, kb - 1)(rng)] = true;
    }
  }
  std::bernoulli_distribution coin(edge_prob);
  for (std::size_t u = 0; u < out.a_block.size(); ++u)
    for (std::size_t v = 0; v < out.b_block.size(); ++v)
      if ((a_hub[u] && b_hub[v]) || coin(rng)) out.graph.edges.emplace_back(u, v);
  return out;
}

namespace {

// Would role r, with its current permissions, sit in some alpha roles that
// share at least beta permissions?
bool in_dense_set(const std::vector<PermSet>& perms, std::size_t r, std::size_t alpha, std::size_t beta) {
  std::vector<std::size_t> cand;
  for (std::size_t o = 0; o < perms.size(); ++o)
    if (o != r && (perms[o] & perms[r]).count() >= beta) cand.push_back(o);
  struct Search {
    const std::vector<PermSet>& perms;
    const std::vector<std::size_t>& cand;
    std::size_t beta;
    bool run(std::size_t from, std::size_t need, const PermSet& common) const {
      if (need == 0) return true;
      for (std::size_t i = from; i + need <= cand.size(); ++i) {
        auto next = common & perms[cand[i]];
        if (next.count() >= beta && run(i + 1, need - 1, next)) return true;
      }
      return false;
    }
  };
  return cand.size() + 1 >= alpha && Search{perms, cand, beta}.run(0, alpha - 1, perms[r]);
}

void check_spec(const RandomSpec& s) {
  auto fail = [](const std::string& what) { throw ConfigError("random spec: " + what); };
  if (s.n_roles < 0 || s.n_perms < 0) fail("sizes must be non-negative");
  if (s.plb_size < 0 || s.plb_size > s.n_perms) fail("plb_size must lie in [0, n_perms]");
  if (s.max_role_degree < 1) fail("max_role_degree must be at least 1");
  if (s.alpha < 2 || s.beta < 2) fail("alpha and beta must be at least 2");
  if (s.c < 1) fail("c must be at least 1");
  if (s.n_constraints < 0 || s.n_constraints > s.n_roles) fail("n_constraints must lie in [0, n_roles]");
  if (s.kr < 0 || s.kp < 0) fail("budgets must be non-negative");
  if (s.plant && s.plb_size > 0 && (s.kr < 1 || s.n_roles < 1)) fail("cannot plant a solution with kr = 0 or no roles");
}

}  // namespace

GeneratedInstance gen_random(const RandomSpec& spec) {
  check_spec(spec);
  std::mt19937_64 rng(spec.seed);
  const auto nr = static_cast<std::size_t>(spec.n_roles);
  const auto np = static_cast<std::size_t>(spec.n_perms);
  const auto alpha = static_cast<std::size_t>(spec.alpha);
  const auto beta = static_cast<std::size_t>(spec.beta);
  auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };

  Instance inst;
  for (std::size_t r = 0; r < nr; ++r) inst.role_labels.push_back("r" + std::to_string(r));
  for (std::size_t p = 0; p < np; ++p) inst.perm_labels.push_back("p" + std::to_string(p));
  inst.role_perms.assign(nr, PermSet(np));

  std::vector<std::size_t> perm_order(np);
  std::iota(perm_order.begin(), perm_order.end(), 0);
  std::shuffle(perm_order.begin(), perm_order.end(), rng);
  inst.plb = PermSet(np);
  for (int i = 0; i < spec.plb_size; ++i) inst.plb.insert(perm_order[static_cast<std::size_t>(i)]);
  std::vector<std::size_t> others(perm_order.begin() + spec.plb_size, perm_order.end());

  auto try_add = [&](std::size_t r, std::size_t p) {
    if (inst.role_perms[r].contains(p)) return;
    inst.role_perms[r].insert(p);
    if (in_dense_set(inst.role_perms, r, alpha, beta)) inst.role_perms[r].erase(p);
  };

  std::vector<std::size_t> role_order(nr);
  std::iota(role_order.begin(), role_order.end(), 0);
  std::shuffle(role_order.begin(), role_order.end(), rng);

  RoleSet planted(nr);
  PermSet extras(np);
  if (spec.plant) {
    const auto plb_items = (inst.plb).items();
    std::size_t s = 0;
    if (!plb_items.empty())
      s = pick(1, std::min({static_cast<std::size_t>(spec.kr), nr, plb_items.size()}));
    for (std::size_t i = 0; i < s; ++i) planted.insert(role_order[i]);
    // Planted roles split P_lb between them, so they share no P_lb permission.
    auto shuffled = plb_items;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (std::size_t i = 0; i < shuffled.size(); ++i) {
      const auto owner = role_order[i < s ? i : pick(0, s - 1)];
      inst.role_perms[owner].insert(shuffled[i]);
    }
    const auto n_extra = pick(0, std::min(static_cast<std::size_t>(spec.kp), others.size()));
    for (std::size_t i = 0; i < n_extra; ++i) extras.insert(others[i]);
    for (std::size_t i = 0; i < s; ++i)
      extras.for_each([&](std::size_t p) {
        if (pick(0, 1)) try_add(role_order[i], p);
      });
  }

  for (std::size_t r = 0; r < nr; ++r) {
    if (planted.contains(r)) continue;
    const auto degree = pick(1, static_cast<std::size_t>(spec.max_role_degree));
    for (std::size_t d = 0; d < degree && np > 0; ++d) try_add(r, pick(0, np - 1));
  }

  inst.pub = PermSet::full(np);
  for (auto p : others)
    if (!extras.contains(p) && pick(0, 7) == 0) inst.pub.erase(p);

  std::shuffle(role_order.begin(), role_order.end(), rng);
  std::size_t next = 0;
  for (int j = 0; j < spec.n_constraints && next < nr; ++j) {
    const auto width = std::min(pick(1, static_cast<std::size_t>(spec.c)), nr - next);
    SodConstraint con{RoleSet(nr), 1};
    for (std::size_t i = 0; i < width; ++i) con.roles.insert(role_order[next++]);
    auto t = static_cast<int>(pick(1, width));
    const auto hit = static_cast<int>((con.roles & planted).count());
    if (spec.plant && t <= hit) t = hit + 1;
    con.threshold = t;
    inst.constraints.push_back(std::move(con));
  }

  inst.kr = spec.kr;
  inst.kp = spec.kp;
  validate(inst);

  GeneratedInstance out{std::move(inst), std::nullopt};
  if (spec.plant) {
    if (!is_solution(out.instance, planted)) throw Error("internal: planted solution does not verify");
    out.planted = Solution{planted};
  }
  return out;
}

}  // namespace uaq
