#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "uaq/model.hpp"

namespace uaq {

struct BipartiteGraph {
  std::vector<std::string> a;
  std::vector<std::string> b;
  /// (index into a, index into b); no duplicates.
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

/// Throws InputError on out-of-range or repeated edges and duplicate labels.
void validate(const BipartiteGraph& g);

/// A graph whose sides are split into k colour classes each.
struct BipartiteInstance {
  BipartiteGraph graph;
  /// Class in [0, k) of each vertex of graph.a / graph.b.
  std::vector<std::size_t> a_block;
  std::vector<std::size_t> b_block;
  int k = 0;
};

/// Throws InputError unless every class on both sides is nonempty.
void validate(const BipartiteInstance& g);

/// R = A, P = B plus one private permission per vertex of A, P_lb = B,
/// kp = k, kr = |R|, no constraints.
Instance gen_rbds_type1(const BipartiteGraph& g, int k);

/// R = A, P = P_lb = B, kr = k, kp = 0, no constraints.
Instance gen_rbds_type2(const BipartiteGraph& g, int k);

/// One role per edge holding its two endpoints and the class-pair
/// permission p_i_j; P_lb is every class pair, kr = k^2, kp = 2k.
Instance gen_mcb_nosod(const BipartiteInstance& g);

/// A role per vertex (its own permission plus its class number), a hub role
/// s holding every vertex permission plus q, and a two-role constraint for
/// every non-adjacent cross pair. P_lb = P, kr = 2k + 1, kp = 0.
Instance gen_mcb_k22(const BipartiteInstance& g);

/// Each (a, b) pair is an edge with probability `edge_prob`.
BipartiteGraph random_bipartite(std::size_t na, std::size_t nb, double edge_prob, std::mt19937_64& rng);

/// k classes per side with 1..max_per_class vertices each. With `plant`, one
/// vertex per class is chosen and fully wired across.
BipartiteInstance random_blocked(int k, std::size_t max_per_class, double edge_prob, bool plant,
                                 std::mt19937_64& rng);

struct RandomSpec {
  int n_roles = 8;
  int n_perms = 10;
  int plb_size = 4;
  int max_role_degree = 3;
  int alpha = 2;
  int beta = 2;
  int c = 2;
  int n_constraints = 2;
  int kr = 3;
  int kp = 2;
  bool plant = false;
  std::uint64_t seed = 0;
};

struct GeneratedInstance {
  Instance instance;
  std::optional<Solution> planted;
};

/// Seeded instance inside the (alpha, beta, c) class with pairwise-disjoint
/// constraints. Throws ConfigError on an inconsistent spec.
GeneratedInstance gen_random(const RandomSpec& spec);

}  // namespace uaq
