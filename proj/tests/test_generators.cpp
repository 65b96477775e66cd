#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "uaq/baselines.hpp"
#include "uaq/errors.hpp"
#include "uaq/instance_io.hpp"

using namespace uaq;

namespace {

BipartiteGraph star() {
  BipartiteGraph g;
  g.a = {"a"};
  g.b = {"b1", "b2"};
  g.edges = {{0, 0}, {0, 1}};
  return g;
}

BipartiteInstance complete_blocked(int k, std::size_t per_class) {
  BipartiteInstance g;
  g.k = k;
  for (int c = 0; c < k; ++c)
    for (std::size_t i = 0; i < per_class; ++i) {
      g.graph.a.push_back("a" + std::to_string(g.graph.a.size() + 1));
      g.a_block.push_back(static_cast<std::size_t>(c));
      g.graph.b.push_back("b" + std::to_string(g.graph.b.size() + 1));
      g.b_block.push_back(static_cast<std::size_t>(c));
    }
  for (std::size_t u = 0; u < g.graph.a.size(); ++u)
    for (std::size_t v = 0; v < g.graph.b.size(); ++v) g.graph.edges.emplace_back(u, v);
  return g;
}

}  // namespace

TEST(RbdsTypeOne, StarIsYes) {
  const auto inst = gen_rbds_type1(star(), 1);
  EXPECT_EQ(inst.kr, 1);
  EXPECT_EQ(inst.kp, 1);
  EXPECT_TRUE(inst.constraints.empty());
  const auto sol = brute_force(inst);
  ASSERT_TRUE(sol);
  EXPECT_EQ((permissions_of(inst, sol->roles) - inst.plb).count(), 1u);
}

TEST(RbdsTypeOne, EdgelessIsNo) {
  auto g = star();
  g.edges.clear();
  EXPECT_FALSE(brute_force(gen_rbds_type1(g, 1)));
}

TEST(RbdsTypeTwo, StarAndEdgeless) {
  const auto inst = gen_rbds_type2(star(), 1);
  EXPECT_EQ(inst.kr, 1);
  EXPECT_EQ(inst.kp, 0);
  EXPECT_EQ(inst.plb, PermSet::full(inst.num_perms()));
  EXPECT_TRUE(brute_force(inst));
  auto g = star();
  g.edges.clear();
  EXPECT_FALSE(brute_force(gen_rbds_type2(g, 1)));
}

TEST(Rbds, BothReductionsMatchDominationChecker) {
  std::mt19937_64 rng(70);
  for (int i = 0; i < 150; ++i) {
    const auto g = random_bipartite(1 + rng() % 6, 1 + rng() % 6, 0.35, rng);
    const int k = 1 + static_cast<int>(rng() % 3);
    const bool want = oracle::red_blue_dominating_set_exists(g, k);
    EXPECT_EQ(brute_force(gen_rbds_type1(g, k)).has_value(), want);
    EXPECT_EQ(brute_force(gen_rbds_type2(g, k)).has_value(), want);
  }
}

TEST(McbNoSod, SampleGraphSolution) {
  const auto inst = gen_mcb_nosod(oracle::sample_graph());
  EXPECT_EQ(inst.kr, 4);
  EXPECT_EQ(inst.kp, 4);
  EXPECT_EQ(inst.num_roles(), 11u);
  const auto plb = inst.labels_of(inst.plb);
  EXPECT_EQ(std::set(plb.begin(), plb.end()), (std::set<std::string>{"p_1_1", "p_1_2", "p_2_1", "p_2_2"}));
  EXPECT_TRUE(verify_solution(inst, {inst.roles_named({"r_a2_b2", "r_a2_b3", "r_a3_b2", "r_a3_b3"})}).ok);
}

TEST(McbNoSod, SingleEdge) {
  BipartiteInstance g;
  g.k = 1;
  g.graph.a = {"a"};
  g.graph.b = {"b"};
  g.graph.edges = {{0, 0}};
  g.a_block = {0};
  g.b_block = {0};
  const auto inst = gen_mcb_nosod(g);
  EXPECT_EQ(inst.kr, 1);
  EXPECT_EQ(inst.kp, 2);
  EXPECT_TRUE(brute_force(inst));
}

TEST(McbNoSod, RoleShapeRestrictions) {
  std::mt19937_64 rng(71);
  for (int i = 0; i < 60; ++i) {
    const auto inst = gen_mcb_nosod(random_blocked(2 + static_cast<int>(rng() % 2), 3, 0.5, rng() % 2, rng));
    for (RoleId r = 0; r < inst.num_roles(); ++r) {
      EXPECT_EQ(inst.role_perms[r].count(), 3u);
      EXPECT_EQ((inst.role_perms[r] & inst.plb).count(), 1u);
      for (RoleId s = r + 1; s < inst.num_roles(); ++s)
        EXPECT_LE((inst.role_perms[r] & inst.role_perms[s]).count(), 2u);
    }
  }
}

TEST(McbNoSod, MatchesBicliqueChecker) {
  std::mt19937_64 rng(72);
  for (int i = 0; i < 80; ++i) {
    const auto g = random_blocked(2, 3, 0.5, rng() % 4 == 0, rng);
    EXPECT_EQ(brute_force(gen_mcb_nosod(g)).has_value(), oracle::multicolored_biclique_exists(g));
  }
}

TEST(McbK22, CompleteGraphIsYesWithoutConstraints) {
  const auto inst = gen_mcb_k22(complete_blocked(2, 2));
  EXPECT_TRUE(inst.constraints.empty());
  EXPECT_EQ(inst.kr, 5);
  EXPECT_EQ(inst.kp, 0);
  EXPECT_EQ(inst.plb, PermSet::full(inst.num_perms()));
  EXPECT_TRUE(brute_force(inst));
}

TEST(McbK22, K22FreeAndMatchesBicliqueChecker) {
  std::mt19937_64 rng(73);
  for (int i = 0; i < 80; ++i) {
    const auto g = random_blocked(2, 3, 0.6, rng() % 4 == 0, rng);
    const auto inst = gen_mcb_k22(g);
    EXPECT_TRUE(check_class(inst, {2, 2, 2}).kab_free);
    EXPECT_EQ(brute_force(inst).has_value(), oracle::multicolored_biclique_exists(g));
  }
}

TEST(RandomBlocked, PlantedHasBiclique) {
  std::mt19937_64 rng(74);
  for (int i = 0; i < 50; ++i) {
    const auto g = random_blocked(2 + static_cast<int>(rng() % 2), 3, 0.1, true, rng);
    EXPECT_NO_THROW(validate(g));
    EXPECT_TRUE(oracle::multicolored_biclique_exists(g));
  }
}

TEST(Validate, RejectsMalformedGraphs) {
  auto g = star();
  g.edges.push_back({0, 0});
  EXPECT_THROW(validate(g), InputError);
  g = star();
  g.edges.push_back({1, 0});
  EXPECT_THROW(validate(g), InputError);
  BipartiteInstance bi;
  bi.graph = star();
  bi.k = 2;
  bi.a_block = {0};
  bi.b_block = {0, 1};
  EXPECT_THROW(validate(bi), InputError);
}

TEST(GenRandom, ClassCompliant) {
  std::mt19937_64 rng(75);
  for (int i = 0; i < 200; ++i) {
    const auto spec = oracle::desk_spec(rng, 2 + static_cast<int>(rng() % 2), 2 + static_cast<int>(rng() % 2), 3);
    const auto inst = gen_random(spec).instance;
    const auto rep = check_class(inst, {spec.alpha, spec.beta, spec.c});
    EXPECT_TRUE(rep.ok()) << "seed " << spec.seed;
    EXPECT_EQ(inst.num_roles(), static_cast<std::size_t>(spec.n_roles));
    EXPECT_EQ(inst.plb.count(), static_cast<std::size_t>(spec.plb_size));
  }
}

TEST(GenRandom, PlantedSolutionVerifies) {
  std::mt19937_64 rng(76);
  for (int i = 0; i < 200; ++i) {
    auto spec = oracle::desk_spec(rng, 2, 2, 3);
    spec.plant = true;
    const auto gen = gen_random(spec);
    ASSERT_TRUE(gen.planted);
    EXPECT_TRUE(verify_solution(gen.instance, *gen.planted).ok) << "seed " << spec.seed;
  }
}

TEST(GenRandom, SameSeedSameBytes) {
  RandomSpec spec;
  spec.seed = 123;
  spec.plant = true;
  EXPECT_EQ(serialize_instance(gen_random(spec).instance), serialize_instance(gen_random(spec).instance));
  auto other = spec;
  other.seed = 124;
  EXPECT_NE(serialize_instance(gen_random(spec).instance), serialize_instance(gen_random(other).instance));
}

TEST(GenRandom, RejectsInconsistentSpec) {
  RandomSpec spec;
  spec.plb_size = spec.n_perms + 1;
  EXPECT_THROW(gen_random(spec), ConfigError);
  spec = RandomSpec{};
  spec.beta = 1;
  EXPECT_THROW(gen_random(spec), ConfigError);
}
