#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "uaq/errors.hpp"
#include "uaq/generators.hpp"
#include "uaq/model.hpp"

using namespace uaq;

namespace {

Instance sample_instance() { return gen_mcb_nosod(oracle::sample_graph()); }

std::set<std::string> perm_labels(const Instance& inst, const PermSet& ps) {
  auto v = inst.labels_of(ps);
  return {v.begin(), v.end()};
}

}  // namespace

TEST(PermissionsOf, EmptyRoleSetCoversNothing) {
  const auto inst = sample_instance();
  EXPECT_TRUE(permissions_of(inst, inst.no_roles()).empty());
}

TEST(PermissionsOf, SingleEdgeRole) {
  const auto inst = sample_instance();
  const auto ps = permissions_of(inst, inst.roles_named({"r_a2_b2"}));
  EXPECT_EQ(perm_labels(inst, ps), (std::set<std::string>{"p_1_1", "a2", "b2"}));
}

TEST(PermissionsOf, UnionOfTwoRoles) {
  const auto inst = sample_instance();
  const auto ps = permissions_of(inst, inst.roles_named({"r_a2_b2", "r_a3_b3"}));
  EXPECT_EQ(perm_labels(inst, ps), (std::set<std::string>{"p_1_1", "p_2_2", "a2", "b2", "a3", "b3"}));
}

TEST(PermissionsOf, RejectsForeignRoleSet) {
  const auto inst = sample_instance();
  EXPECT_THROW(permissions_of(inst, RoleSet(inst.num_roles() + 1)), InputError);
}

TEST(PermissionsOf, Monotone) {
  const auto inst = sample_instance();
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    RoleSet small = inst.no_roles(), big = inst.no_roles();
    for (RoleId r = 0; r < inst.num_roles(); ++r) {
      const auto roll = rng() % 3;
      if (roll == 0) small.insert(r);
      if (roll <= 1) big.insert(r);
    }
    EXPECT_TRUE(permissions_of(inst, small).is_subset_of(permissions_of(inst, big)));
  }
}

TEST(VerifySolution, ExactCover) {
  const auto inst = InstanceBuilder().assign("r1", "p1").require("p1").budgets(1, 0).build();
  EXPECT_TRUE(verify_solution(inst, {inst.roles_named({"r1"})}).ok);
}

TEST(VerifySolution, SampleGraphSolution) {
  const auto inst = sample_instance();
  const Solution sol{inst.roles_named({"r_a2_b2", "r_a2_b3", "r_a3_b2", "r_a3_b3"})};
  EXPECT_TRUE(verify_solution(inst, sol).ok);
  const auto covered = permissions_of(inst, sol.roles);
  EXPECT_EQ((covered - inst.plb).count(), 4u);
}

TEST(VerifySolution, ListsMissingPermissions) {
  const auto inst = sample_instance();
  const auto v = verify_solution(inst, {inst.roles_named({"r_a2_b2"})});
  ASSERT_FALSE(v.ok);
  std::set<std::string> missing;
  for (const auto& x : v.violations) {
    EXPECT_EQ(x.kind, Violation::Kind::missing_permission);
    missing.insert(x.detail);
  }
  EXPECT_EQ(missing, (std::set<std::string>{"p_1_2", "p_2_1", "p_2_2"}));
}

TEST(VerifySolution, ReportsEveryClause) {
  const auto inst = InstanceBuilder()
                        .assign("r1", "p1")
                        .assign("r1", "x")
                        .assign("r2", "p2")
                        .assign("r2", "y")
                        .require("p1")
                        .require("p2")
                        .require("p3")
                        .allow("p1")
                        .allow("p2")
                        .allow("p3")
                        .allow("x")
                        .constraint({"r1", "r2"}, 2)
                        .budgets(1, 0)
                        .build();
  const auto v = verify_solution(inst, {inst.roles_named({"r1", "r2"})});
  std::set<Violation::Kind> kinds;
  for (const auto& x : v.violations) kinds.insert(x.kind);
  EXPECT_EQ(kinds, (std::set<Violation::Kind>{Violation::Kind::too_many_roles, Violation::Kind::missing_permission,
                                              Violation::Kind::outside_upper_bound, Violation::Kind::too_many_extra,
                                              Violation::Kind::sod}));
}

TEST(VerifySolution, AgreesWithFastPathAndOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = gen_random(oracle::desk_spec(rng, 2, 2, 3)).instance;
    for (int k = 0; k < 20; ++k) {
      RoleSet s = inst.no_roles();
      for (RoleId r = 0; r < inst.num_roles(); ++r)
        if (rng() % 4 == 0) s.insert(r);
      EXPECT_EQ(verify_solution(inst, {s}).ok, is_solution(inst, s));
    }
  }
}

TEST(CheckClass, NoConstraintsIsVacuouslyFine) {
  const auto inst = sample_instance();
  const auto rep = check_class(inst, {2, 3, 1});
  EXPECT_TRUE(rep.widths_ok);
  EXPECT_TRUE(rep.disjoint_ok);
}

TEST(CheckClass, SharedPairIsWitnessed) {
  const auto inst = InstanceBuilder()
                        .assign("r1", "p1")
                        .assign("r1", "p2")
                        .assign("r2", "p1")
                        .assign("r2", "p2")
                        .require("p1")
                        .budgets(1, 1)
                        .build();
  const auto rep = check_class(inst, {2, 2, 1});
  EXPECT_FALSE(rep.kab_free);
  ASSERT_TRUE(rep.kab_witness);
  EXPECT_EQ(*rep.kab_witness, inst.roles_named({"r1", "r2"}));
  EXPECT_FALSE(rep.witnesses.empty());
}

TEST(CheckClass, WidthAndOverlap) {
  const auto inst = InstanceBuilder()
                        .assign("r1", "p1")
                        .assign("r2", "p1")
                        .assign("r3", "p1")
                        .require("p1")
                        .constraint({"r1", "r2", "r3"}, 2)
                        .constraint({"r3"}, 1)
                        .budgets(1, 0)
                        .build();
  const auto rep = check_class(inst, {2, 2, 2});
  EXPECT_FALSE(rep.widths_ok);
  EXPECT_FALSE(rep.disjoint_ok);
  EXPECT_FALSE(rep.ok());
}

TEST(CheckClass, K22FreeImpliesLargerClasses) {
  std::mt19937_64 rng(3);
  int seen = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = gen_random(oracle::desk_spec(rng, 2, 2, 2)).instance;
    if (!check_class(inst, {2, 2, 3}).kab_free) continue;
    ++seen;
    for (int a = 2; a <= 4; ++a)
      for (int b = 2; b <= 4; ++b) EXPECT_TRUE(check_class(inst, {a, b, 3}).kab_free);
  }
  EXPECT_GT(seen, 0);
}

TEST(CheckClass, RejectsBadParams) {
  EXPECT_THROW(validate(ClassParams{1, 2, 1}), ConfigError);
  EXPECT_THROW(validate(ClassParams{2, 2, 0}), ConfigError);
}

TEST(Stats, AllInsidePlb) {
  const auto inst =
      InstanceBuilder().assign("r1", "p1").assign("r2", "p2").require("p1").require("p2").budgets(2, 0).build();
  const auto s = stats(inst);
  EXPECT_EQ(s.k_hat, 0u);
  EXPECT_EQ(s.r_hat, 0u);
}

TEST(Stats, SampleGraph) {
  const auto s = stats(sample_instance());
  EXPECT_EQ(s.k_hat, 9u);
  EXPECT_EQ(s.r_hat, 11u);
  EXPECT_EQ(s.n_roles, 11u);
  EXPECT_EQ(s.n_perms, 13u);
}

TEST(Stats, EmptyInstance) { EXPECT_EQ(stats(InstanceBuilder().build()), InstanceStats{}); }

TEST(Builder, RejectsPlbOutsidePub) {
  EXPECT_THROW(InstanceBuilder().assign("r1", "p1").require("p1").allow("p2").build(), InputError);
}

TEST(Builder, RejectsZeroThresholdAndNegativeBudgets) {
  EXPECT_THROW(InstanceBuilder().assign("r1", "p1").constraint({"r1"}, 0).build(), InputError);
  EXPECT_THROW(InstanceBuilder().assign("r1", "p1").budgets(-1, 0).build(), InputError);
}

TEST(Builder, PubDefaultsToEveryPermission) {
  const auto inst = InstanceBuilder().assign("r1", "p1").assign("r1", "p2").require("p1").build();
  EXPECT_EQ(inst.pub, PermSet::full(2));
}

TEST(Validate, DuplicateLabelIsNamed) {
  auto inst = InstanceBuilder().assign("r1", "p1").require("p1").build();
  inst.role_labels.push_back("r1");
  inst.role_perms.push_back(inst.no_perms());
  try {
    validate(inst);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("\"r1\""), std::string::npos);
  }
}

TEST(Validate, BadThresholdAndBudget) {
  auto inst = InstanceBuilder().assign("r1", "p1").require("p1").constraint({"r1"}, 1).build();
  inst.constraints[0].threshold = 0;
  EXPECT_THROW(validate(inst), InputError);
  inst.constraints[0].threshold = 1;
  inst.kp = -1;
  EXPECT_THROW(validate(inst), InputError);
}

TEST(UnboundedRoles, SetsKrToRoleCount) {
  const auto inst = with_unbounded_roles(sample_instance());
  EXPECT_EQ(inst.kr, 11);
}
