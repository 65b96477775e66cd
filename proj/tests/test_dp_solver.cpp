#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "uaq/baselines.hpp"
#include "uaq/dp_solver.hpp"
#include "uaq/errors.hpp"

using namespace uaq;

namespace {

Instance forbidden_pair() {
  return InstanceBuilder()
      .assign("r1", "p1")
      .assign("r2", "p2")
      .require("p1")
      .require("p2")
      .constraint({"r1", "r2"}, 2)
      .budgets(2, 0)
      .build();
}

SolveOptions opts(int alpha, int beta, int c) {
  SolveOptions o;
  o.params = {alpha, beta, c};
  return o;
}

}  // namespace

TEST(SolveLeaf, EmptyLowerBound) {
  const auto inst = InstanceBuilder().assign("r1", "x").budgets(1, 1).build();
  const auto leaf = root_leaf(inst);
  const auto out = solve_leaf(leaf, build_csm(leaf), {});
  ASSERT_TRUE(out);
  EXPECT_TRUE(out->empty());
}

TEST(SolveLeaf, ConstraintForbidsOnlyCover) {
  const auto leaf = root_leaf(forbidden_pair());
  EXPECT_FALSE(solve_leaf(leaf, build_csm(leaf), {}));
}

TEST(SolveLeaf, InfeasibleLeafHasNoSolution) {
  auto leaf = root_leaf(InstanceBuilder().assign("r1", "p1").require("p1").budgets(1, 0).build());
  leaf.infeasible = true;
  EXPECT_FALSE(solve_leaf(leaf, build_csm(leaf), {}));
}

TEST(SolveLeaf, SampleGraph) {
  const auto inst = gen_mcb_nosod(oracle::sample_graph());
  const auto tree = preprocess(reduction0(inst), {2, 3, 1});
  ASSERT_EQ(tree.leaves.size(), 1u);
  const auto& leaf = tree.leaves[0];
  DpStats st;
  const auto r2 = solve_leaf(leaf, build_csm(leaf), {}, &st);
  ASSERT_TRUE(r2);
  EXPECT_EQ(r2->count(), 4u);
  const auto covered = permissions_of(leaf.inst, *r2);
  EXPECT_TRUE(leaf.inst.plb.is_subset_of(covered));
  EXPECT_LE((covered - leaf.inst.plb).count(), 4u);
  EXPECT_GT(st.table_cells, 0u);
}

TEST(Solve, SingleRoleExactCover) {
  const auto inst = InstanceBuilder().assign("r1", "p1").require("p1").budgets(1, 0).build();
  const auto out = solve(inst, opts(2, 2, 1));
  ASSERT_TRUE(out.solution);
  EXPECT_EQ(out.solution->roles, inst.roles_named({"r1"}));
}

TEST(Solve, ForbiddenPairIsUnsat) { EXPECT_FALSE(solve(forbidden_pair(), opts(2, 2, 2)).solution); }

TEST(Solve, RefusesClassViolation) {
  const auto inst = InstanceBuilder()
                        .assign("r1", "p1")
                        .assign("r1", "p2")
                        .assign("r2", "p1")
                        .assign("r2", "p2")
                        .require("p1")
                        .budgets(1, 1)
                        .build();
  EXPECT_THROW(solve(inst, opts(2, 2, 1)), ClassError);
  EXPECT_THROW(solve(forbidden_pair(), opts(2, 2, 1)), ClassError);
}

TEST(Solve, AgreesWithOracle) {
  std::mt19937_64 rng(2024);
  int sat = 0;
  for (int i = 0; i < 200; ++i) {
    const auto spec = oracle::desk_spec(rng, 2, 2, 3);
    const auto inst = gen_random(spec).instance;
    const auto out = solve(inst, opts(2, 2, spec.c));
    ASSERT_EQ(out.solution.has_value(), oracle::uaq_sat(inst)) << "seed " << spec.seed;
    if (out.solution) {
      ++sat;
      EXPECT_TRUE(verify_solution(inst, *out.solution).ok);
    }
  }
  EXPECT_GT(sat, 20);
  EXPECT_LT(sat, 180);
}

TEST(Solve, AlphaThreeAgreesWithOracle) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 100; ++i) {
    const auto spec = oracle::desk_spec(rng, 3, 2, 3);
    const auto inst = gen_random(spec).instance;
    const auto out = solve(inst, opts(3, 2, spec.c));
    ASSERT_EQ(out.solution.has_value(), oracle::uaq_sat(inst)) << "seed " << spec.seed;
    if (out.solution) {
      EXPECT_TRUE(verify_solution(inst, *out.solution).ok);
    }
  }
}

TEST(Solve, TruncatedModeAgreesWithOracle) {
  std::mt19937_64 rng(31);
  int wrong = 0;
  for (int i = 0; i < 150; ++i) {
    const auto spec = oracle::desk_spec(rng, 2, 2, 3);
    const auto inst = gen_random(spec).instance;
    auto o = opts(2, 2, spec.c);
    o.rep.mode = RepMode::truncated;
    o.rep.seed = spec.seed;
    const auto out = solve(inst, o);
    // a truncation miss can only lose solutions
    if (out.solution) {
      EXPECT_TRUE(verify_solution(inst, *out.solution).ok);
    } else if (oracle::uaq_sat(inst)) {
      ++wrong;
    }
  }
  EXPECT_LE(wrong, 1);
}

TEST(Solve, ThreadCountDoesNotChangeAnswer) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 60; ++i) {
    const auto spec = oracle::desk_spec(rng, 3, 2, 3);
    const auto inst = gen_random(spec).instance;
    auto one = opts(3, 2, spec.c);
    auto four = one;
    four.threads = 4;
    const auto a = solve(inst, one);
    const auto b = solve(inst, four);
    ASSERT_EQ(a.solution.has_value(), b.solution.has_value());
    if (a.solution) {
      EXPECT_EQ(a.solution->roles, b.solution->roles);
    }
    EXPECT_EQ(a.leaves, b.leaves);
  }
}

TEST(Solve, PlantedInstancesAreSat) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 100; ++i) {
    auto spec = oracle::desk_spec(rng, 2, 2, 3);
    spec.plant = true;
    const auto gen = gen_random(spec);
    const auto out = solve(gen.instance, opts(2, 2, spec.c));
    ASSERT_TRUE(out.solution) << "seed " << spec.seed;
  }
}

TEST(SolveLeaf, TableStaysWithinBound) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    const auto spec = oracle::desk_spec(rng, 2, 2, 3);
    const auto tree = preprocess(reduction0(gen_random(spec).instance), {2, 2, spec.c});
    for (const auto& leaf : tree.leaves) {
      if (leaf.infeasible) continue;
      DpStats st;
      solve_leaf(leaf, build_csm(leaf), {}, &st);
      const double bound = std::ldexp(1.0, static_cast<int>(leaf.inst.plb.count())) *
                           static_cast<double>(st.y_slices) * (leaf.inst.kr + 1);
      EXPECT_LE(static_cast<double>(st.table_cells), bound);
    }
  }
}

TEST(Solve, ExpiredDeadlineThrows) {
  const auto inst = gen_mcb_nosod(oracle::sample_graph());
  auto o = opts(2, 3, 1);
  o.deadline = Deadline(std::chrono::milliseconds(0));
  EXPECT_THROW(solve(inst, o), TimeoutError);
}

TEST(SolveLeaf, DirectOnUnreducedInstancesAgreesWithOracle) {
  // skips the reduction rules so the table does all the work
  std::mt19937_64 rng(404);
  std::size_t cells = 0;
  std::size_t reduced_cells = 0;
  for (int i = 0; i < 300; ++i) {
    const auto spec = oracle::desk_spec(rng, 2, 2, 3);
    const auto inst = gen_random(spec).instance;
    const auto leaf = root_leaf(inst);
    DpStats st;
    const auto r2 = solve_leaf(leaf, build_csm(leaf), {}, &st);
    cells += st.table_cells;
    for (const auto& l : preprocess(reduction0(inst), {2, 2, spec.c}).leaves) {
      if (l.infeasible) continue;
      DpStats rs;
      solve_leaf(l, build_csm(l), {}, &rs);
      reduced_cells += rs.table_cells;
    }
    ASSERT_EQ(r2.has_value(), oracle::uaq_sat(inst)) << "seed " << spec.seed;
    if (r2) {
      EXPECT_TRUE(verify_solution(inst, {*r2}).ok) << "seed " << spec.seed;
    }
  }
  EXPECT_GT(cells, reduced_cells);
}
