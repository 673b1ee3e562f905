#include <gtest/gtest.h>

#include "qsched/baselines.hpp"
#include "qsched/generators.hpp"
#include "test_util.hpp"

using namespace qsched;
using namespace qsched::testing_util;

TEST(NestingTree, Shapes) {
  EXPECT_EQ(nesting_tree(1), StrategyTree::leaf(0, 2));
  const StrategyTree t4 = nesting_tree(4);
  EXPECT_EQ(t4.root_slot(), 4);
  EXPECT_EQ(t4.root().split, 2);
  const StrategyTree t3 = nesting_tree(3);
  EXPECT_EQ(t3.root_slot(), 4);
  // slot 2 swaps (0,2); link (2,3) is carried to the final swap
  EXPECT_EQ(t3.root().split, 2);
  for (int h = 1; h <= 9; ++h) {
    const StrategyTree t = nesting_tree(h);
    EXPECT_EQ(t.root_slot(), min_root_slot(h)) << h;
    EXPECT_EQ(numerology_to_tree(tree_to_numerology(t)), t);
  }
}

TEST(LinearTree, Shapes) {
  EXPECT_EQ(linear_tree(1), nesting_tree(1));
  const StrategyTree t4 = linear_tree(4);
  EXPECT_EQ(t4.root_slot(), 5);
  EXPECT_EQ(t4.root().split, 3);
  for (const TreeNode& n : t4.nodes()) {
    if (n.is_leaf()) EXPECT_EQ(n.avail, 2);
  }
  for (int h = 1; h <= 6; ++h) {
    EXPECT_EQ(linear_tree(h).root_slot(), h + 1);
    EXPECT_EQ(numerology_to_tree(tree_to_numerology(linear_tree(h))), linear_tree(h));
  }
}

TEST(Plans, LinearRejectsWhenTooFewSlots) {
  const Instance inst = make_instance(make_line(5, 4, 4), {{{0, 1, 2, 3, 4}}}, 4, 0.0);
  EXPECT_EQ(linear_plan(inst).accepted(), 0);
  EXPECT_EQ(nesting_plan(inst).accepted(), 1);
}

TEST(Plans, UsesBestPathAndResidualMemory) {
  Topology topo = make_topology(4, {{0, 1}, {1, 3}, {0, 2}, {2, 3}}, 4, 2);
  topo.edges[0].link_prob = 0.5;
  const Instance inst = make_instance(topo, {{{0, 1, 3}, {0, 2, 3}}, {{0, 2, 3}}}, 4);
  const Allocation a = nesting_plan(inst);
  ASSERT_TRUE(a.chosen[0]);
  EXPECT_EQ(a.chosen[0]->path_index, 1);
  // node 2 relays request 0 with two units, nothing left for request 1
  EXPECT_FALSE(a.chosen[1]);
  EXPECT_TRUE(check_feasible(inst, a, true).ok);
}

TEST(Plans, FeasibleOnRandomInstances) {
  for (std::uint64_t s = 1; s <= 5; ++s) {
    ScenarioConfig c = ScenarioConfig::desk();
    c.seed = s;
    const Instance inst = build_instance(c);
    for (auto order : {BaselineOrder::Input, BaselineOrder::DescendingProb}) {
      EXPECT_TRUE(check_feasible(inst, nesting_plan(inst, order), true).ok);
      EXPECT_TRUE(check_feasible(inst, linear_plan(inst, order), true).ok);
    }
  }
}

TEST(Asap, PerfectLinksMatchNesting) {
  for (int hops = 1; hops <= 5; ++hops) {
    std::vector<NodeId> nodes;
    for (int v = 0; v <= hops; ++v) nodes.push_back(v);
    const Instance inst = make_instance(make_line(hops + 1, 8, 2, 0.97), {{nodes}}, 8, 0.0);
    const Allocation plan = nesting_plan(inst);
    ASSERT_TRUE(plan.chosen[0]);
    for (auto policy : {SwapFailure::DestroyBoth, SwapFailure::DropAll}) {
      const McOutcome mc = asap_monte_carlo(inst, 20, 3, policy);
      EXPECT_EQ(mc.admitted, 1);
      EXPECT_DOUBLE_EQ(mc.acceptance_rate, 1.0);
      EXPECT_NEAR(mc.mean_fidelity_sum, plan.chosen[0]->fidelity, 1e-12) << hops;
      EXPECT_NEAR(mc.std_error, 0.0, 1e-6);
    }
  }
}

TEST(Asap, DeadLinkNeverSucceeds) {
  Topology topo = make_line(3, 6, 2);
  topo.edges[1].link_prob = 0.0;
  const Instance inst = make_instance(topo, {{{0, 1, 2}}}, 6, 0.0);
  const McOutcome mc = asap_monte_carlo(inst, 100, 1);
  EXPECT_EQ(mc.acceptance_rate, 0.0);
  EXPECT_EQ(mc.mean_fidelity_sum, 0.0);
}

TEST(Asap, ReservationBlocksSecondRequest) {
  const Instance inst = make_instance(make_line(3, 4, 2), {{{0, 1, 2}}, {{0, 1, 2}}}, 4, 0.0);
  EXPECT_EQ(asap_monte_carlo(inst, 10, 1).admitted, 1);
}

TEST(Asap, DeterministicAndBounded) {
  ScenarioConfig c = ScenarioConfig::desk();
  c.seed = 5;
  const Instance inst = build_instance(c);
  const McOutcome a = asap_monte_carlo(inst, 200, 77);
  const McOutcome b = asap_monte_carlo(inst, 200, 77);
  EXPECT_EQ(a.mean_fidelity_sum, b.mean_fidelity_sum);
  EXPECT_EQ(a.acceptance_rate, b.acceptance_rate);
  EXPECT_GE(a.acceptance_rate, 0.0);
  EXPECT_LE(a.acceptance_rate, 1.0);
  EXPECT_THROW(parse_swap_failure("retry"), std::invalid_argument);
  EXPECT_EQ(parse_swap_failure(to_string(SwapFailure::DropAll)), SwapFailure::DropAll);
}

TEST(UpperBound, DominatesIntegralPlans) {
  EXPECT_EQ(upper_bound(make_instance(make_line(2, 3, 2), {}, 3), 0.1), 0.0);
  const Instance one = make_instance(make_line(2, 4, 4, 0.98, 0.7), {{{0, 1}}}, 4);
  EXPECT_GE(upper_bound(one, 0.1), 0.8 * 0.7);
  ScenarioConfig c = ScenarioConfig::desk();
  c.seed = 2;
  const Instance inst = build_instance(c);
  const double ub = upper_bound(inst, 0.1);
  for (const Allocation& a : {nesting_plan(inst), linear_plan(inst)}) {
    double prob = 0.0;
    for (const auto& x : a.chosen)
      if (x) prob += x->path_prob;
    EXPECT_GE(ub + 1e-9, prob);
  }
}
