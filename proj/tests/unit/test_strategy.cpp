#include <gtest/gtest.h>

#include <random>

#include "qsched/strategy.hpp"

using namespace qsched;

namespace {

StrategyTree two_hop_earliest() {
  return StrategyTree::join(StrategyTree::leaf(0, 2), StrategyTree::leaf(1, 2), 3);
}

}  // namespace

TEST(StrategyTree, JoinRequiresSharedEndpoint) {
  EXPECT_THROW(StrategyTree::join(StrategyTree::leaf(0, 2), StrategyTree::leaf(2, 2), 3), InvalidTreeError);
}

TEST(StrategyTree, ValidateSlots) {
  const auto t = two_hop_earliest();
  EXPECT_NO_THROW(t.validate(3));
  EXPECT_THROW(t.validate(2), InvalidTreeError);
  // child must be ready one slot before its parent
  const auto bad = StrategyTree::join(StrategyTree::leaf(0, 3), StrategyTree::leaf(1, 2), 3);
  EXPECT_FALSE(bad.is_feasible(5));
  EXPECT_FALSE(StrategyTree::leaf(0, 1).is_feasible(5));
}

TEST(StrategyTree, MirrorSwapsShape) {
  const auto left_heavy = StrategyTree::join(two_hop_earliest(), StrategyTree::leaf(2, 3), 4);
  const auto m = left_heavy.mirrored();
  EXPECT_EQ(m.root().split, 1);
  EXPECT_EQ(m.mirrored(), left_heavy);
}

TEST(Numerology, SingleEdge) {
  const Numerology m = tree_to_numerology(StrategyTree::leaf(0, 2));
  ASSERT_EQ(m.pairs.size(), 1u);
  EXPECT_EQ(m.pairs[0], (PairOccupancy{0, 1, 1, 2}));
  EXPECT_EQ(total_units(m), 4);
  const std::vector<NodeId> nodes{0, 1};
  EXPECT_NEAR(resource_cost(m, nodes, WeightGrid(3, 2, 0.1)), 0.4, 1e-12);
}

TEST(Numerology, TwoHopEarliestOccupancy) {
  const auto cells = occupancy(tree_to_numerology(two_hop_earliest()));
  const std::vector<OccupancyCell> expected{{1, 0, 1}, {1, 1, 2}, {1, 2, 1}, {2, 0, 1}, {2, 1, 2},
                                            {2, 2, 1}, {3, 0, 1}, {3, 2, 1}};
  EXPECT_EQ(cells, expected);
}

TEST(Numerology, IdleLeafHoldsMemoryUntilSwap) {
  // (1,2) is entangled during slot 1 and waits two slots for (0,1)
  const auto t = StrategyTree::join(StrategyTree::leaf(0, 4), StrategyTree::leaf(1, 2), 5);
  const Numerology m = tree_to_numerology(t);
  EXPECT_EQ(m.pairs[0], (PairOccupancy{0, 1, 3, 4}));
  EXPECT_EQ(m.pairs[1], (PairOccupancy{0, 2, 5, 5}));
  EXPECT_EQ(m.pairs[2], (PairOccupancy{1, 2, 1, 4}));
  EXPECT_EQ(numerology_to_tree(m), t);
}

TEST(Numerology, RejectsMalformed) {
  Numerology m;
  m.pairs = {{0, 1, 1, 2}, {1, 2, 1, 3}};  // two disjoint roots
  EXPECT_THROW(numerology_to_tree(m), MalformedNumerologyError);
  EXPECT_THROW(numerology_to_tree(Numerology{}), MalformedNumerologyError);
}

TEST(Numerology, BijectionOnAllSmallTrees) {
  for (int hops = 1; hops <= 4; ++hops)
    for (int slots = 2; slots <= 6; ++slots)
      for (const auto& e : enumerate_numerologies(hops, slots)) {
        EXPECT_EQ(numerology_to_tree(e.numerology), e.tree);
        for (const auto& c : occupancy(e.numerology)) EXPECT_LE(c.units, 2);
      }
}

TEST(Numerology, EnumerationCounts) {
  // a single link can be entangled in any slot before the root slot
  EXPECT_EQ(enumerate_numerologies(1, 5).size(), 4u);
  // 2 hops within 3 slots: only the earliest tree
  EXPECT_EQ(enumerate_numerologies(2, 3).size(), 1u);
  EXPECT_TRUE(enumerate_numerologies(3, 3).empty());
  EXPECT_THROW(enumerate_numerologies(9, 5), EnumerationGuardError);
}

TEST(Numerology, CapacityFilter) {
  const std::vector<NodeId> nodes{0, 1, 2};
  CapacityGrid cap(3, 3, 2);
  EXPECT_EQ(enumerate_numerologies(2, 3, nodes, &cap).size(), 1u);
  cap(1, 1) = 1;  // the relay needs two units while both leaves are entangled
  EXPECT_TRUE(enumerate_numerologies(2, 3, nodes, &cap).empty());
}

TEST(Numerology, FidelityOfTwoHopTree) {
  const FidelityModel model;
  const std::vector<double> f{0.9, 0.8};
  EXPECT_NEAR(evaluate_fidelity(two_hop_earliest(), f, model), 0.681944543111251, 1e-12);
  // a pair that has fully decohered is reported, not silently kept
  FidelityModel fast = model;
  fast.coherence_ms = 0.5;
  EXPECT_THROW(evaluate_fidelity(two_hop_earliest(), f, fast), DecoheredError);
  EXPECT_FALSE(try_evaluate_fidelity(two_hop_earliest(), f, fast).has_value());
}

TEST(Numerology, CompactStringRoundTrip) {
  const auto t = StrategyTree::join(two_hop_earliest(), StrategyTree::leaf(2, 3), 4);
  const std::string s = to_compact_string(t);
  EXPECT_EQ(s, "(0,3)@4;(0,2)@3;(0,1)@2;(1,2)@2;(2,3)@3");
  EXPECT_EQ(parse_compact_tree(s), t);
  EXPECT_THROW(parse_compact_tree("(0,2)@3;(0,1)@2"), std::invalid_argument);
}

TEST(Numerology, FitsAndApplyLoad) {
  const std::vector<NodeId> nodes{3, 1, 2};
  const Numerology m = tree_to_numerology(two_hop_earliest());
  CapacityGrid cap(3, 4, 2);
  EXPECT_TRUE(fits(m, nodes, cap));
  SlotGrid<int> load(3, 4, 0);
  apply_load(load, m, nodes, +1);
  EXPECT_EQ(load(1, 1), 2);
  EXPECT_EQ(load(3, 1), 0);
  EXPECT_EQ(load(3, 3), 1);
  apply_load(load, m, nodes, -1);
  EXPECT_EQ(load, SlotGrid<int>(3, 4, 0));
}
