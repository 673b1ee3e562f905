#include <gtest/gtest.h>

#include <cmath>

#include "qsched/fnpr.hpp"
#include "qsched/generators.hpp"
#include "qsched/oracle.hpp"
#include "test_util.hpp"

using namespace qsched;
using namespace qsched::testing_util;

namespace {

FractionalColumn column(int request, const StrategyTree& tree, double value) {
  return FractionalColumn{request, 0, tree, tree_to_numerology(tree), value};
}

}  // namespace

TEST(Fractional, SingleRequestReachesPathProbability) {
  const Instance inst = make_instance(make_line(2, 5, 10, 0.98, 0.9), {{{0, 1}}}, 5);
  const FractionalSolution frac = solve_fractional(inst, {0.1, std::nullopt});
  EXPECT_GE(frac.objective, (1 - 0.2) * 0.9);
  EXPECT_LE(frac.objective, 0.9 + 1e-12);
  double mass = 0.0;
  for (const auto& c : frac.columns) mass += c.value;
  EXPECT_LE(mass, 1.0 + 1e-12);
}

TEST(Fractional, EmptyInstance) {
  const Instance inst = make_instance(make_line(3, 4, 2), {}, 4);
  const FractionalSolution frac = solve_fractional(inst);
  EXPECT_TRUE(frac.columns.empty());
  EXPECT_EQ(frac.objective, 0.0);
  Rng rng = make_stream(1, "fnpr");
  EXPECT_EQ(fnpr_solve(inst, FnprMode::Tetris, 0.1, rng).accepted(), 0);
}

TEST(Fractional, IterationCapThrows) {
  const Instance inst = make_instance(make_line(3, 4, 2), {{{0, 1, 2}}}, 4);
  EXPECT_THROW(solve_fractional(inst, {0.1, 1}), SolverDivergenceError);
}

TEST(Fractional, PackingRowsHold) {
  const Instance inst = build_instance(tiny_config(4, 8, 5, 6));
  const FractionalSolution frac = solve_fractional(inst);
  std::vector<double> per_request(inst.requests.size(), 0.0);
  WeightGrid load(inst.num_slots(), inst.topology.num_nodes(), 0.0);
  for (const auto& c : frac.columns) {
    per_request[c.request] += c.value;
    const auto& nodes = inst.requests[c.request].paths[c.path_index].nodes;
    for (const auto& cell : occupancy(c.numerology)) load(cell.slot, nodes[cell.position]) += cell.units * c.value;
  }
  for (double m : per_request) EXPECT_LE(m, 1.0 + 1e-9);
  for (int t = 1; t <= inst.num_slots(); ++t)
    for (int v = 0; v < inst.topology.num_nodes(); ++v) EXPECT_LE(load(t, v), inst.capacity()(t, v) + 1e-9);
}

TEST(Rounding, FrequenciesMatchColumnValues) {
  const Instance inst = make_instance(make_line(2, 4, 10), {{{0, 1}}}, 4);
  FractionalSolution frac;
  frac.columns = {column(0, StrategyTree::leaf(0, 2), 0.1), column(0, StrategyTree::leaf(0, 3), 0.2),
                  column(0, StrategyTree::leaf(0, 4), 0.3)};
  Rng rng = make_stream(5, "rounding");
  const int draws = 100000;
  std::array<int, 4> hits{};
  for (int k = 0; k < draws; ++k) {
    const Allocation a = randomized_round(inst, frac, rng);
    ASSERT_EQ(a.chosen.size(), 1u);
    if (!a.chosen[0]) {
      ++hits[3];
      continue;
    }
    ++hits[a.chosen[0]->tree.root_slot() - 2];
  }
  const std::array<double, 4> expect{0.1, 0.2, 0.3, 0.4};
  for (int k = 0; k < 4; ++k) {
    const double sigma = std::sqrt(expect[k] * (1 - expect[k]) / draws);
    EXPECT_NEAR(hits[k] / double(draws), expect[k], 3 * sigma) << "outcome " << k;
  }
}

TEST(Rounding, FullMassAlwaysSelected) {
  const Instance inst = make_instance(make_line(2, 4, 10), {{{0, 1}}}, 4);
  FractionalSolution frac;
  frac.columns = {column(0, StrategyTree::leaf(0, 3), 1.0)};
  Rng rng = make_stream(6, "rounding");
  for (int k = 0; k < 1000; ++k) ASSERT_TRUE(randomized_round(inst, frac, rng).chosen[0]);
}

TEST(Repair, IdentityWithoutConflicts) {
  const Instance inst = make_instance(make_line(3, 3, 4), {{{0, 1}}, {{1, 2}}}, 3);
  Allocation a(2);
  a.chosen[0] = make_assignment(inst, 0, 0, StrategyTree::leaf(0, 2));
  a.chosen[1] = make_assignment(inst, 1, 0, StrategyTree::leaf(0, 3));
  const Allocation out = repair(a, FractionalSolution{}, inst, FnprMode::Tetris);
  EXPECT_EQ(format_allocation(inst, out), format_allocation(inst, a));
}

TEST(Repair, EvictsLowerExpectedFidelity) {
  Topology topo = make_line(3, 2, 2);
  topo.edges[1].init_fidelity = 0.9;
  topo.capacity(1, 1) = 1;
  topo.capacity(2, 1) = 1;
  const Instance inst = make_instance(topo, {{{0, 1}}, {{1, 2}}}, 2);
  Allocation a(2);
  a.chosen[0] = make_assignment(inst, 0, 0, StrategyTree::leaf(0, 2));
  a.chosen[1] = make_assignment(inst, 1, 0, StrategyTree::leaf(0, 2));
  EXPECT_GT(max_overload(inst, a), 1.0);
  FractionalSolution frac;
  frac.columns = {column(0, StrategyTree::leaf(0, 2), 0.5), column(1, StrategyTree::leaf(0, 2), 0.5)};
  const Allocation out = repair(a, frac, inst, FnprMode::Tetris);
  EXPECT_TRUE(out.chosen[0]);
  EXPECT_FALSE(out.chosen[1]);
  EXPECT_TRUE(check_feasible(inst, out, true).ok);
}

TEST(Repair, TetrisDropsSubThresholdPicks) {
  const Instance inst = make_instance(make_line(2, 5, 4, 0.6), {{{0, 1}}}, 5, 0.61);
  Allocation a(1);
  a.chosen[0] = make_assignment(inst, 0, 0, StrategyTree::leaf(0, 5));
  ASSERT_LT(a.chosen[0]->fidelity, 0.61);
  EXPECT_FALSE(repair(a, FractionalSolution{}, inst, FnprMode::Tetris).chosen[0]);
  EXPECT_TRUE(repair(a, FractionalSolution{}, inst, FnprMode::TetrisN).chosen[0]);
}

TEST(Repair, RefillsFromColumns) {
  const Instance inst = make_instance(make_line(2, 3, 2), {{{0, 1}}}, 3);
  FractionalSolution frac;
  frac.columns = {column(0, StrategyTree::leaf(0, 3), 0.2), column(0, StrategyTree::leaf(0, 2), 0.7)};
  const Allocation out = repair(Allocation(1), frac, inst, FnprMode::Tetris);
  ASSERT_TRUE(out.chosen[0]);
  EXPECT_EQ(out.chosen[0]->tree.root_slot(), 2);
}

TEST(Fnpr, MisTriangleAcceptsOne) {
  const Instance inst = mis_reduction(SimpleGraph{3, {{0, 1}, {1, 2}, {0, 2}}});
  const FractionalSolution frac = solve_fractional(inst);
  EXPECT_GE(frac.objective, 1.0 - 0.2);
  EXPECT_LE(frac.objective, 1.5 + 0.1);
  for (std::uint64_t s = 1; s <= 10; ++s) {
    Rng rng = make_stream(s, "fnpr");
    const Allocation a = fnpr_solve(inst, FnprMode::TetrisN, 0.1, rng);
    EXPECT_EQ(a.accepted(), 1) << "seed " << s;
  }
}

TEST(Fnpr, FeasibleAndBelowOptimumOnTinyInstances) {
  for (std::uint64_t s = 1; s <= 15; ++s) {
    const Instance inst = build_instance(tiny_config(s));
    Rng rng = make_stream(s, "fnpr");
    const Allocation a = fnpr_solve(inst, FnprMode::Tetris, 0.1, rng);
    EXPECT_TRUE(check_feasible(inst, a, true).ok) << check_feasible(inst, a, true).reason;
    const IlpResult opt = brute_force_ilp(inst);
    EXPECT_LE(a.expected_fidelity_sum(), opt.optimum + 1e-9) << "seed " << s;
    EXPECT_FALSE(std::isnan(a.pre_repair_overload));
  }
}

TEST(Fnpr, Deterministic) {
  const Instance inst = build_instance(tiny_config(3, 8, 5, 6));
  Rng r1 = make_stream(9, "fnpr");
  Rng r2 = make_stream(9, "fnpr");
  const Allocation a = fnpr_solve(inst, FnprMode::Tetris, 0.1, r1);
  const Allocation b = fnpr_solve(inst, FnprMode::Tetris, 0.1, r2);
  EXPECT_EQ(format_allocation(inst, a), format_allocation(inst, b));
  EXPECT_EQ(a.pre_repair_overload, b.pre_repair_overload);
}
