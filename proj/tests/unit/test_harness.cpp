#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "qsched/flto.hpp"
#include "qsched/generators.hpp"
#include "qsched/harness.hpp"
#include "test_util.hpp"

using namespace qsched;
using namespace qsched::testing_util;

TEST(Metrics, HeaderAndEmptyRun) {
  std::ostringstream os;
  write_metrics_csv(os, {});
  EXPECT_EQ(os.str(),
            "scenario_id,seed,algorithm,param_name,param_value,expected_fidelity_sum,accepted_requests,"
            "pre_repair_overload,runtime_ms\n");
  EXPECT_TRUE(run_scenario(ScenarioConfig::desk(), {}).empty());
  EXPECT_THROW(run_scenario(ScenarioConfig::desk(), {"greedy"}), std::invalid_argument);
}

TEST(Metrics, ReproducibleExceptRuntime) {
  ScenarioConfig c = ScenarioConfig::desk();
  c.seed = 8;
  c.mc_trials = 50;
  const std::vector<std::string> algos{"fnpr", "flto", "nesting", "linear", "asap", "ub"};
  const auto a = run_scenario(c, algos);
  const auto b = run_scenario(c, algos);
  ASSERT_EQ(a.size(), algos.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].algorithm, algos[k]);
    EXPECT_EQ(a[k].expected_fidelity_sum, b[k].expected_fidelity_sum);
    EXPECT_EQ(a[k].accepted_requests, b[k].accepted_requests);
    EXPECT_EQ(a[k].pre_repair_overload.has_value(), algos[k] == "fnpr");
  }
  // ub bounds the fidelity-free value, which dominates every fidelity sum
  for (const auto& r : a) EXPECT_LE(r.expected_fidelity_sum, a.back().expected_fidelity_sum + 1e-9);
}

TEST(Metrics, CsvRoundTripAndSummary) {
  SweepSpec spec;
  spec.base = ScenarioConfig::desk();
  spec.param = "num_slots";
  spec.values = {"5", "7"};
  spec.repetitions = 3;
  spec.algorithms = {"flto", "nesting"};
  const auto rows = sweep(spec);
  ASSERT_EQ(rows.size(), 12u);
  EXPECT_EQ(rows[0].seed, repetition_seed(spec.base.seed, 0));
  EXPECT_EQ(rows[0].param_value, "5");

  std::stringstream ss;
  write_metrics_csv(ss, rows);
  const auto back = read_metrics_csv(ss);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    EXPECT_EQ(back[k].expected_fidelity_sum, rows[k].expected_fidelity_sum);
    EXPECT_EQ(back[k].scenario_id, rows[k].scenario_id);
  }

  // summary means recomputed independently from the parsed CSV
  std::map<std::pair<std::string, std::string>, std::vector<double>> groups;
  for (const auto& r : back) groups[{r.param_value, r.algorithm}].push_back(r.expected_fidelity_sum);
  const auto summary = summarize(rows);
  ASSERT_EQ(summary.size(), 4u);
  for (const auto& s : summary) {
    const auto& xs = groups[{s.param_value, s.algorithm}];
    ASSERT_EQ(static_cast<int>(xs.size()), s.runs);
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= xs.size();
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    EXPECT_NEAR(s.mean_expected_fidelity_sum, mean, 1e-12);
    EXPECT_NEAR(s.se_expected_fidelity_sum, std::sqrt(var / (xs.size() - 1) / xs.size()), 1e-12);
  }
}

TEST(Kappa, FrozenTreeFidelities) {
  const auto rows = kappa_experiment({0.98, 0.98, 0.98, 0.98}, {2.0});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NEAR(rows[0].complete, 0.834381670026, 1e-9);
  EXPECT_NEAR(rows[0].skewed, 0.827989850945, 1e-9);
  const auto het = kappa_experiment({0.98, 0.98, 0.95, 0.90}, {2.0});
  EXPECT_NEAR(het[0].complete, 0.722764620164, 1e-9);
  EXPECT_NEAR(het[0].skewed, 0.725540940952, 1e-9);
  EXPECT_EQ(complete_tree_4().root_slot(), 4);
  EXPECT_EQ(skewed_tree_4().hops(), 4);
}

TEST(Fig3, RatioAtLeastOne) {
  const auto cells = fig3_ratio_experiment(ScenarioConfig::desk(), {1.0, 2.0}, {4, 5}, {1, 2}, 3);
  ASSERT_EQ(cells.size(), 4u);
  for (const auto& c : cells) {
    EXPECT_GT(c.paths, 0);
    EXPECT_GE(c.mean_ratio, 1.0);
  }
  EXPECT_EQ(cells[0].paths, cells[3].paths);
}

TEST(McVerify, PerfectLinksAreExact) {
  const Instance inst = make_instance(make_line(4, 6, 4, 0.97), {{{0, 1, 2, 3}}, {{0, 1}}}, 6, 0.0);
  const Allocation a = flto_solve(inst);
  ASSERT_EQ(a.accepted(), 2);
  const McReport r = mc_verify(inst, a, 500, 1);
  EXPECT_NEAR(r.empirical_mean, r.expected, 1e-12);
  EXPECT_DOUBLE_EQ(r.acceptance_rate, 1.0);
  EXPECT_TRUE(r.consistent);
}

TEST(McVerify, LossyLinksWithinErrorBars) {
  ScenarioConfig c = ScenarioConfig::desk();
  c.seed = 4;
  const Instance inst = build_instance(c);
  const Allocation a = flto_solve(inst);
  ASSERT_GT(a.accepted(), 0);
  const McReport r = mc_verify(inst, a, 4000, 12);
  EXPECT_NEAR(r.expected, a.expected_fidelity_sum(), 1e-12);
  EXPECT_LE(std::abs(r.empirical_mean - r.expected), 4 * r.std_error);
}

TEST(AllocationIo, RoundTrip) {
  ScenarioConfig c = ScenarioConfig::desk();
  c.seed = 6;
  const Instance inst = build_instance(c);
  const Allocation a = flto_solve(inst);
  std::stringstream ss;
  ss << "# flto\n";
  write_allocation(ss, inst, a);
  const Allocation back = read_allocation(ss, inst);
  EXPECT_EQ(format_allocation(inst, back), format_allocation(inst, a));
  EXPECT_NEAR(back.expected_fidelity_sum(), a.expected_fidelity_sum(), 1e-12);
  std::istringstream bad("request=0 path=0-999 tree=(0,1)@2 fidelity=1 prob=1\n");
  EXPECT_THROW(read_allocation(bad, inst), std::invalid_argument);
}
