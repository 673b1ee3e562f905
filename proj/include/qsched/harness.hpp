#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qsched/allocation.hpp"
#include "qsched/baselines.hpp"
#include "qsched/instance.hpp"

namespace qsched {

inline constexpr const char* kMetricsHeader =
    "scenario_id,seed,algorithm,param_name,param_value,expected_fidelity_sum,accepted_requests,"
    "pre_repair_overload,runtime_ms";

struct MetricsRow {
  std::string scenario_id;
  std::uint64_t seed = 0;
  std::string algorithm;
  std::string param_name;
  std::string param_value;
  double expected_fidelity_sum = 0.0;
  double accepted_requests = 0.0;  // a mean for asap, a fractional count for ub
  std::optional<double> pre_repair_overload;
  double runtime_ms = 0.0;
};

/// fnpr, flto, nesting, linear, asap, ub
const std::vector<std::string>& known_algorithms();

struct AlgorithmRun {
  MetricsRow row;
  std::optional<Allocation> allocation;  // absent for asap and ub
};

/// Runs one algorithm on a built instance. Random streams derive from
/// config.seed, so repeated calls give identical results.
AlgorithmRun run_algorithm(const Instance& inst, const ScenarioConfig& config, const std::string& algorithm,
                           SwapFailure asap_policy = SwapFailure::DestroyBoth);

/// Builds the instance from `config` and runs each algorithm in order.
/// Throws std::invalid_argument on an unknown algorithm name.
std::vector<MetricsRow> run_scenario(const ScenarioConfig& config, const std::vector<std::string>& algorithms,
                                     const std::string& scenario_id = "scenario",
                                     const std::string& param_name = "", const std::string& param_value = "");

struct SweepSpec {
  ScenarioConfig base;
  std::string param;  // a config key or mem_avg
  std::vector<std::string> values;
  int repetitions = 20;
  std::vector<std::string> algorithms{"fnpr", "flto"};
};

/// Seed of repetition `rep`; shared by every swept value.
std::uint64_t repetition_seed(std::uint64_t master, int rep);

std::vector<MetricsRow> sweep(const SweepSpec& spec);

struct SummaryRow {
  std::string param_name;
  std::string param_value;
  std::string algorithm;
  int runs = 0;
  double mean_expected_fidelity_sum = 0.0;
  double se_expected_fidelity_sum = 0.0;
  double mean_accepted_requests = 0.0;
  double se_accepted_requests = 0.0;
  double mean_runtime_ms = 0.0;
};

/// Per (value, algorithm) means, in first-appearance order.
std::vector<SummaryRow> summarize(const std::vector<MetricsRow>& rows);

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows);
std::vector<MetricsRow> read_metrics_csv(std::istream& in);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

struct RatioCell {
  double tau_ms = 0.0;
  int num_slots = 0;
  int paths = 0;
  double mean_ratio = 1.0;
};

/// Mean F_max / F_min over every feasible numerology, per (tau, |T|) cell.
/// The path set is fixed across the grid: paths of the instances built from
/// `seeds` with at most `max_hops` hops that fit the smallest |T|.
std::vector<RatioCell> fig3_ratio_experiment(const ScenarioConfig& base, const std::vector<double>& taus,
                                             const std::vector<int>& slots,
                                             const std::vector<std::uint64_t>& seeds, int max_hops = 4);
void write_ratio_csv(std::ostream& out, const std::vector<RatioCell>& cells);

struct KappaRow {
  double kappa = 0.0;
  double skewed = 0.0;
  double complete = 0.0;
};

/// The two 4-hop trees compared in the kappa study.
StrategyTree skewed_tree_4();
StrategyTree complete_tree_4();

/// Evaluates both trees over the kappa list with the other model constants
/// from `model`.
std::vector<KappaRow> kappa_experiment(const std::vector<double>& link_fidelity, const std::vector<double>& kappas,
                                       const FidelityModel& model = {});
void write_kappa_csv(std::ostream& out, const std::vector<KappaRow>& rows);

struct McReport {
  int trials = 0;
  double expected = 0.0;        // sum of Pr(p) F(m)
  double empirical_mean = 0.0;  // mean realized fidelity sum
  double std_error = 0.0;
  double acceptance_rate = 0.0;  // realized successes / accepted requests
  bool consistent = false;       // within 3 standard errors
};

/// Executes every fixed plan `trials` times: each link entangles with its
/// probability and each swap succeeds with its node's probability; any
/// failure voids the request.
McReport mc_verify(const Instance& inst, const Allocation& alloc, int trials, std::uint64_t seed);

}  // namespace qsched
