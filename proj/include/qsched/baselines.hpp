#pragma once

#include <cstdint>
#include <string>

#include "qsched/allocation.hpp"
#include "qsched/instance.hpp"
#include "qsched/rng.hpp"
#include "qsched/strategy.hpp"

namespace qsched {

/// Balanced reduction: every leaf is available at slot 2 and each slot swaps
/// disjoint adjacent segments from the left, carrying a leftover.
StrategyTree nesting_tree(int hops);

/// Every leaf at slot 2, then one swap per slot from the source onward.
StrategyTree linear_tree(int hops);

enum class BaselineOrder { Input, DescendingProb };

/// Per request in order, on its highest-Pr path: accept the fixed tree when
/// it fits the residual memory and meets the fidelity threshold.
Allocation nesting_plan(const Instance& inst, BaselineOrder order = BaselineOrder::Input);
Allocation linear_plan(const Instance& inst, BaselineOrder order = BaselineOrder::Input);

/// What happens to held pairs when a swap fails.
enum class SwapFailure {
  DestroyBoth,  // the two consumed pairs are lost; their links re-entangle
  DropAll,      // every pair held on the path is lost
};

std::string to_string(SwapFailure policy);
SwapFailure parse_swap_failure(const std::string& text);

struct McOutcome {
  int trials = 0;
  int admitted = 0;               // requests holding a reservation
  double acceptance_rate = 0.0;   // successes / (trials * |I|)
  double mean_accepted = 0.0;     // successes per trial
  double mean_fidelity_sum = 0.0;
  double std_error = 0.0;         // of the fidelity sum
};

/// Swap-as-soon-as-possible policy, evaluated by simulation. Requests are
/// admitted in input order while a whole-batch reservation (1 unit at the
/// endpoints, 2 at interior nodes) fits. Trial k draws from its own stream
/// derived from `seed`.
McOutcome asap_monte_carlo(const Instance& inst, int trials, std::uint64_t seed,
                           SwapFailure policy = SwapFailure::DestroyBoth);

/// Objective of the relaxed (fidelity-free) program.
double upper_bound(const Instance& inst, double epsilon);

}  // namespace qsched
