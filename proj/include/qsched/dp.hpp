#pragma once

#include <optional>

#include "qsched/fidelity.hpp"
#include "qsched/grid.hpp"
#include "qsched/instance.hpp"
#include "qsched/strategy.hpp"

namespace qsched {

struct DpResult {
  StrategyTree tree;
  double value = 0.0;  // fidelity or weighted cost, depending on the program
};

/// Highest-fidelity strategy tree for `path` whose memory footprint fits
/// `capacity`, or nullopt when none exists or the best is below `threshold`.
///
/// The program runs over states (slot t, span (i, j), sigma_i, sigma_j) where
/// sigma demands 1 or 2 free units at an endpoint. A link span is created
/// fresh when capacity allows at t and t - 1; otherwise the pair either idles
/// from t - 1 or is swapped at some interior k, with one of the two children
/// reserving both units at k. Ties prefer the later root slot, then idling,
/// then the smaller split.
std::optional<DpResult> max_fidelity_numerology(const Path& path, int num_slots,
                                                const CapacityGrid& capacity,
                                                const FidelityModel& model, double threshold);

/// Cheapest strategy tree under per-(slot, node) weights, where the cost of
/// a tree is resource_cost of its numerology. Same recursion with (min, +);
/// no fidelity filtering. Ties prefer the earlier root slot.
std::optional<DpResult> min_weight_numerology(const Path& path, int num_slots,
                                              const CapacityGrid& capacity,
                                              const WeightGrid& weights);

}  // namespace qsched
