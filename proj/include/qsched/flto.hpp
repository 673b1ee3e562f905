#pragma once

#include "qsched/allocation.hpp"
#include "qsched/instance.hpp"
#include "qsched/strategy.hpp"

namespace qsched {

struct FltoOptions {
  /// Score and weight against the original capacities instead of the
  /// residual ones.
  bool rei_on_original_capacity = false;
};

/// Expected fidelity per unit of capacity-normalized occupancy:
/// Pr(p) F(m) / sum over cells of theta(t, v) / capacity(t, v).
double rei(double path_prob, double fidelity, const Numerology& m, std::span<const NodeId> path_nodes,
           const CapacityGrid& capacity);

/// Greedy: each round scores the max-fidelity and min-cost strategy of every
/// path of every open request and accepts the best one. Ties prefer higher
/// expected fidelity, then the max-fidelity candidate, then smaller request
/// id and path index.
Allocation flto_solve(const Instance& inst, const FltoOptions& options = {});

}  // namespace qsched
