#pragma once

#include <utility>
#include <vector>

#include "qsched/instance.hpp"
#include "qsched/rng.hpp"

namespace qsched {

/// Waxman random graph over the configured region. Disconnected components
/// are joined by repeatedly adding the shortest inter-component edge.
Topology waxman_generate(const ScenarioConfig& config, Rng& rng);

/// Mean edge length of a topology in km.
double mean_edge_length(const Topology& topo);

/// Bisection on the Waxman alpha so that the mean edge length, averaged
/// over `samples` seeded topologies, hits `target_km`.
double calibrate_waxman_alpha(ScenarioConfig config, double target_km, int samples);

/// Up to k loopless paths from s to d by ascending length (Yen). Equal
/// lengths are ordered lexicographically by node sequence.
std::vector<Path> k_shortest_paths(const Topology& topo, NodeId s, NodeId d, int k);

/// Recomputes every edge's link probability from the batch and lambda
/// (or the override) and refreshes capacities to `num_slots` slots.
void apply_link_model(Topology& topo, const ScenarioConfig& config);

/// Topology + |I| distinct random SD pairs + pruned k-shortest path sets.
Instance build_instance(const ScenarioConfig& config);
Instance build_instance(const ScenarioConfig& config, Topology topology);

struct SimpleGraph {
  int num_vertices = 0;
  std::vector<std::pair<int, int>> edges;
};

/// Adversarial instance whose accepted-request optimum equals the maximum
/// independent set of `graph`. Throws std::invalid_argument when a path runs
/// out of mergeable interior nodes.
Instance mis_reduction(const SimpleGraph& graph);

/// Size of a maximum independent set, by exhaustive search (<= 20 vertices).
int max_independent_set_size(const SimpleGraph& graph);

}  // namespace qsched
