#include "qsched/flto.hpp"

#include <tuple>

#include "qsched/dp.hpp"

namespace qsched {

double rei(double path_prob, double fidelity, const Numerology& m, std::span<const NodeId> path_nodes,
           const CapacityGrid& capacity) {
  double used = 0.0;
  for (const auto& cell : occupancy(m)) {
    used += static_cast<double>(cell.units) / capacity(cell.slot, path_nodes[cell.position]);
  }
  return path_prob * fidelity / used;
}

namespace {

struct Candidate {
  int request = -1;
  int path_index = -1;
  int kind = 0;  // 0: max fidelity, 1: min cost
  StrategyTree tree;
  Numerology numerology;
  double fidelity = 0.0;
  double expected = 0.0;
  double score = 0.0;
};

// true when a beats b
bool better(const Candidate& a, const Candidate& b) {
  if (b.request < 0) return true;
  if (a.score != b.score) return a.score > b.score;
  if (a.expected != b.expected) return a.expected > b.expected;
  return std::tie(a.kind, a.request, a.path_index) < std::tie(b.kind, b.request, b.path_index);
}

}  // namespace

Allocation flto_solve(const Instance& inst, const FltoOptions& options) {
  const int nr = static_cast<int>(inst.requests.size());
  const int nv = inst.topology.num_nodes();
  const int num_slots = inst.num_slots();
  Allocation alloc(nr);
  CapacityGrid residual = inst.capacity();
  std::vector<char> open(nr, 1);

  for (;;) {
    const CapacityGrid& scale = options.rei_on_original_capacity ? inst.capacity() : residual;
    WeightGrid weights(num_slots, nv, 0.0);
    for (int t = 1; t <= num_slots; ++t)
      for (int v = 0; v < nv; ++v)
        if (scale(t, v) > 0) weights(t, v) = 1.0 / scale(t, v);

    Candidate best;
    for (int r = 0; r < nr; ++r) {
      if (!open[r]) continue;
      bool any = false;
      const auto& paths = inst.requests[r].paths;
      for (int p = 0; p < static_cast<int>(paths.size()); ++p) {
        const Path& path = paths[p];
        auto consider = [&](const StrategyTree& tree, int kind) {
          const auto f = try_evaluate_fidelity(tree, path.link_fidelity, inst.model);
          if (!f || *f < inst.fidelity_threshold) return;
          any = true;
          Candidate c{r, p, kind, tree, tree_to_numerology(tree), *f, path.success_prob * *f, 0.0};
          c.score = rei(path.success_prob, *f, c.numerology, path.nodes, scale);
          if (better(c, best)) best = std::move(c);
        };
        if (auto m1 = max_fidelity_numerology(path, num_slots, residual, inst.model, inst.fidelity_threshold)) {
          consider(m1->tree, 0);
        }
        if (auto m2 = min_weight_numerology(path, num_slots, residual, weights)) consider(m2->tree, 1);
      }
      if (!any) open[r] = 0;  // capacities only shrink, so it cannot come back
    }
    if (best.request < 0) break;

    const auto& nodes = inst.requests[best.request].paths[best.path_index].nodes;
    for (const auto& cell : occupancy(best.numerology)) residual(cell.slot, nodes[cell.position]) -= cell.units;
    alloc.chosen[best.request] = make_assignment(inst, best.request, best.path_index, best.tree);
    open[best.request] = 0;
  }
  return alloc;
}

}  // namespace qsched
