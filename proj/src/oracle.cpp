#include "qsched/oracle.hpp"

#include <algorithm>

namespace qsched {

std::optional<double> brute_force_max_fidelity(const Path& path, int num_slots,
                                               const CapacityGrid& capacity,
                                               const FidelityModel& model, double threshold,
                                               const EnumerationLimits& limits) {
  std::optional<double> best;
  for (const auto& e : enumerate_numerologies(path.hops(), num_slots, path.nodes, &capacity, limits)) {
    const auto f = try_evaluate_fidelity(e.tree, path.link_fidelity, model);
    if (f && (!best || *f > *best)) best = f;
  }
  if (best && *best < threshold) return std::nullopt;
  return best;
}

std::optional<double> brute_force_min_weight(const Path& path, int num_slots,
                                             const CapacityGrid& capacity, const WeightGrid& weights,
                                             const EnumerationLimits& limits) {
  std::optional<double> best;
  for (const auto& e : enumerate_numerologies(path.hops(), num_slots, path.nodes, &capacity, limits)) {
    const double c = resource_cost(e.numerology, path.nodes, weights);
    if (!best || c < *best) best = c;
  }
  return best;
}

namespace {

struct Option {
  int path_index;
  const EnumeratedNumerology* choice;
  double gain;
};

}  // namespace

IlpResult brute_force_ilp(const Instance& inst, const IlpOptions& options) {
  const int nr = static_cast<int>(inst.requests.size());
  // enumerated columns live here so Option can point into them
  std::vector<std::vector<std::vector<EnumeratedNumerology>>> pools(nr);
  std::vector<std::vector<Option>> opts(nr);
  std::vector<double> best_gain(nr, 0.0);
  for (int r = 0; r < nr; ++r) {
    const auto& paths = inst.requests[r].paths;
    pools[r].resize(paths.size());
    for (std::size_t p = 0; p < paths.size(); ++p) {
      pools[r][p] = enumerate_numerologies(paths[p].hops(), inst.num_slots(), paths[p].nodes,
                                           &inst.capacity(), options.limits);
    }
    for (std::size_t p = 0; p < paths.size(); ++p) {
      for (const auto& e : pools[r][p]) {
        const double f = try_evaluate_fidelity(e.tree, paths[p].link_fidelity, inst.model).value_or(inst.model.A);
        if (options.enforce_threshold && f < inst.fidelity_threshold) continue;
        double gain = 1.0;
        if (options.objective == IlpObjective::ExpectedFidelity) gain = paths[p].success_prob * f;
        if (options.objective == IlpObjective::SuccessProb) gain = paths[p].success_prob;
        opts[r].push_back(Option{static_cast<int>(p), &e, gain});
        best_gain[r] = std::max(best_gain[r], gain);
      }
    }
    std::stable_sort(opts[r].begin(), opts[r].end(),
                     [](const Option& a, const Option& b) { return a.gain > b.gain; });
  }
  std::vector<double> suffix(nr + 1, 0.0);
  for (int r = nr - 1; r >= 0; --r) suffix[r] = suffix[r + 1] + best_gain[r];

  SlotGrid<int> load(inst.num_slots(), inst.topology.num_nodes(), 0);
  std::vector<const Option*> current(nr, nullptr);
  std::vector<const Option*> best(nr, nullptr);
  double best_value = 0.0;

  auto dfs = [&](auto&& self, int r, double value) -> void {
    if (value + suffix[r] <= best_value) return;
    if (r == nr) {
      if (value > best_value) {
        best_value = value;
        best = current;
      }
      return;
    }
    const auto& nodes = [&](const Option& o) -> const std::vector<NodeId>& {
      return inst.requests[r].paths[o.path_index].nodes;
    };
    for (const Option& o : opts[r]) {
      apply_load(load, o.choice->numerology, nodes(o), +1);
      bool ok = true;
      for (const auto& cell : occupancy(o.choice->numerology)) {
        const NodeId v = nodes(o)[cell.position];
        if (load(cell.slot, v) > inst.capacity()(cell.slot, v)) {
          ok = false;
          break;
        }
      }
      if (ok) {
        current[r] = &o;
        self(self, r + 1, value + o.gain);
        current[r] = nullptr;
      }
      apply_load(load, o.choice->numerology, nodes(o), -1);
    }
    self(self, r + 1, value);
  };
  dfs(dfs, 0, 0.0);

  IlpResult result;
  result.optimum = best_value;
  result.allocation = Allocation(nr);
  for (int r = 0; r < nr; ++r) {
    if (best[r]) result.allocation.chosen[r] = make_assignment(inst, r, best[r]->path_index, best[r]->choice->tree);
  }
  return result;
}

}  // namespace qsched
