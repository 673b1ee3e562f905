#include "qsched/fnpr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <tuple>

#include "qsched/dp.hpp"

namespace qsched {
namespace {

struct OracleCache {
  long long stamp = -1;
  std::optional<DpResult> best;
};

// theta of one assignment at node v during slot t
int units_at(const Numerology& m, const std::vector<NodeId>& nodes, int t, NodeId v) {
  int units = 0;
  for (const auto& p : m.pairs) {
    if (t < p.first_slot || t > p.last_slot) continue;
    if (nodes[p.i] == v) ++units;
    if (nodes[p.j] == v) ++units;
  }
  return units;
}

bool fits_residual(const Instance& inst, const SlotGrid<int>& load, const Numerology& m,
                   const std::vector<NodeId>& nodes) {
  for (const auto& cell : occupancy(m)) {
    const NodeId v = nodes[cell.position];
    if (load(cell.slot, v) + cell.units > inst.capacity()(cell.slot, v)) return false;
  }
  return true;
}

}  // namespace

FractionalSolution solve_fractional(const Instance& inst, const FractionalOptions& options) {
  const double eps = options.epsilon;
  if (!(eps > 0.0 && eps <= 0.5)) throw std::invalid_argument("solve_fractional: epsilon must lie in (0, 0.5]");
  FractionalSolution sol;
  const int nr = static_cast<int>(inst.requests.size());
  if (nr == 0) return sol;
  const int nv = inst.topology.num_nodes();
  const int num_slots = inst.num_slots();
  const CapacityGrid& cap = inst.capacity();

  const double eta = static_cast<double>(nv) * num_slots + nr;
  const double delta = (1.0 + eps) * std::pow((1.0 + eps) * eta, -1.0 / eps);
  const long long max_iterations = options.max_iterations.value_or(
      std::max<long long>(1000, static_cast<long long>(std::ceil(10.0 / (eps * eps) * eta * std::log(eta)))));

  DualWeights w{std::vector<double>(nr, delta), WeightGrid(num_slots, nv, 0.0)};
  double dual = nr * delta;
  for (int t = 1; t <= num_slots; ++t)
    for (int v = 0; v < nv; ++v)
      if (cap(t, v) > 0) {
        w.beta(t, v) = delta / cap(t, v);
        dual += delta;
      }

  // Weights only grow, so a (request, path) ratio never decreases and a stale
  // ratio is a lower bound. Popping the heap until the top is fresh yields the
  // same argmin (and tie order) as a full scan.
  std::vector<std::vector<OracleCache>> cache(nr);
  for (int r = 0; r < nr; ++r) cache[r].resize(inst.requests[r].paths.size());
  std::vector<long long> node_stamp(nv, 0);
  std::vector<long long> alpha_stamp(nr, 0);
  using Entry = std::tuple<double, int, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (int r = 0; r < nr; ++r)
    for (int p = 0; p < static_cast<int>(inst.requests[r].paths.size()); ++p)
      if (inst.requests[r].paths[p].success_prob > 0.0) heap.emplace(0.0, r, p);
  auto is_fresh = [&](int r, int p) {
    const OracleCache& c = cache[r][p];
    if (alpha_stamp[r] > c.stamp) return false;
    const auto& nodes = inst.requests[r].paths[p].nodes;
    return std::none_of(nodes.begin(), nodes.end(), [&](NodeId v) { return node_stamp[v] > c.stamp; });
  };
  std::map<std::tuple<int, int, Numerology>, int> column_index;
  std::vector<double> x;

  long long iter = 0;
  while (dual < 1.0) {
    if (iter >= max_iterations) {
      throw SolverDivergenceError("solve_fractional: iteration cap of " + std::to_string(max_iterations) +
                                  " exceeded");
    }
    int best_r = -1;
    int best_p = -1;
    double best_ratio = 0.0;
    while (!heap.empty()) {
      const auto [ratio, r, p] = heap.top();
      if (is_fresh(r, p)) {
        best_r = r;
        best_p = p;
        best_ratio = ratio;
        break;
      }
      heap.pop();
      const Path& path = inst.requests[r].paths[p];
      OracleCache& c = cache[r][p];
      c.best = min_weight_numerology(path, num_slots, cap, w.beta);
      c.stamp = iter;
      if (c.best) heap.emplace((w.alpha[r] + c.best->value) / path.success_prob, r, p);
    }
    if (best_r < 0) break;  // no request has any column
    heap.pop();

    const Path& path = inst.requests[best_r].paths[best_p];
    const StrategyTree& tree = cache[best_r][best_p].best->tree;
    Numerology m = tree_to_numerology(tree);
    const auto cells = occupancy(m);
    double u = 1.0;
    for (const auto& cell : cells) {
      u = std::min(u, static_cast<double>(cap(cell.slot, path.nodes[cell.position])) / cell.units);
    }

    auto key = std::make_tuple(best_r, best_p, m);
    auto it = column_index.find(key);
    if (it == column_index.end()) {
      it = column_index.emplace(std::move(key), static_cast<int>(sol.columns.size())).first;
      sol.columns.push_back(FractionalColumn{best_r, best_p, tree, std::move(m), 0.0});
      x.push_back(0.0);
    }
    x[it->second] += u;

    dual += w.alpha[best_r] * eps * u;
    w.alpha[best_r] *= 1.0 + eps * u;
    alpha_stamp[best_r] = iter + 1;
    for (const auto& cell : cells) {
      const NodeId v = path.nodes[cell.position];
      const double c = cap(cell.slot, v);
      const double grow = eps * cell.units * u / c;
      dual += w.beta(cell.slot, v) * grow * c;
      w.beta(cell.slot, v) *= 1.0 + grow;
      node_stamp[v] = iter + 1;
    }
    heap.emplace(best_ratio, best_r, best_p);  // now stale
    ++iter;
  }

  const double scale = std::log((1.0 + eps) / delta) / std::log1p(eps);
  for (std::size_t k = 0; k < sol.columns.size(); ++k) {
    auto& col = sol.columns[k];
    col.value = x[k] / scale;
    sol.objective += inst.requests[col.request].paths[col.path_index].success_prob * col.value;
  }
  sol.iterations = iter;
  return sol;
}

Allocation randomized_round(const Instance& inst, const FractionalSolution& frac, Rng& rng) {
  const int nr = static_cast<int>(inst.requests.size());
  std::vector<std::vector<int>> by_request(nr);
  for (std::size_t k = 0; k < frac.columns.size(); ++k) by_request[frac.columns[k].request].push_back(static_cast<int>(k));
  Allocation alloc(nr);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int r = 0; r < nr; ++r) {
    const double draw = unit(rng);
    double cumulative = 0.0;
    for (int k : by_request[r]) {
      cumulative += frac.columns[k].value;
      if (draw < cumulative) {
        alloc.chosen[r] = make_assignment(inst, r, frac.columns[k].path_index, frac.columns[k].tree);
        break;
      }
    }
  }
  return alloc;
}

Allocation repair(const Allocation& tentative, const FractionalSolution& frac, const Instance& inst,
                  FnprMode mode) {
  Allocation alloc = tentative;
  const int nr = static_cast<int>(inst.requests.size());
  const int nv = inst.topology.num_nodes();
  const int num_slots = inst.num_slots();
  const CapacityGrid& cap = inst.capacity();
  auto nodes_of = [&](int r) -> const std::vector<NodeId>& {
    return inst.requests[r].paths[alloc.chosen[r]->path_index].nodes;
  };

  if (mode == FnprMode::Tetris) {
    for (auto& a : alloc.chosen)
      if (a && a->fidelity < inst.fidelity_threshold) a.reset();
  }

  SlotGrid<int> load = load_of(inst, alloc);
  for (;;) {
    int worst_t = -1;
    NodeId worst_v = -1;
    double worst = 1.0;
    for (int t = 1; t <= num_slots; ++t)
      for (int v = 0; v < nv; ++v) {
        if (load(t, v) <= cap(t, v)) continue;
        const double ratio = cap(t, v) > 0 ? static_cast<double>(load(t, v)) / cap(t, v)
                                           : std::numeric_limits<double>::infinity();
        if (ratio > worst) {
          worst = ratio;
          worst_t = t;
          worst_v = v;
        }
      }
    if (worst_t < 0) break;

    std::vector<int> occupants;
    for (int r = 0; r < nr; ++r)
      if (alloc.chosen[r] && units_at(alloc.chosen[r]->numerology, nodes_of(r), worst_t, worst_v) > 0) {
        occupants.push_back(r);
      }
    std::sort(occupants.begin(), occupants.end(), [&](int a, int b) {
      const double ea = alloc.chosen[a]->expected_fidelity();
      const double eb = alloc.chosen[b]->expected_fidelity();
      if (ea != eb) return ea < eb;
      const int ta = total_units(alloc.chosen[a]->numerology);
      const int tb = total_units(alloc.chosen[b]->numerology);
      if (ta != tb) return ta > tb;
      return a < b;
    });
    for (int r : occupants) {
      if (load(worst_t, worst_v) <= cap(worst_t, worst_v)) break;
      apply_load(load, alloc.chosen[r]->numerology, nodes_of(r), -1);
      alloc.chosen[r].reset();
    }
  }

  std::vector<int> order(frac.columns.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return frac.columns[a].value > frac.columns[b].value; });
  for (int k : order) {
    const auto& col = frac.columns[k];
    if (!(col.value > 0.0) || alloc.chosen[col.request]) continue;
    const auto& nodes = inst.requests[col.request].paths[col.path_index].nodes;
    if (!fits_residual(inst, load, col.numerology, nodes)) continue;
    Assignment a = make_assignment(inst, col.request, col.path_index, col.tree);
    if (mode == FnprMode::Tetris && a.fidelity < inst.fidelity_threshold) continue;
    apply_load(load, a.numerology, nodes, +1);
    alloc.chosen[col.request] = std::move(a);
  }
  return alloc;
}

FnprResult fnpr_run(const Instance& inst, FnprMode mode, const FractionalOptions& options, Rng& rng) {
  FnprResult res;
  res.fractional = solve_fractional(inst, options);
  res.rounded = randomized_round(inst, res.fractional, rng);
  res.rounded.pre_repair_overload = max_overload(inst, res.rounded);
  res.allocation = repair(res.rounded, res.fractional, inst, mode);
  res.allocation.pre_repair_overload = res.rounded.pre_repair_overload;
  return res;
}

Allocation fnpr_solve(const Instance& inst, FnprMode mode, double epsilon, Rng& rng) {
  return fnpr_run(inst, mode, FractionalOptions{epsilon, std::nullopt}, rng).allocation;
}

}  // namespace qsched
