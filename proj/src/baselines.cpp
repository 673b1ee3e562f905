#include "qsched/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qsched/fnpr.hpp"

namespace qsched {

StrategyTree nesting_tree(int hops) {
  if (hops < 1) throw std::invalid_argument("nesting_tree: need at least one hop");
  std::vector<StrategyTree> segments;
  for (int i = 0; i < hops; ++i) segments.push_back(StrategyTree::leaf(i, 2));
  for (int slot = 2; segments.size() > 1; ++slot) {
    std::vector<StrategyTree> next;
    std::size_t k = 0;
    for (; k + 1 < segments.size(); k += 2) next.push_back(StrategyTree::join(segments[k], segments[k + 1], slot + 1));
    if (k < segments.size()) next.push_back(segments[k]);
    segments = std::move(next);
  }
  return segments.front();
}

StrategyTree linear_tree(int hops) {
  if (hops < 1) throw std::invalid_argument("linear_tree: need at least one hop");
  StrategyTree acc = StrategyTree::leaf(0, 2);
  for (int i = 1; i < hops; ++i) acc = StrategyTree::join(acc, StrategyTree::leaf(i, 2), 2 + i);
  return acc;
}

namespace {

int best_path(const Request& req) {
  int best = -1;
  for (int p = 0; p < static_cast<int>(req.paths.size()); ++p)
    if (best < 0 || req.paths[p].success_prob > req.paths[best].success_prob) best = p;
  return best;
}

std::vector<int> request_order(const Instance& inst, BaselineOrder order) {
  std::vector<int> idx(inst.requests.size());
  std::iota(idx.begin(), idx.end(), 0);
  if (order == BaselineOrder::DescendingProb) {
    auto prob = [&](int r) {
      const int p = best_path(inst.requests[r]);
      return p < 0 ? 0.0 : inst.requests[r].paths[p].success_prob;
    };
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return prob(a) > prob(b); });
  }
  return idx;
}

template <typename TreeFn>
Allocation plan(const Instance& inst, BaselineOrder order, TreeFn make_tree) {
  Allocation alloc(inst.requests.size());
  SlotGrid<int> load(inst.num_slots(), inst.topology.num_nodes(), 0);
  for (int r : request_order(inst, order)) {
    const int p = best_path(inst.requests[r]);
    if (p < 0) continue;
    const Path& path = inst.requests[r].paths[p];
    const StrategyTree tree = make_tree(path.hops());
    if (tree.root_slot() > inst.num_slots()) continue;
    Assignment a = make_assignment(inst, r, p, tree);
    if (a.fidelity < inst.fidelity_threshold) continue;
    bool ok = true;
    for (const auto& cell : occupancy(a.numerology)) {
      const NodeId v = path.nodes[cell.position];
      if (load(cell.slot, v) + cell.units > inst.capacity()(cell.slot, v)) ok = false;
    }
    if (!ok) continue;
    apply_load(load, a.numerology, path.nodes, +1);
    alloc.chosen[r] = std::move(a);
  }
  return alloc;
}

struct Segment {
  int i;
  int j;
  double fidelity;
};

// One ASAP attempt on a path; returns the end-to-end fidelity, if any.
// `held` lists the pairs existing during the current slot, sorted by span.
std::optional<double> asap_trial(const Path& path, const Instance& inst, SwapFailure policy, Rng& rng) {
  const int hops = path.hops();
  const FidelityModel& model = inst.model;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto decayed = [&](double f) -> std::optional<double> {
    if (!in_inversion_domain(model, f)) return std::nullopt;
    const double g = decay_one_slot(model, f);
    if (!in_inversion_domain(model, g)) return std::nullopt;
    return g;
  };
  std::vector<Segment> held;
  for (int slot = 1; slot < inst.num_slots(); ++slot) {
    std::vector<char> busy(hops, 0);
    for (const auto& s : held) std::fill(busy.begin() + s.i, busy.begin() + s.j, 1);
    std::vector<Segment> next;
    bool failed = false;
    for (std::size_t k = 0; k < held.size();) {
      if (k + 1 < held.size() && held[k].j == held[k + 1].i) {
        const Segment& l = held[k];
        const Segment& r = held[k + 1];
        if (unit(rng) < path.swap_prob[l.j - 1]) {
          const auto fl = decayed(l.fidelity);
          const auto fr = decayed(r.fidelity);
          if (fl && fr) {
            const double f = swap_fidelity(*fl, *fr);
            if (in_inversion_domain(model, f)) next.push_back(Segment{l.i, r.j, f});
          }
        } else {
          failed = true;
        }
        k += 2;
      } else {
        if (const auto f = decayed(held[k].fidelity)) next.push_back(Segment{held[k].i, held[k].j, *f});
        k += 1;
      }
    }
    if (failed && policy == SwapFailure::DropAll) next.clear();
    for (int h = 0; h < hops; ++h) {
      if (!busy[h] && unit(rng) < path.link_prob[h]) next.push_back(Segment{h, h + 1, path.link_fidelity[h]});
    }
    std::sort(next.begin(), next.end(), [](const Segment& a, const Segment& b) { return a.i < b.i; });
    held = std::move(next);
    if (!held.empty() && held.front().i == 0 && held.front().j == hops) return held.front().fidelity;
  }
  return std::nullopt;
}

}  // namespace

Allocation nesting_plan(const Instance& inst, BaselineOrder order) { return plan(inst, order, nesting_tree); }
Allocation linear_plan(const Instance& inst, BaselineOrder order) { return plan(inst, order, linear_tree); }

}  // namespace qsched

namespace qsched {

std::string to_string(SwapFailure policy) {
  return policy == SwapFailure::DestroyBoth ? "destroy-both" : "keep-none-retry-link";
}

SwapFailure parse_swap_failure(const std::string& text) {
  if (text == "destroy-both") return SwapFailure::DestroyBoth;
  if (text == "keep-none-retry-link") return SwapFailure::DropAll;
  throw std::invalid_argument("unknown swap failure policy '" + text + "'");
}

McOutcome asap_monte_carlo(const Instance& inst, int trials, std::uint64_t seed, SwapFailure policy) {
  if (trials < 1) throw std::invalid_argument("asap_monte_carlo: trials must be >= 1");
  const int nr = static_cast<int>(inst.requests.size());
  std::vector<int> admitted_path(nr, -1);
  SlotGrid<int> load(inst.num_slots(), inst.topology.num_nodes(), 0);
  McOutcome out;
  out.trials = trials;
  for (int r = 0; r < nr; ++r) {
    const int p = best_path(inst.requests[r]);
    if (p < 0) continue;
    const auto& nodes = inst.requests[r].paths[p].nodes;
    if (min_root_slot(static_cast<int>(nodes.size()) - 1) > inst.num_slots()) continue;
    auto units = [&](std::size_t k) { return k == 0 || k + 1 == nodes.size() ? 1 : 2; };
    bool ok = true;
    for (int t = 1; t <= inst.num_slots() && ok; ++t)
      for (std::size_t k = 0; k < nodes.size(); ++k)
        if (load(t, nodes[k]) + units(k) > inst.capacity()(t, nodes[k])) ok = false;
    if (!ok) continue;
    for (int t = 1; t <= inst.num_slots(); ++t)
      for (std::size_t k = 0; k < nodes.size(); ++k) load(t, nodes[k]) += units(k);
    admitted_path[r] = p;
    ++out.admitted;
  }

  double sum = 0.0;
  double sum_sq = 0.0;
  long long successes = 0;
  for (int k = 0; k < trials; ++k) {
    Rng rng = make_stream(seed, "asap-trial", static_cast<std::uint64_t>(k));
    double total = 0.0;
    for (int r = 0; r < nr; ++r) {
      if (admitted_path[r] < 0) continue;
      const auto f = asap_trial(inst.requests[r].paths[admitted_path[r]], inst, policy, rng);
      if (f && *f >= inst.fidelity_threshold) {
        total += *f;
        ++successes;
      }
    }
    sum += total;
    sum_sq += total * total;
  }
  out.mean_fidelity_sum = sum / trials;
  out.mean_accepted = static_cast<double>(successes) / trials;
  out.acceptance_rate = nr > 0 ? out.mean_accepted / nr : 0.0;
  if (trials > 1) {
    const double var = std::max(0.0, (sum_sq - sum * sum / trials) / (trials - 1));
    out.std_error = std::sqrt(var / trials);
  }
  return out;
}

double upper_bound(const Instance& inst, double epsilon) {
  return solve_fractional(inst, FractionalOptions{epsilon, std::nullopt}).objective;
}

}  // namespace qsched
