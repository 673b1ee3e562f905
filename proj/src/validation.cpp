#include "qsched/validation.hpp"

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <random>
#include <set>

#include "qsched/baselines.hpp"
#include "qsched/dp.hpp"
#include "qsched/flto.hpp"
#include "qsched/fnpr.hpp"
#include "qsched/generators.hpp"
#include "qsched/harness.hpp"
#include "qsched/oracle.hpp"

namespace qsched {

namespace {

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

Topology line_topology(int nodes, int slots) {
  Topology topo;
  for (int v = 0; v < nodes; ++v) topo.nodes.push_back(Node{v, 0.0, 0.0, 1.0});
  for (int v = 0; v + 1 < nodes; ++v) topo.edges.push_back(Edge{v, v + 1, 10.0, 0.98, 1.0});
  topo.capacity = CapacityGrid(slots, nodes, 2);
  return topo;
}

// Mostly positive capacities with the occasional empty cell.
int sparse_capacity(std::mt19937_64& rng, int max) {
  if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < 0.08) return 0;
  return std::uniform_int_distribution<int>(1, max)(rng);
}

ScenarioConfig tiny(std::uint64_t seed, int nodes, int requests, int slots) {
  ScenarioConfig c = ScenarioConfig::desk();
  c.seed = seed;
  c.num_nodes = nodes;
  c.num_requests = requests;
  c.num_slots = slots;
  c.mem_min = 1;
  c.mem_max = 3;
  c.k_paths = 2;
  return c;
}

// Cycles through small shapes: 4..6 nodes, 1..3 requests, 3..5 slots.
ScenarioConfig tiny_case(int k) {
  return tiny(1000 + k, 4 + k % 3, 1 + (k / 3) % 3, 3 + (k / 9) % 3);
}

CheckResult formula_anchors() {
  CheckResult r;
  const double s = swap_fidelity(0.975, 0.975);
  const double closed = 0.975 * 0.975 + 0.025 * 0.025 / 3.0;
  bool ok = std::abs(s - 0.951) <= 5e-4 && std::abs(s - closed) <= 1e-12;
  r.details.push_back(fmt("swap_fidelity(0.975, 0.975) = %.12f", s));

  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.25, 1.0);
  int exact = 0;
  for (int k = 0; k < 100; ++k) exact += swap_fidelity(0.25, u(rng)) == 0.25;
  ok = ok && exact == 100;
  r.details.push_back(fmt("swap_fidelity(0.25, x) == 0.25 for %d/100 x", exact));

  const double p = link_success_prob(0.045, 30.0, 8);
  ok = ok && std::abs(p - 0.9093) <= 1e-4;
  r.details.push_back(fmt("link_success_prob(0.045, 30, 8) = %.6f", p));
  r.pass = ok;
  return r;
}

CheckResult bijection() {
  CheckResult r;
  std::mt19937_64 rng(77);
  long long trees = 0;
  int bad = 0;
  for (int nodes = 2; nodes <= 5; ++nodes) {
    std::vector<NodeId> path(nodes);
    for (int v = 0; v < nodes; ++v) path[v] = v;
    for (int slots = 2; slots <= 6; ++slots) {
      for (int pattern = 0; pattern < 50; ++pattern) {
        CapacityGrid cap(slots, nodes);
        for (int& c : cap.raw()) c = sparse_capacity(rng, 2);
        std::set<Numerology> seen;
        // pattern 0 runs unfiltered
        for (const auto& e : enumerate_numerologies(nodes - 1, slots, path, pattern ? &cap : nullptr)) {
          ++trees;
          bool ok = tree_to_numerology(e.tree) == e.numerology && numerology_to_tree(e.numerology) == e.tree &&
                    seen.insert(e.numerology).second && (!pattern || fits(e.numerology, path, cap));
          for (const auto& cell : occupancy(e.numerology)) ok = ok && (cell.units == 1 || cell.units == 2);
          bad += !ok;
        }
      }
    }
  }
  r.pass = bad == 0 && trees > 0;
  r.details.push_back(fmt("%lld enumerated trees, %d round-trip or theta violations", trees, bad));
  return r;
}

CheckResult dp_oracle() {
  CheckResult r;
  std::mt19937_64 rng(4242);
  const FidelityModel model;
  const int cases = 1200;
  int agree = 0, infeasible = 0;
  for (int k = 0; k < cases; ++k) {
    const int nodes = std::uniform_int_distribution<int>(2, 5)(rng);
    const int slots = std::uniform_int_distribution<int>(2, 6)(rng);
    Topology topo = line_topology(nodes, slots);
    for (auto& e : topo.edges) e.init_fidelity = std::uniform_real_distribution<double>(0.7, 0.99)(rng);
    for (int& c : topo.capacity.raw()) c = sparse_capacity(rng, 3);
    WeightGrid w(slots, nodes);
    for (double& x : w.raw()) x = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const double threshold = k % 2 ? 0.0 : 0.6;
    std::vector<NodeId> nodes_list(nodes);
    for (int v = 0; v < nodes; ++v) nodes_list[v] = v;
    const Path p = make_path(topo, nodes_list);

    const auto dmax = max_fidelity_numerology(p, slots, topo.capacity, model, threshold);
    const auto bmax = brute_force_max_fidelity(p, slots, topo.capacity, model, threshold);
    const auto dmin = min_weight_numerology(p, slots, topo.capacity, w);
    const auto bmin = brute_force_min_weight(p, slots, topo.capacity, w);
    bool ok = dmax.has_value() == bmax.has_value() && dmin.has_value() == bmin.has_value();
    if (ok && dmax) ok = std::abs(dmax->value - *bmax) <= 1e-9;
    if (ok && dmin) ok = std::abs(dmin->value - *bmin) <= 1e-9;
    infeasible += !bmin;
    agree += ok;
  }
  r.pass = agree == cases;
  r.details.push_back(fmt("%d/%d cases agree (%d with no feasible numerology)", agree, cases, infeasible));
  return r;
}

CheckResult exact_optimum() {
  CheckResult r;
  const int cases = 120;
  int ok_cases = 0, ratio_n = 0;
  double ratio_fnpr = 0.0, ratio_flto = 0.0;
  for (int k = 0; k < cases; ++k) {
    const ScenarioConfig c = tiny_case(k);
    const Instance inst = build_instance(c);
    const double opt = brute_force_ilp(inst).optimum;
    Rng rng = make_stream(c.seed, "fnpr");
    const Allocation a = fnpr_solve(inst, FnprMode::Tetris, 0.1, rng);
    const Allocation b = flto_solve(inst);
    const bool ok = check_feasible(inst, a, true).ok && check_feasible(inst, b, true).ok &&
                    a.expected_fidelity_sum() <= opt + 1e-9 && b.expected_fidelity_sum() <= opt + 1e-9;
    ok_cases += ok;
    if (opt > 0) {
      ratio_fnpr += a.expected_fidelity_sum() / opt;
      ratio_flto += b.expected_fidelity_sum() / opt;
      ++ratio_n;
    }
  }
  r.details.push_back(fmt("%d/%d tiny instances feasible and <= ILP optimum", ok_cases, cases));
  r.details.push_back(fmt("mean attainment ratio over %d instances: fnpr %.4f, flto %.4f", ratio_n,
                          ratio_fnpr / std::max(1, ratio_n), ratio_flto / std::max(1, ratio_n)));

  IlpOptions count;
  count.objective = IlpObjective::Count;
  count.enforce_threshold = false;
  count.limits = EnumerationLimits{8, 8, 2'000'000};
  int graphs = 0, mis_ok = 0;
  for (int n = 1; n <= 5; ++n) {
    std::vector<std::pair<int, int>> all;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) all.emplace_back(a, b);
    for (unsigned mask = 0; mask < (1u << all.size()); ++mask) {
      SimpleGraph g{n, {}};
      for (std::size_t e = 0; e < all.size(); ++e)
        if (mask >> e & 1u) g.edges.push_back(all[e]);
      ++graphs;
      mis_ok += std::lround(brute_force_ilp(mis_reduction(g), count).optimum) == max_independent_set_size(g);
    }
  }
  r.details.push_back(fmt("MIS reduction: %d/%d graphs on <= 5 vertices match", mis_ok, graphs));
  r.pass = ok_cases == cases && mis_ok == graphs;
  return r;
}

CheckResult rounding_suite() {
  CheckResult r;
  ScenarioConfig c = ScenarioConfig::desk();
  const double bound = 1.0 + 4.0 * std::log(double(c.num_nodes) * c.num_slots);
  int single = 0, within = 0;
  double worst = 0.0;
  const int runs = 100;
  for (int k = 0; k < runs; ++k) {
    c.seed = 500 + k;
    const Instance inst = build_instance(c);
    Rng rng = make_stream(c.seed, "fnpr");
    const FnprResult res = fnpr_run(inst, FnprMode::Tetris, FractionalOptions{c.epsilon, std::nullopt}, rng);
    // every rounded pick must be one of its own request's columns
    bool one = res.rounded.chosen.size() == inst.requests.size();
    for (std::size_t q = 0; one && q < res.rounded.chosen.size(); ++q) {
      if (!res.rounded.chosen[q]) continue;
      bool found = false;
      for (const auto& col : res.fractional.columns)
        found = found || (col.request == int(q) && col.path_index == res.rounded.chosen[q]->path_index &&
                          col.numerology == res.rounded.chosen[q]->numerology);
      one = found;
    }
    single += one;
    const double over = max_overload(inst, res.rounded);
    worst = std::max(worst, over);
    within += over <= bound;
  }
  r.details.push_back(fmt("at most one selection per request in %d/%d runs", single, runs));
  r.details.push_back(fmt("overload <= %.3f in %d/%d runs (worst %.3f)", bound, within, runs, worst));
  r.pass = single == runs && within >= 99;
  return r;
}

CheckResult fractional_quality() {
  CheckResult r;
  IlpOptions free;
  free.objective = IlpObjective::SuccessProb;
  free.enforce_threshold = false;
  const int cases = 60;
  int quality = 0, packing = 0;
  double worst = 1e9;
  for (int k = 0; k < cases; ++k) {
    const Instance inst = build_instance(tiny_case(k));
    const double opt = brute_force_ilp(inst, free).optimum;
    const FractionalSolution frac = solve_fractional(inst, FractionalOptions{0.1, std::nullopt});
    quality += frac.objective >= 0.8 * opt - 1e-12;
    if (opt > 0) worst = std::min(worst, frac.objective / opt);
    std::vector<double> mass(inst.requests.size(), 0.0);
    WeightGrid load(inst.num_slots(), inst.topology.num_nodes(), 0.0);
    for (const auto& col : frac.columns) {
      mass[col.request] += col.value;
      const auto& nodes = inst.requests[col.request].paths[col.path_index].nodes;
      for (const auto& cell : occupancy(col.numerology)) load(cell.slot, nodes[cell.position]) += cell.units * col.value;
    }
    bool ok = true;
    for (double m : mass) ok = ok && m <= 1.0 + 1e-9;
    for (int t = 1; t <= inst.num_slots(); ++t)
      for (int v = 0; v < inst.topology.num_nodes(); ++v) ok = ok && load(t, v) <= inst.capacity()(t, v) + 1e-9;
    packing += ok;
  }
  r.details.push_back(fmt("objective >= 0.8 * ILP in %d/%d instances (worst ratio %.4f)", quality, cases, worst));
  r.details.push_back(fmt("packing rows hold in %d/%d instances", packing, cases));
  r.pass = quality == cases && packing == cases;
  return r;
}

CheckResult mc_consistency() {
  CheckResult r;
  int consistent = 0;
  for (int k = 0; k < 10; ++k) {
    ScenarioConfig c = ScenarioConfig::desk();
    c.seed = 900 + k;
    const Instance inst = build_instance(c);
    Allocation a;
    if (k % 2) {
      a = flto_solve(inst);
    } else {
      Rng rng = make_stream(c.seed, "fnpr");
      a = fnpr_solve(inst, FnprMode::Tetris, c.epsilon, rng);
    }
    const McReport rep = mc_verify(inst, a, 10000, derive_seed(c.seed, "mc-verify"));
    consistent += rep.consistent;
    r.details.push_back(fmt("%s seed %llu: expected %.4f, empirical %.4f +- %.4f", k % 2 ? "flto" : "fnpr",
                            static_cast<unsigned long long>(c.seed), rep.expected, rep.empirical_mean, rep.std_error));
  }
  r.pass = consistent == 10;
  return r;
}

// Per-value means over the repetitions. A trend holds when at most one
// consecutive step goes the wrong way and the endpoints are strictly ordered.
struct Trend {
  std::vector<double> means;
  std::vector<double> accepted;
  int inversions = 0;
  bool endpoints = false;
  bool holds() const { return inversions <= 1 && endpoints; }
};

Trend trend_of(const std::vector<MetricsRow>& rows, const std::string& algo, const std::vector<std::string>& values,
               int direction) {
  struct Sums {
    double fidelity = 0.0, accepted = 0.0;
    int n = 0;
  };
  std::map<std::string, Sums> acc;
  for (const auto& row : rows)
    if (row.algorithm == algo) {
      acc[row.param_value].fidelity += row.expected_fidelity_sum;
      acc[row.param_value].accepted += row.accepted_requests;
      ++acc[row.param_value].n;
    }
  Trend t;
  for (const auto& v : values) {
    t.means.push_back(acc[v].fidelity / acc[v].n);
    t.accepted.push_back(acc[v].accepted / acc[v].n);
  }
  for (std::size_t k = 0; k + 1 < t.means.size(); ++k) t.inversions += direction * (t.means[k + 1] - t.means[k]) < 0;
  t.endpoints = direction * (t.means.back() - t.means.front()) > 0;
  return t;
}

bool sweep_trend(const std::string& param, const std::vector<std::string>& values, int direction,
                 std::vector<std::string>& details) {
  SweepSpec spec;
  spec.base = ScenarioConfig::desk();
  spec.param = param;
  spec.values = values;
  spec.repetitions = 20;
  const auto rows = sweep(spec);
  bool ok = true;
  for (const std::string algo : {"fnpr", "flto"}) {
    const Trend t = trend_of(rows, algo, values, direction);
    std::string line = param + " " + algo + ":";
    for (std::size_t k = 0; k < values.size(); ++k) line += fmt(" %s->%.4f", values[k].c_str(), t.means[k]);
    line += fmt("  inversions %d, endpoints %s", t.inversions, t.endpoints ? "ordered" : "NOT ordered");
    details.push_back(line);
    line = "  accepted:";
    for (std::size_t k = 0; k < values.size(); ++k) line += fmt(" %s->%.2f", values[k].c_str(), t.accepted[k]);
    details.push_back(line);
    ok = ok && t.holds();
  }
  return ok;
}

CheckResult trends() {
  CheckResult r;
  bool ok = true;
  ok &= sweep_trend("slot_ms", {"1", "2", "3", "4"}, -1, r.details);
  ok &= sweep_trend("num_slots", {"3", "5", "7", "9", "11", "13"}, +1, r.details);
  ok &= sweep_trend("mem_avg", {"6", "8", "10", "12", "14"}, +1, r.details);

  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 1; s <= 20; ++s) seeds.push_back(s);
  const std::vector<double> taus{0.5, 1, 2, 3, 4};
  const std::vector<int> slots{4, 5, 6, 7, 8};
  const auto cells = fig3_ratio_experiment(ScenarioConfig::desk(), taus, slots, seeds, 4);
  std::map<std::pair<double, int>, double> ratio;
  for (const auto& c : cells) ratio[{c.tau_ms, c.num_slots}] = c.mean_ratio;
  bool grid = true;
  for (std::size_t a = 0; a < taus.size(); ++a)
    for (std::size_t b = 0; b < slots.size(); ++b) {
      if (a + 1 < taus.size()) grid = grid && ratio[{taus[a], slots[b]}] <= ratio[{taus[a + 1], slots[b]}];
      if (b + 1 < slots.size()) grid = grid && ratio[{taus[a], slots[b]}] <= ratio[{taus[a], slots[b + 1]}];
    }
  const double lo = ratio[{taus.front(), slots.front()}], hi = ratio[{taus.back(), slots.back()}];
  const bool fig3 = lo < hi;
  r.details.push_back(fmt("ratio grid: %.5f at (0.5 ms, 4) .. %.5f at (4 ms, 8), monotone %s, %d paths", lo, hi,
                          grid ? "yes" : "no", cells.empty() ? 0 : cells.front().paths));
  ok = ok && fig3;

  const auto het = kappa_experiment({0.98, 0.98, 0.95, 0.90}, {2.0});
  const auto hom = kappa_experiment({0.98, 0.98, 0.98, 0.98}, {2.0});
  const bool crossover = het[0].skewed > het[0].complete && hom[0].complete > hom[0].skewed;
  r.details.push_back(fmt("kappa 2: heterogeneous skewed %.6f vs complete %.6f; homogeneous skewed %.6f vs complete %.6f",
                          het[0].skewed, het[0].complete, hom[0].skewed, hom[0].complete));
  r.pass = ok && crossover;
  return r;
}

}  // namespace

const std::vector<CheckSpec>& acceptance_checks() {
  static const std::vector<CheckSpec> checks{
      {"formula-anchors", 1.0, formula_anchors},
      {"bijection", 30.0, bijection},
      {"dp-oracle", 120.0, dp_oracle},
      {"exact-optimum", 300.0, exact_optimum},
      {"rounding-lemmas", 600.0, rounding_suite},
      {"fractional-quality", 120.0, fractional_quality},
      {"mc-consistency", 600.0, mc_consistency},
      {"trends", 1200.0, trends},
  };
  return checks;
}

CheckResult run_check(const CheckSpec& spec) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult r;
  try {
    r = spec.run();
  } catch (const std::exception& e) {
    r.pass = false;
    r.details.push_back(std::string("exception: ") + e.what());
  }
  r.name = spec.name;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (r.seconds > spec.budget_seconds) {
    r.pass = false;
    r.details.push_back(fmt("over the %.0f s budget", spec.budget_seconds));
  }
  return r;
}

void print_check(std::ostream& out, const CheckResult& result) {
  out << (result.pass ? "PASS " : "FAIL ") << result.name << fmt(" (%.1f s)", result.seconds) << '\n';
  for (const auto& d : result.details) out << "    " << d << '\n';
}

}  // namespace qsched
