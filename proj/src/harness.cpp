#include "qsched/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "qsched/flto.hpp"
#include "qsched/fnpr.hpp"
#include "qsched/generators.hpp"

namespace qsched {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / xs.size();
}

double se_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / (xs.size() - 1) / xs.size());
}

}  // namespace

const std::vector<std::string>& known_algorithms() {
  static const std::vector<std::string> names{"fnpr", "flto", "nesting", "linear", "asap", "ub"};
  return names;
}

AlgorithmRun run_algorithm(const Instance& inst, const ScenarioConfig& config, const std::string& algorithm,
                           SwapFailure asap_policy) {
  AlgorithmRun run;
  run.row.seed = config.seed;
  run.row.algorithm = algorithm;
  const auto start = std::chrono::steady_clock::now();
  if (algorithm == "fnpr") {
    Rng rng = make_stream(config.seed, "fnpr");
    run.allocation = fnpr_solve(inst, config.mode, config.epsilon, rng);
    run.row.pre_repair_overload = run.allocation->pre_repair_overload;
  } else if (algorithm == "flto") {
    run.allocation = flto_solve(inst);
  } else if (algorithm == "nesting") {
    run.allocation = nesting_plan(inst);
  } else if (algorithm == "linear") {
    run.allocation = linear_plan(inst);
  } else if (algorithm == "asap") {
    const McOutcome mc = asap_monte_carlo(inst, config.mc_trials, derive_seed(config.seed, "asap"), asap_policy);
    run.row.expected_fidelity_sum = mc.mean_fidelity_sum;
    run.row.accepted_requests = mc.mean_accepted;
  } else if (algorithm == "ub") {
    const FractionalSolution frac = solve_fractional(inst, FractionalOptions{config.epsilon, std::nullopt});
    run.row.expected_fidelity_sum = frac.objective;
    double mass = 0.0;
    for (const auto& c : frac.columns) mass += c.value;
    run.row.accepted_requests = mass;
  } else {
    throw std::invalid_argument("unknown algorithm '" + algorithm + "'");
  }
  run.row.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  if (run.allocation) {
    run.row.expected_fidelity_sum = run.allocation->expected_fidelity_sum();
    run.row.accepted_requests = run.allocation->accepted();
  }
  return run;
}

std::vector<MetricsRow> run_scenario(const ScenarioConfig& config, const std::vector<std::string>& algorithms,
                                     const std::string& scenario_id, const std::string& param_name,
                                     const std::string& param_value) {
  for (const auto& a : algorithms) {
    const auto& known = known_algorithms();
    if (std::find(known.begin(), known.end(), a) == known.end()) {
      throw std::invalid_argument("unknown algorithm '" + a + "'");
    }
  }
  std::vector<MetricsRow> rows;
  if (algorithms.empty()) return rows;
  const Instance inst = build_instance(config);
  for (const auto& a : algorithms) {
    MetricsRow row = run_algorithm(inst, config, a).row;
    row.scenario_id = scenario_id;
    row.param_name = param_name;
    row.param_value = param_value;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::uint64_t repetition_seed(std::uint64_t master, int rep) {
  return derive_seed(master, "repetition", static_cast<std::uint64_t>(rep));
}

std::vector<MetricsRow> sweep(const SweepSpec& spec) {
  if (!is_config_key(spec.param) && spec.param != "mem_avg") {
    throw std::invalid_argument("sweep: unknown parameter '" + spec.param + "'");
  }
  std::vector<MetricsRow> rows;
  for (const auto& value : spec.values) {
    for (int rep = 0; rep < spec.repetitions; ++rep) {
      ScenarioConfig c = spec.base;
      set_config_value(c, spec.param, value);
      c.seed = repetition_seed(spec.base.seed, rep);
      const std::string id = spec.param + "=" + value + "/rep" + std::to_string(rep);
      for (auto& row : run_scenario(c, spec.algorithms, id, spec.param, value)) rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<SummaryRow> summarize(const std::vector<MetricsRow>& rows) {
  std::vector<std::tuple<std::string, std::string, std::string>> order;
  std::map<std::tuple<std::string, std::string, std::string>, std::vector<const MetricsRow*>> groups;
  for (const auto& r : rows) {
    auto key = std::make_tuple(r.param_name, r.param_value, r.algorithm);
    auto [it, fresh] = groups.try_emplace(key);
    if (fresh) order.push_back(key);
    it->second.push_back(&r);
  }
  std::vector<SummaryRow> out;
  for (const auto& key : order) {
    const auto& g = groups[key];
    std::vector<double> efs, acc, ms;
    for (const auto* r : g) {
      efs.push_back(r->expected_fidelity_sum);
      acc.push_back(r->accepted_requests);
      ms.push_back(r->runtime_ms);
    }
    out.push_back(SummaryRow{std::get<0>(key), std::get<1>(key), std::get<2>(key), static_cast<int>(g.size()),
                             mean_of(efs), se_of(efs), mean_of(acc), se_of(acc), mean_of(ms)});
  }
  return out;
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
  out << kMetricsHeader << '\n';
  for (const auto& r : rows) {
    out << r.scenario_id << ',' << r.seed << ',' << r.algorithm << ',' << r.param_name << ',' << r.param_value
        << ',' << num(r.expected_fidelity_sum) << ',' << num(r.accepted_requests) << ','
        << (r.pre_repair_overload ? num(*r.pre_repair_overload) : "") << ',' << num(r.runtime_ms) << '\n';
  }
}

std::vector<MetricsRow> read_metrics_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kMetricsHeader) throw std::invalid_argument("metrics csv: bad header");
  std::vector<MetricsRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 9) throw std::invalid_argument("metrics csv: expected 9 fields");
    MetricsRow r;
    r.scenario_id = f[0];
    r.seed = std::stoull(f[1]);
    r.algorithm = f[2];
    r.param_name = f[3];
    r.param_value = f[4];
    r.expected_fidelity_sum = std::stod(f[5]);
    r.accepted_requests = std::stod(f[6]);
    if (!f[7].empty()) r.pre_repair_overload = std::stod(f[7]);
    r.runtime_ms = std::stod(f[8]);
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "param_name,param_value,algorithm,runs,mean_expected_fidelity_sum,se_expected_fidelity_sum,"
         "mean_accepted_requests,se_accepted_requests,mean_runtime_ms\n";
  for (const auto& r : rows) {
    out << r.param_name << ',' << r.param_value << ',' << r.algorithm << ',' << r.runs << ','
        << num(r.mean_expected_fidelity_sum) << ',' << num(r.se_expected_fidelity_sum) << ','
        << num(r.mean_accepted_requests) << ',' << num(r.se_accepted_requests) << ',' << num(r.mean_runtime_ms)
        << '\n';
  }
}

std::vector<RatioCell> fig3_ratio_experiment(const ScenarioConfig& base, const std::vector<double>& taus,
                                             const std::vector<int>& slots,
                                             const std::vector<std::uint64_t>& seeds, int max_hops) {
  if (taus.empty() || slots.empty()) return {};
  const int min_slots = *std::min_element(slots.begin(), slots.end());
  const int max_slots = *std::max_element(slots.begin(), slots.end());
  EnumerationLimits limits;
  limits.max_hops = max_hops;
  limits.max_slots = std::max(limits.max_slots, max_slots);

  struct Sample {
    Path path;
    int capacity_index;
  };
  std::vector<Topology> topologies;
  std::vector<Sample> samples;
  for (std::uint64_t seed : seeds) {
    ScenarioConfig c = base;
    c.seed = seed;
    c.num_slots = max_slots;
    Instance inst = build_instance(c);
    for (const auto& r : inst.requests)
      for (const auto& p : r.paths)
        if (p.hops() <= max_hops && min_root_slot(p.hops()) <= min_slots) {
          samples.push_back(Sample{p, static_cast<int>(topologies.size())});
        }
    topologies.push_back(std::move(inst.topology));
  }

  std::vector<RatioCell> cells;
  for (double tau : taus) {
    ScenarioConfig c = base;
    c.slot_ms = tau;
    const FidelityModel model = c.model();
    for (int num_slots : slots) {
      RatioCell cell{tau, num_slots, 0, 1.0};
      double total = 0.0;
      for (const auto& s : samples) {
        double fmax = 0.0;
        double fmin = 2.0;
        for (const auto& e : enumerate_numerologies(s.path.hops(), num_slots, s.path.nodes,
                                                    &topologies[s.capacity_index].capacity, limits)) {
          const auto f = try_evaluate_fidelity(e.tree, s.path.link_fidelity, model);
          if (!f) continue;
          fmax = std::max(fmax, *f);
          fmin = std::min(fmin, *f);
        }
        if (fmax <= 0.0) continue;
        total += fmax / fmin;
        ++cell.paths;
      }
      if (cell.paths > 0) cell.mean_ratio = total / cell.paths;
      cells.push_back(cell);
    }
  }
  return cells;
}

void write_ratio_csv(std::ostream& out, const std::vector<RatioCell>& cells) {
  out << "tau_ms,num_slots,paths,mean_ratio\n";
  for (const auto& c : cells) out << num(c.tau_ms) << ',' << c.num_slots << ',' << c.paths << ',' << num(c.mean_ratio) << '\n';
}

StrategyTree skewed_tree_4() {
  // (0,1),(1,2) at slot 2; (2,3) just in time at 3; (3,4) at 4
  const auto l01 = StrategyTree::leaf(0, 2);
  const auto l12 = StrategyTree::leaf(1, 2);
  const auto l23 = StrategyTree::leaf(2, 3);
  const auto l34 = StrategyTree::leaf(3, 4);
  const auto p02 = StrategyTree::join(l01, l12, 3);
  const auto p03 = StrategyTree::join(p02, l23, 4);
  return StrategyTree::join(p03, l34, 5);
}

StrategyTree complete_tree_4() {
  const auto p02 = StrategyTree::join(StrategyTree::leaf(0, 2), StrategyTree::leaf(1, 2), 3);
  const auto p24 = StrategyTree::join(StrategyTree::leaf(2, 2), StrategyTree::leaf(3, 2), 3);
  return StrategyTree::join(p02, p24, 4);
}

std::vector<KappaRow> kappa_experiment(const std::vector<double>& link_fidelity, const std::vector<double>& kappas,
                                       const FidelityModel& model) {
  if (link_fidelity.size() != 4) throw std::invalid_argument("kappa_experiment: needs 4 link fidelities");
  const StrategyTree skewed = skewed_tree_4();
  const StrategyTree complete = complete_tree_4();
  std::vector<KappaRow> rows;
  for (double k : kappas) {
    FidelityModel m = model;
    m.kappa = k;
    m.validate();
    rows.push_back(KappaRow{k, try_evaluate_fidelity(skewed, link_fidelity, m).value_or(m.A),
                            try_evaluate_fidelity(complete, link_fidelity, m).value_or(m.A)});
  }
  return rows;
}

void write_kappa_csv(std::ostream& out, const std::vector<KappaRow>& rows) {
  out << "kappa,skewed,complete\n";
  for (const auto& r : rows) out << num(r.kappa) << ',' << num(r.skewed) << ',' << num(r.complete) << '\n';
}

McReport mc_verify(const Instance& inst, const Allocation& alloc, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("mc_verify: trials must be >= 1");
  McReport rep;
  rep.trials = trials;
  rep.expected = alloc.expected_fidelity_sum();
  Rng rng = make_stream(seed, "mc-verify");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double sum = 0.0;
  double sum_sq = 0.0;
  long long successes = 0;
  int accepted = alloc.accepted();
  for (int k = 0; k < trials; ++k) {
    double total = 0.0;
    for (std::size_t r = 0; r < alloc.chosen.size(); ++r) {
      if (!alloc.chosen[r]) continue;
      const Assignment& a = *alloc.chosen[r];
      const Path& p = inst.requests[r].paths[a.path_index];
      bool ok = true;
      for (const TreeNode& n : a.tree.nodes()) {
        const double prob = n.is_leaf() ? p.link_prob[n.i] : p.swap_prob[n.split - 1];
        if (!(unit(rng) < prob)) ok = false;  // keep drawing so streams stay aligned
      }
      if (ok) {
        total += a.fidelity;
        ++successes;
      }
    }
    sum += total;
    sum_sq += total * total;
  }
  rep.empirical_mean = sum / trials;
  if (trials > 1) {
    const double var = std::max(0.0, (sum_sq - sum * sum / trials) / (trials - 1));
    rep.std_error = std::sqrt(var / trials);
  }
  rep.acceptance_rate = accepted > 0 ? static_cast<double>(successes) / (static_cast<double>(trials) * accepted) : 0.0;
  rep.consistent = std::abs(rep.empirical_mean - rep.expected) <= 3.0 * rep.std_error + 1e-9;
  return rep;
}

}  // namespace qsched
