// qsched: command-line front end for instance generation, solving, sweeps
// and the validation suite.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "qsched/generators.hpp"
#include "qsched/harness.hpp"
#include "qsched/io.hpp"
#include "qsched/validation.hpp"

using namespace qsched;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string algo;
  std::string out = "-";
  std::string summary;
};

void add_common(CLI::App* cmd, Common& c, bool with_algo) {
  cmd->add_option("--config", c.config, "key = value scenario file");
  cmd->add_option("--seed", c.seed, "master seed (overrides the config)");
  if (with_algo) cmd->add_option("--algo", c.algo, "comma-separated algorithm list");
  cmd->add_option("--out", c.out, "output path, - for stdout");
}

ScenarioConfig load(const Common& c) {
  ScenarioConfig cfg = c.config.empty() ? ScenarioConfig{} : load_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  cfg.validate();
  return cfg;
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

// Writes through `fn` to a file, or to stdout for "-".
template <typename Fn>
void emit(const std::string& path, Fn fn) {
  if (path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  fn(f);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement scheduling over time-slotted quantum networks"};
  app.require_subcommand(1);

  Common gen;
  auto* gen_cmd = app.add_subcommand("gen-topology", "generate a topology and its requests");
  add_common(gen_cmd, gen, false);

  Common solve;
  std::string alloc_out;
  std::string asap_policy = "destroy-both";
  auto* solve_cmd = app.add_subcommand("solve", "run algorithms on one scenario");
  add_common(solve_cmd, solve, true);
  solve_cmd->add_option("--allocation", alloc_out, "also write the chosen plans here");
  solve_cmd->add_option("--asap-swap-failure", asap_policy, "destroy-both or keep-none-retry-link");

  Common sw;
  std::string param;
  std::string values;
  int reps = 20;
  auto* sweep_cmd = app.add_subcommand("sweep", "sweep one parameter over repeated seeds");
  add_common(sweep_cmd, sw, true);
  sweep_cmd->add_option("--summary", sw.summary, "per-point summary CSV");
  sweep_cmd->add_option("--param", param, "config key or mem_avg")->required();
  sweep_cmd->add_option("--values", values, "comma-separated values")->required();
  sweep_cmd->add_option("--reps", reps, "repetitions per value")->check(CLI::PositiveNumber);

  Common f3;
  std::string taus = "0.5,1,2,3,4", slot_list = "4,5,6,7,8";
  int seed_count = 20, max_hops = 4;
  auto* fig3_cmd = app.add_subcommand("fig3", "F_max / F_min ratio over (slot length, batch size)");
  add_common(fig3_cmd, f3, false);
  fig3_cmd->add_option("--taus", taus, "slot lengths in ms");
  fig3_cmd->add_option("--slots", slot_list, "batch sizes");
  fig3_cmd->add_option("--seeds", seed_count, "instances drawn from seeds 1..n");
  fig3_cmd->add_option("--max-hops", max_hops);

  Common kap;
  std::string fids = "0.98,0.98,0.95,0.90";
  std::string kappas = "1,1.1,1.2,1.3,1.4,1.5,1.6,1.7,1.8,1.9,2,2.1,2.2,2.3";
  auto* kappa_cmd = app.add_subcommand("kappa", "skewed vs complete 4-hop tree over kappa");
  add_common(kappa_cmd, kap, false);
  kappa_cmd->add_option("--fidelities", fids, "four link fidelities");
  kappa_cmd->add_option("--kappas", kappas);

  Common mis;
  int vertices = 3;
  std::string edges;
  auto* mis_cmd = app.add_subcommand("mis-gen", "instance whose optimum is a maximum independent set");
  add_common(mis_cmd, mis, false);
  mis_cmd->add_option("--vertices", vertices)->check(CLI::Range(1, 20));
  mis_cmd->add_option("--edges", edges, "edges as a-b,c-d");

  Common mc;
  int trials = 10000;
  std::string alloc_in;
  auto* mc_cmd = app.add_subcommand("mc-verify", "simulate fixed plans and compare with their expectation");
  add_common(mc_cmd, mc, true);
  mc_cmd->add_option("--trials", trials)->check(CLI::PositiveNumber);
  mc_cmd->add_option("--allocation", alloc_in, "plans to verify; otherwise solved with --algo");

  std::vector<std::string> checks;
  auto* validate_cmd = app.add_subcommand("validate", "run the acceptance checks");
  validate_cmd->add_option("--check", checks, "only these checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_cmd) {
      const Instance inst = build_instance(load(gen));
      emit(gen.out, [&](std::ostream& o) { write_instance(o, inst); });
    } else if (*solve_cmd) {
      const ScenarioConfig cfg = load(solve);
      const Instance inst = build_instance(cfg);
      const auto algos = solve.algo.empty() ? known_algorithms() : split_csv(solve.algo);
      std::vector<MetricsRow> rows;
      std::ostringstream plans;
      for (const auto& a : algos) {
        AlgorithmRun run = run_algorithm(inst, cfg, a, parse_swap_failure(asap_policy));
        run.row.scenario_id = "solve";
        rows.push_back(run.row);
        if (run.allocation) {
          plans << "# " << a << '\n';
          write_allocation(plans, inst, *run.allocation);
        }
      }
      emit(solve.out, [&](std::ostream& o) { write_metrics_csv(o, rows); });
      if (!alloc_out.empty()) emit(alloc_out, [&](std::ostream& o) { o << plans.str(); });
    } else if (*sweep_cmd) {
      SweepSpec spec;
      spec.base = load(sw);
      spec.param = param;
      spec.values = split_csv(values);
      spec.repetitions = reps;
      if (!sw.algo.empty()) spec.algorithms = split_csv(sw.algo);
      const auto rows = sweep(spec);
      emit(sw.out, [&](std::ostream& o) { write_metrics_csv(o, rows); });
      if (!sw.summary.empty()) emit(sw.summary, [&](std::ostream& o) { write_summary_csv(o, summarize(rows)); });
    } else if (*fig3_cmd) {
      std::vector<double> t;
      for (const auto& x : split_csv(taus)) t.push_back(std::stod(x));
      std::vector<int> s;
      for (const auto& x : split_csv(slot_list)) s.push_back(std::stoi(x));
      std::vector<std::uint64_t> seeds;
      for (int k = 1; k <= seed_count; ++k) seeds.push_back(k);
      const auto cells = fig3_ratio_experiment(load(f3), t, s, seeds, max_hops);
      emit(f3.out, [&](std::ostream& o) { write_ratio_csv(o, cells); });
    } else if (*kappa_cmd) {
      std::vector<double> f, k;
      for (const auto& x : split_csv(fids)) f.push_back(std::stod(x));
      for (const auto& x : split_csv(kappas)) k.push_back(std::stod(x));
      const ScenarioConfig cfg = kap.config.empty() ? ScenarioConfig{} : load(kap);
      const auto rows = kappa_experiment(f, k, cfg.model());
      emit(kap.out, [&](std::ostream& o) { write_kappa_csv(o, rows); });
    } else if (*mis_cmd) {
      SimpleGraph g{vertices, {}};
      for (const auto& e : split_csv(edges)) {
        const auto dash = e.find('-');
        if (dash == std::string::npos) throw std::invalid_argument("edge '" + e + "' is not a-b");
        g.edges.emplace_back(std::stoi(e.substr(0, dash)), std::stoi(e.substr(dash + 1)));
      }
      const Instance inst = mis_reduction(g);
      emit(mis.out, [&](std::ostream& o) {
        o << "# slots " << inst.num_slots() << ", optimum " << max_independent_set_size(g) << '\n';
        write_instance(o, inst);
      });
    } else if (*mc_cmd) {
      const ScenarioConfig cfg = load(mc);
      const Instance inst = build_instance(cfg);
      Allocation alloc;
      if (!alloc_in.empty()) {
        std::ifstream f(alloc_in);
        if (!f) throw std::runtime_error("cannot open '" + alloc_in + "'");
        alloc = read_allocation(f, inst);
      } else {
        const std::string a = mc.algo.empty() ? "flto" : mc.algo;
        const AlgorithmRun run = run_algorithm(inst, cfg, a);
        if (!run.allocation) throw std::invalid_argument("algorithm '" + a + "' has no fixed plan");
        alloc = *run.allocation;
      }
      const McReport r = mc_verify(inst, alloc, trials, derive_seed(cfg.seed, "mc-verify"));
      emit(mc.out, [&](std::ostream& o) {
        o << "trials " << r.trials << "\nexpected " << r.expected << "\nempirical " << r.empirical_mean
          << "\nstd_error " << r.std_error << "\nacceptance_rate " << r.acceptance_rate << "\nconsistent "
          << (r.consistent ? "yes" : "no") << '\n';
      });
      return r.consistent ? 0 : 1;
    } else if (*validate_cmd) {
      int failed = 0;
      for (const auto& spec : acceptance_checks()) {
        if (!checks.empty() && std::find(checks.begin(), checks.end(), spec.name) == checks.end()) continue;
        const CheckResult r = run_check(spec);
        print_check(std::cout, r);
        failed += !r.pass;
      }
      return failed == 0 ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "qsched: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
