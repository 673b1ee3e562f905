#include "qsched/instance.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace qsched {

int Topology::find_edge(NodeId u, NodeId v) const {
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const Edge& e = edges[k];
    if ((e.u == u && e.v == v) || (e.u == v && e.v == u)) {
      return static_cast<int>(k);
    }
  }
  return -1;
}

std::vector<std::vector<int>> Topology::adjacency() const {
  std::vector<std::vector<int>> adj(nodes.size());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    adj[edges[k].u].push_back(static_cast<int>(k));
    adj[edges[k].v].push_back(static_cast<int>(k));
  }
  return adj;
}

int Batch::attempts() const {
  // tolerate 2.0 / 0.25 style ratios landing a hair under the integer
  return static_cast<int>(std::floor(tau_ms / entangle_ms + 1e-9));
}

int min_root_slot(int hops) {
  int depth = 0;
  while ((1 << depth) < hops) ++depth;
  return 2 + depth;
}

Path make_path(const Topology& topo, std::vector<NodeId> nodes) {
  Path p;
  p.nodes = std::move(nodes);
  for (std::size_t k = 0; k + 1 < p.nodes.size(); ++k) {
    const int e = topo.find_edge(p.nodes[k], p.nodes[k + 1]);
    if (e < 0) {
      throw std::invalid_argument("make_path: consecutive nodes are not adjacent");
    }
    p.link_fidelity.push_back(topo.edges[e].init_fidelity);
    p.link_prob.push_back(topo.edges[e].link_prob);
  }
  for (std::size_t k = 1; k + 1 < p.nodes.size(); ++k) {
    p.swap_prob.push_back(topo.nodes[p.nodes[k]].swap_prob);
  }
  p.success_prob = path_success_prob(p.link_prob, p.swap_prob);
  return p;
}

FidelityModel ScenarioConfig::model() const {
  return FidelityModel{deco_A, deco_B, deco_T_ms, deco_kappa, slot_ms};
}

Batch ScenarioConfig::batch() const {
  return Batch{num_slots, slot_ms, entangle_ms};
}

void ScenarioConfig::validate() const {
  model().validate();
  auto fail = [](const char* what) { throw std::invalid_argument(what); };
  if (num_nodes < 2) fail("num_nodes must be at least 2");
  if (!(region_w_km > 0 && region_h_km > 0)) fail("region must have positive extent");
  if (num_requests < 0) fail("num_requests must be nonnegative");
  if (num_slots < 1) fail("num_slots must be positive");
  if (!(entangle_ms > 0)) fail("entangle_ms must be positive");
  if (batch().attempts() < 1) fail("slot_ms must admit at least one entangling attempt");
  if (lambda_per_km < 0) fail("lambda_per_km must be nonnegative");
  if (!(swap_prob >= 0 && swap_prob <= 1)) fail("swap_prob must lie in [0,1]");
  if (!(init_fid_min <= init_fid_max && init_fid_min > deco_A && init_fid_max <= 1.0)) {
    fail("initial fidelity range must lie in (A, 1] and be ordered");
  }
  if (!(mem_min >= 1 && mem_min <= mem_max)) fail("memory range must be positive and ordered");
  if (!(fidelity_threshold >= 0 && fidelity_threshold <= 1)) fail("fidelity_threshold must lie in [0,1]");
  if (k_paths < 0) fail("k_paths must be nonnegative");
  if (!(epsilon > 0 && epsilon <= 0.5)) fail("epsilon must lie in (0, 0.5]");
  if (mc_trials < 1) fail("mc_trials must be positive");
  if (link_prob_override && !(*link_prob_override >= 0 && *link_prob_override <= 1)) {
    fail("link_prob_override must lie in [0,1]");
  }
  if (!(waxman_beta > 0 && waxman_beta <= 1 && waxman_alpha > 0)) fail("invalid Waxman parameters");
}

ScenarioConfig ScenarioConfig::desk() {
  ScenarioConfig c;
  c.num_nodes = 30;
  c.num_requests = 15;
  c.mc_trials = 200;
  return c;
}

std::string to_string(FnprMode mode) {
  return mode == FnprMode::Tetris ? "tetris" : "tetris_n";
}

FnprMode parse_mode(const std::string& text) {
  if (text == "tetris") return FnprMode::Tetris;
  if (text == "tetris_n") return FnprMode::TetrisN;
  throw std::invalid_argument("unknown mode '" + text + "' (expected tetris or tetris_n)");
}

namespace {

const char* const kKeys[] = {
    "num_nodes",   "region_w_km",   "region_h_km",   "num_requests",  "num_slots",
    "slot_ms",     "entangle_ms",   "lambda_per_km", "swap_prob",     "init_fid_min",
    "init_fid_max", "mem_min",      "mem_max",       "fidelity_threshold", "k_paths",
    "epsilon",     "deco_A",        "deco_B",        "deco_T_ms",     "deco_kappa",
    "mode",        "seed",          "mc_trials",     "link_prob_override"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double out = 0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size()) {
    throw std::invalid_argument("config key '" + key + "': not a number: '" + value + "'");
  }
  return out;
}

long long to_int(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  long long out = 0;
  try {
    out = std::stoll(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size()) {
    throw std::invalid_argument("config key '" + key + "': not an integer: '" + value + "'");
  }
  return out;
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

bool is_config_key(const std::string& key) {
  for (const char* k : kKeys) {
    if (key == k) return true;
  }
  return key == "mem_avg";
}

void set_config_value(ScenarioConfig& c, const std::string& key, const std::string& value) {
  if (key == "num_nodes") c.num_nodes = static_cast<int>(to_int(key, value));
  else if (key == "region_w_km") c.region_w_km = to_double(key, value);
  else if (key == "region_h_km") c.region_h_km = to_double(key, value);
  else if (key == "num_requests") c.num_requests = static_cast<int>(to_int(key, value));
  else if (key == "num_slots") c.num_slots = static_cast<int>(to_int(key, value));
  else if (key == "slot_ms") c.slot_ms = to_double(key, value);
  else if (key == "entangle_ms") c.entangle_ms = to_double(key, value);
  else if (key == "lambda_per_km") c.lambda_per_km = to_double(key, value);
  else if (key == "swap_prob") c.swap_prob = to_double(key, value);
  else if (key == "init_fid_min") c.init_fid_min = to_double(key, value);
  else if (key == "init_fid_max") c.init_fid_max = to_double(key, value);
  else if (key == "mem_min") c.mem_min = static_cast<int>(to_int(key, value));
  else if (key == "mem_max") c.mem_max = static_cast<int>(to_int(key, value));
  else if (key == "fidelity_threshold") c.fidelity_threshold = to_double(key, value);
  else if (key == "k_paths") c.k_paths = static_cast<int>(to_int(key, value));
  else if (key == "epsilon") c.epsilon = to_double(key, value);
  else if (key == "deco_A") c.deco_A = to_double(key, value);
  else if (key == "deco_B") c.deco_B = to_double(key, value);
  else if (key == "deco_T_ms") c.deco_T_ms = to_double(key, value);
  else if (key == "deco_kappa") c.deco_kappa = to_double(key, value);
  else if (key == "mode") c.mode = parse_mode(value);
  else if (key == "seed") c.seed = static_cast<std::uint64_t>(to_int(key, value));
  else if (key == "mc_trials") c.mc_trials = static_cast<int>(to_int(key, value));
  else if (key == "link_prob_override") {
    if (value.empty() || value == "none") c.link_prob_override.reset();
    else c.link_prob_override = to_double(key, value);
  } else if (key == "mem_avg") {
    const int avg = static_cast<int>(std::lround(to_double(key, value)));
    c.mem_min = std::max(1, avg - 2);
    c.mem_max = avg + 2;
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig c;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool has_seed = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key == "mem_avg") {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": unknown key 'mem_avg'");
    }
    set_config_value(c, key, trim(line.substr(eq + 1)));
    has_seed = has_seed || key == "seed";
  }
  if (!has_seed) {
    throw std::invalid_argument("config: 'seed' is mandatory");
  }
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open config file '" + file + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const ScenarioConfig& c) {
  std::ostringstream os;
  os << "num_nodes = " << c.num_nodes << '\n'
     << "region_w_km = " << fmt_double(c.region_w_km) << '\n'
     << "region_h_km = " << fmt_double(c.region_h_km) << '\n'
     << "num_requests = " << c.num_requests << '\n'
     << "num_slots = " << c.num_slots << '\n'
     << "slot_ms = " << fmt_double(c.slot_ms) << '\n'
     << "entangle_ms = " << fmt_double(c.entangle_ms) << '\n'
     << "lambda_per_km = " << fmt_double(c.lambda_per_km) << '\n'
     << "swap_prob = " << fmt_double(c.swap_prob) << '\n'
     << "init_fid_min = " << fmt_double(c.init_fid_min) << '\n'
     << "init_fid_max = " << fmt_double(c.init_fid_max) << '\n'
     << "mem_min = " << c.mem_min << '\n'
     << "mem_max = " << c.mem_max << '\n'
     << "fidelity_threshold = " << fmt_double(c.fidelity_threshold) << '\n'
     << "k_paths = " << c.k_paths << '\n'
     << "epsilon = " << fmt_double(c.epsilon) << '\n'
     << "deco_A = " << fmt_double(c.deco_A) << '\n'
     << "deco_B = " << fmt_double(c.deco_B) << '\n'
     << "deco_T_ms = " << fmt_double(c.deco_T_ms) << '\n'
     << "deco_kappa = " << fmt_double(c.deco_kappa) << '\n'
     << "mode = " << to_string(c.mode) << '\n'
     << "seed = " << c.seed << '\n'
     << "mc_trials = " << c.mc_trials << '\n';
  if (c.link_prob_override) {
    os << "link_prob_override = " << fmt_double(*c.link_prob_override) << '\n';
  }
  return os.str();
}

}  // namespace qsched
