#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qsched/fidelity.hpp"
#include "qsched/grid.hpp"

namespace qsched {

struct Node {
  NodeId id = 0;
  double x_km = 0.0;
  double y_km = 0.0;
  double swap_prob = 1.0;
};

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double length_km = 0.0;
  double init_fidelity = 1.0;
  double link_prob = 1.0;
};

/// Simple undirected graph with per-(slot, node) memory capacities.
/// Node ids are dense: nodes[k].id == k.
struct Topology {
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  CapacityGrid capacity;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  /// Index into `edges`, or -1 when u and v are not adjacent.
  int find_edge(NodeId u, NodeId v) const;
  std::vector<std::vector<int>> adjacency() const;  // per node: incident edge indices
};

struct Batch {
  int num_slots = 13;
  double tau_ms = 2.0;
  double entangle_ms = 0.25;

  /// floor(tau / entangle_ms), the entangling attempts per slot.
  int attempts() const;
};

struct Path {
  std::vector<NodeId> nodes;
  std::vector<double> link_fidelity;  // per hop
  std::vector<double> link_prob;      // per hop
  std::vector<double> swap_prob;      // per interior node
  double success_prob = 1.0;

  int hops() const { return static_cast<int>(nodes.size()) - 1; }
};

/// Smallest root slot any strategy tree over `hops` links can use.
int min_root_slot(int hops);

/// Builds a Path along `nodes`, annotating link and swap data from `topo`.
/// Throws std::invalid_argument when consecutive nodes are not adjacent.
Path make_path(const Topology& topo, std::vector<NodeId> nodes);

struct Request {
  int id = 0;
  NodeId source = 0;
  NodeId destination = 0;
  std::vector<Path> paths;
};

struct Instance {
  Topology topology;
  Batch batch;
  FidelityModel model;
  double fidelity_threshold = 0.5;
  std::vector<Request> requests;

  int num_slots() const { return batch.num_slots; }
  const CapacityGrid& capacity() const { return topology.capacity; }
};

enum class FnprMode { TetrisN, Tetris };

struct ScenarioConfig {
  int num_nodes = 100;
  double region_w_km = 150.0;
  double region_h_km = 300.0;
  int num_requests = 50;
  int num_slots = 13;
  double slot_ms = 2.0;
  double entangle_ms = 0.25;
  double lambda_per_km = 0.045;
  double swap_prob = 0.9;
  double init_fid_min = 0.7;
  double init_fid_max = 0.98;
  int mem_min = 6;
  int mem_max = 14;
  double fidelity_threshold = 0.5;
  int k_paths = 3;
  double epsilon = 0.1;
  double deco_A = 0.25;
  double deco_B = 0.75;
  double deco_T_ms = 40.0;
  double deco_kappa = 2.0;
  FnprMode mode = FnprMode::Tetris;
  std::uint64_t seed = 1;
  int mc_trials = 1000;
  std::optional<double> link_prob_override;

  // Waxman knobs; not part of the key=value file format.
  double waxman_beta = 0.85;
  double waxman_alpha = kDefaultWaxmanAlpha;

  /// Calibrated so that 100 nodes in a 150 x 300 km region give a mean
  /// edge length of about 30 km (see calibrate_waxman_alpha).
  static constexpr double kDefaultWaxmanAlpha = 0.057;

  FidelityModel model() const;
  Batch batch() const;

  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;

  /// Desk-scale profile used by tests: 30 nodes, 15 requests.
  static ScenarioConfig desk();
};

/// Parses `key = value` lines; '#' starts a comment. Unknown keys throw.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& file);
std::string format_config(const ScenarioConfig& config);

/// Sets one config key from its textual value. Besides the file keys this
/// accepts `mem_avg`, which sets mem_min/mem_max to avg -/+ 2.
void set_config_value(ScenarioConfig& config, const std::string& key, const std::string& value);
bool is_config_key(const std::string& key);

std::string to_string(FnprMode mode);
FnprMode parse_mode(const std::string& text);

}  // namespace qsched
