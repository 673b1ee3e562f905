#include "qsched/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>

namespace qsched {
namespace {

double distance(const Node& a, const Node& b) {
  return std::hypot(a.x_km - b.x_km, a.y_km - b.y_km);
}

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

double path_length(const Topology& topo, const std::vector<NodeId>& seq) {
  double len = 0.0;
  for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
    len += topo.edges[topo.find_edge(seq[k], seq[k + 1])].length_km;
  }
  return len;
}

// Dijkstra avoiding blocked nodes and edges; ties settle on smaller node id.
std::vector<NodeId> shortest_path(const Topology& topo,
                                  const std::vector<std::vector<int>>& adj,
                                  NodeId s, NodeId d,
                                  const std::vector<char>& node_blocked,
                                  const std::vector<char>& edge_blocked) {
  const int n = topo.num_nodes();
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<NodeId> prev(n, -1);
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[s] = 0.0;
  heap.emplace(0.0, s);
  while (!heap.empty()) {
    auto [du, u] = heap.top();
    heap.pop();
    if (du > dist[u]) continue;
    if (u == d) break;
    for (int e : adj[u]) {
      if (edge_blocked[e]) continue;
      const Edge& edge = topo.edges[e];
      const NodeId w = edge.u == u ? edge.v : edge.u;
      if (node_blocked[w]) continue;
      const double alt = du + edge.length_km;
      if (alt < dist[w] || (alt == dist[w] && prev[w] > u)) {
        dist[w] = alt;
        prev[w] = u;
        heap.emplace(alt, w);
      }
    }
  }
  if (!std::isfinite(dist[d])) return {};
  std::vector<NodeId> seq;
  for (NodeId v = d; v != -1; v = prev[v]) seq.push_back(v);
  std::reverse(seq.begin(), seq.end());
  return seq;
}

}  // namespace

Topology waxman_generate(const ScenarioConfig& config, Rng& rng) {
  if (config.num_nodes < 2) {
    throw std::invalid_argument("waxman_generate: need at least 2 nodes");
  }
  Topology topo;
  std::uniform_real_distribution<double> ux(0.0, config.region_w_km);
  std::uniform_real_distribution<double> uy(0.0, config.region_h_km);
  for (int k = 0; k < config.num_nodes; ++k) {
    const double x = ux(rng);
    const double y = uy(rng);
    topo.nodes.push_back(Node{k, x, y, config.swap_prob});
  }
  const int n = config.num_nodes;
  double l_max = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) l_max = std::max(l_max, distance(topo.nodes[a], topo.nodes[b]));

  std::uniform_real_distribution<double> coin(0.0, 1.0);
  DisjointSets components(n);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double d = distance(topo.nodes[a], topo.nodes[b]);
      const double keep = config.waxman_beta * std::exp(-d / (config.waxman_alpha * l_max));
      if (coin(rng) < keep) {
        topo.edges.push_back(Edge{a, b, d, 1.0, 1.0});
        components.unite(a, b);
      }
    }
  }

  // join components with the globally shortest missing edges
  std::vector<std::tuple<double, int, int>> candidates;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (components.find(a) != components.find(b))
        candidates.emplace_back(distance(topo.nodes[a], topo.nodes[b]), a, b);
  std::sort(candidates.begin(), candidates.end());
  for (const auto& [d, a, b] : candidates) {
    if (components.unite(a, b)) topo.edges.push_back(Edge{a, b, d, 1.0, 1.0});
  }

  std::uniform_int_distribution<int> mem(config.mem_min, config.mem_max);
  std::vector<int> memory(n);
  for (int& m : memory) m = mem(rng);
  std::uniform_real_distribution<double> fid(config.init_fid_min, config.init_fid_max);
  for (Edge& e : topo.edges) e.init_fidelity = fid(rng);

  topo.capacity = CapacityGrid(config.num_slots, n);
  for (int t = 1; t <= config.num_slots; ++t)
    for (int v = 0; v < n; ++v) topo.capacity(t, v) = memory[v];
  apply_link_model(topo, config);
  return topo;
}

void apply_link_model(Topology& topo, const ScenarioConfig& config) {
  const int attempts = config.batch().attempts();
  for (Edge& e : topo.edges) {
    e.link_prob = config.link_prob_override
                      ? *config.link_prob_override
                      : link_success_prob(config.lambda_per_km, e.length_km, attempts);
  }
  if (topo.capacity.num_slots() != config.num_slots && topo.capacity.num_slots() > 0) {
    CapacityGrid resized(config.num_slots, topo.num_nodes());
    for (int t = 1; t <= config.num_slots; ++t)
      for (int v = 0; v < topo.num_nodes(); ++v) resized(t, v) = topo.capacity(1, v);
    topo.capacity = std::move(resized);
  }
}

double mean_edge_length(const Topology& topo) {
  if (topo.edges.empty()) return 0.0;
  double sum = 0.0;
  for (const Edge& e : topo.edges) sum += e.length_km;
  return sum / static_cast<double>(topo.edges.size());
}

double calibrate_waxman_alpha(ScenarioConfig config, double target_km, int samples) {
  auto mean_at = [&](double alpha) {
    config.waxman_alpha = alpha;
    double acc = 0.0;
    for (int s = 0; s < samples; ++s) {
      Rng rng = make_stream(static_cast<std::uint64_t>(s), "waxman-calibration");
      acc += mean_edge_length(waxman_generate(config, rng));
    }
    return acc / samples;
  };
  // mean edge length grows with alpha
  double lo = 1e-3, hi = 1.0;
  for (int iter = 0; iter < 40; ++iter) {
    const double mid = std::sqrt(lo * hi);
    if (mean_at(mid) < target_km) lo = mid;
    else hi = mid;
  }
  return std::sqrt(lo * hi);
}

std::vector<Path> k_shortest_paths(const Topology& topo, NodeId s, NodeId d, int k) {
  if (s == d) throw std::invalid_argument("k_shortest_paths: source equals destination");
  std::vector<Path> out;
  if (k <= 0) return out;
  const auto adj = topo.adjacency();
  const int n = topo.num_nodes();
  std::vector<char> no_nodes(n, 0), no_edges(topo.edges.size(), 0);

  std::vector<std::vector<NodeId>> accepted;
  auto first = shortest_path(topo, adj, s, d, no_nodes, no_edges);
  if (first.empty()) return out;
  accepted.push_back(first);

  std::set<std::pair<double, std::vector<NodeId>>> pool;
  while (static_cast<int>(accepted.size()) < k) {
    const auto& last = accepted.back();
    for (std::size_t i = 0; i + 1 < last.size(); ++i) {
      std::vector<NodeId> root(last.begin(), last.begin() + static_cast<long>(i) + 1);
      std::vector<char> node_blocked(n, 0), edge_blocked(topo.edges.size(), 0);
      for (const auto& p : accepted) {
        if (p.size() > i + 1 && std::equal(root.begin(), root.end(), p.begin())) {
          edge_blocked[topo.find_edge(p[i], p[i + 1])] = 1;
        }
      }
      for (std::size_t r = 0; r < i; ++r) node_blocked[root[r]] = 1;
      auto spur = shortest_path(topo, adj, root.back(), d, node_blocked, edge_blocked);
      if (spur.empty()) continue;
      std::vector<NodeId> total = root;
      total.insert(total.end(), spur.begin() + 1, spur.end());
      if (std::find(accepted.begin(), accepted.end(), total) != accepted.end()) continue;
      pool.emplace(path_length(topo, total), std::move(total));
    }
    if (pool.empty()) break;
    accepted.push_back(pool.begin()->second);
    pool.erase(pool.begin());
  }

  // final order: ascending length, then node sequence
  std::vector<std::pair<double, std::vector<NodeId>>> ranked;
  for (auto& p : accepted) ranked.emplace_back(path_length(topo, p), p);
  std::sort(ranked.begin(), ranked.end());
  for (auto& [len, seq] : ranked) out.push_back(make_path(topo, seq));
  return out;
}

Instance build_instance(const ScenarioConfig& config) {
  Rng rng = make_stream(config.seed, "topology");
  return build_instance(config, waxman_generate(config, rng));
}

Instance build_instance(const ScenarioConfig& config, Topology topology) {
  config.validate();
  apply_link_model(topology, config);
  Instance inst;
  inst.topology = std::move(topology);
  inst.batch = config.batch();
  inst.model = config.model();
  inst.fidelity_threshold = config.fidelity_threshold;

  const long long n = inst.topology.num_nodes();
  if (config.num_requests > n * (n - 1) / 2) {
    throw std::invalid_argument("build_instance: cannot draw that many distinct SD pairs");
  }
  Rng rng = make_stream(config.seed, "requests");
  std::uniform_int_distribution<int> pick(0, static_cast<int>(n) - 1);
  std::set<std::pair<int, int>> used;
  while (static_cast<int>(inst.requests.size()) < config.num_requests) {
    const int s = pick(rng);
    const int d = pick(rng);
    if (s == d || used.count({std::min(s, d), std::max(s, d)})) continue;
    used.insert({std::min(s, d), std::max(s, d)});
    Request req;
    req.id = static_cast<int>(inst.requests.size());
    req.source = s;
    req.destination = d;
    for (Path& p : k_shortest_paths(inst.topology, s, d, config.k_paths)) {
      if (min_root_slot(p.hops()) <= config.num_slots) req.paths.push_back(std::move(p));
    }
    inst.requests.push_back(std::move(req));
  }
  return inst;
}

Instance mis_reduction(const SimpleGraph& graph) {
  const int nv = graph.num_vertices;
  if (nv < 1) throw std::invalid_argument("mis_reduction: empty graph");
  int depth = 0;
  while ((1 << depth) < nv) ++depth;
  const int path_nodes = (1 << depth) + 1;

  // provisional ids: vertex r owns r*path_nodes .. r*path_nodes+path_nodes-1
  std::vector<std::vector<int>> seq(nv, std::vector<int>(path_nodes));
  for (int r = 0; r < nv; ++r)
    for (int k = 0; k < path_nodes; ++k) seq[r][k] = r * path_nodes + k;
  std::vector<std::vector<char>> merged(nv, std::vector<char>(path_nodes, 0));
  auto take_interior = [&](int r) {
    for (int k = 1; k + 1 < path_nodes; ++k) {
      if (!merged[r][k]) {
        merged[r][k] = 1;
        return k;
      }
    }
    throw std::invalid_argument("mis_reduction: a path ran out of unmerged interior nodes");
  };
  for (auto [a, b] : graph.edges) {
    if (a < 0 || b < 0 || a >= nv || b >= nv || a == b) {
      throw std::invalid_argument("mis_reduction: invalid edge");
    }
    const int ka = take_interior(a);
    const int kb = take_interior(b);
    seq[b][kb] = seq[a][ka];
  }

  // compact ids in order of first appearance
  std::vector<int> remap(static_cast<std::size_t>(nv) * path_nodes, -1);
  int next = 0;
  for (auto& s : seq)
    for (int& v : s) {
      if (remap[v] < 0) remap[v] = next++;
      v = remap[v];
    }

  Instance inst;
  inst.batch = Batch{depth + 2, 2.0, 0.25};
  inst.model = FidelityModel{};
  inst.fidelity_threshold = 0.0;
  Topology& topo = inst.topology;
  for (int v = 0; v < next; ++v) topo.nodes.push_back(Node{v, 0.0, 0.0, 1.0});
  std::vector<int> cap(next, 2);
  for (int r = 0; r < nv; ++r) {
    cap[seq[r].front()] = 1;
    cap[seq[r].back()] = 1;
    for (int k = 0; k + 1 < path_nodes; ++k) {
      if (topo.find_edge(seq[r][k], seq[r][k + 1]) < 0) {
        topo.edges.push_back(Edge{seq[r][k], seq[r][k + 1], 1.0, 1.0, 1.0});
      }
    }
  }
  topo.capacity = CapacityGrid(inst.batch.num_slots, next);
  for (int t = 1; t <= inst.batch.num_slots; ++t)
    for (int v = 0; v < next; ++v) topo.capacity(t, v) = cap[v];
  for (int r = 0; r < nv; ++r) {
    Request req;
    req.id = r;
    req.source = seq[r].front();
    req.destination = seq[r].back();
    req.paths.push_back(make_path(topo, seq[r]));
    inst.requests.push_back(std::move(req));
  }
  return inst;
}

int max_independent_set_size(const SimpleGraph& graph) {
  const int n = graph.num_vertices;
  if (n > 20) throw std::invalid_argument("max_independent_set_size: graph too large");
  std::vector<unsigned> adj(n, 0);
  for (auto [a, b] : graph.edges) {
    adj[a] |= 1u << b;
    adj[b] |= 1u << a;
  }
  int best = 0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    bool ok = true;
    for (int v = 0; v < n && ok; ++v)
      if ((mask >> v & 1u) && (adj[v] & mask)) ok = false;
    if (ok) best = std::max(best, __builtin_popcount(mask));
  }
  return best;
}

}  // namespace qsched
