#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "qsched/generators.hpp"
#include "qsched/io.hpp"
#include "test_util.hpp"

using namespace qsched;
using qsched::testing_util::make_topology;

TEST(Config, ParseAndFormatRoundTrip) {
  const std::string text =
      "# desk run\n"
      "seed = 42\n"
      "num_nodes = 30\n"
      "slot_ms = 1.5\n"
      "mode = tetris_n\n"
      "link_prob_override = 0.8\n";
  const ScenarioConfig c = parse_config(text);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.num_nodes, 30);
  EXPECT_DOUBLE_EQ(c.slot_ms, 1.5);
  EXPECT_EQ(c.mode, FnprMode::TetrisN);
  ASSERT_TRUE(c.link_prob_override);
  EXPECT_DOUBLE_EQ(*c.link_prob_override, 0.8);
  const ScenarioConfig again = parse_config(format_config(c));
  EXPECT_EQ(format_config(again), format_config(c));
}

TEST(Config, RejectsUnknownKeysAndMissingSeed) {
  EXPECT_THROW(parse_config("seed = 1\nbogus = 3\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("num_nodes = 30\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("seed = 1\nmem_avg = 10\n"), std::invalid_argument);
}

TEST(Config, MemAvgSetsRange) {
  ScenarioConfig c;
  set_config_value(c, "mem_avg", "10");
  EXPECT_EQ(c.mem_min, 8);
  EXPECT_EQ(c.mem_max, 12);
  set_config_value(c, "mem_avg", "2");
  EXPECT_EQ(c.mem_min, 1);
  EXPECT_EQ(c.mem_max, 4);
}

TEST(Config, AttemptsPerSlot) {
  EXPECT_EQ(ScenarioConfig{}.batch().attempts(), 8);
  ScenarioConfig c;
  c.slot_ms = 0.2;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Waxman, NodesInsideRegionAndConnected) {
  ScenarioConfig c;
  Rng rng = make_stream(3, "topology");
  const Topology t = waxman_generate(c, rng);
  ASSERT_EQ(t.num_nodes(), 100);
  for (const Node& n : t.nodes) {
    EXPECT_GE(n.x_km, 0.0);
    EXPECT_LE(n.x_km, 150.0);
    EXPECT_GE(n.y_km, 0.0);
    EXPECT_LE(n.y_km, 300.0);
    EXPECT_GE(t.capacity(1, n.id), 6);
    EXPECT_LE(t.capacity(1, n.id), 14);
    EXPECT_EQ(t.capacity(1, n.id), t.capacity(13, n.id));
  }
  for (const Edge& e : t.edges) {
    EXPECT_GE(e.init_fidelity, 0.7);
    EXPECT_LE(e.init_fidelity, 0.98);
  }
  // connected: every other node reachable from node 0
  const auto adj = t.adjacency();
  std::vector<char> seen(t.num_nodes(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int e : adj[u]) {
      const int v = t.edges[e].u == u ? t.edges[e].v : t.edges[e].u;
      if (!seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
    }
  }
  EXPECT_EQ(std::count(seen.begin(), seen.end(), 1), t.num_nodes());
}

TEST(Waxman, CalibratedMeanEdgeLength) {
  double total = 0.0;
  for (std::uint64_t s = 1; s <= 10; ++s) {
    ScenarioConfig c;
    Rng rng = make_stream(s, "topology");
    total += mean_edge_length(waxman_generate(c, rng));
  }
  EXPECT_NEAR(total / 10, 30.0, 3.0);
}

TEST(Waxman, TwoNodesGetOneEdge) {
  ScenarioConfig c;
  c.num_nodes = 2;
  Rng rng = make_stream(1, "topology");
  EXPECT_EQ(waxman_generate(c, rng).edges.size(), 1u);
}

TEST(KShortest, Triangle) {
  Topology t = make_topology(3, {{0, 1}, {1, 2}, {0, 2}}, 3, 4);
  t.edges[0].length_km = 10;
  t.edges[1].length_km = 10;
  t.edges[2].length_km = 30;
  const auto paths = k_shortest_paths(t, 0, 2, 3);
  ASSERT_EQ(paths.size(), 2u);
  EXPECT_EQ(paths[0].nodes, (std::vector<NodeId>{0, 1, 2}));
  EXPECT_EQ(paths[1].nodes, (std::vector<NodeId>{0, 2}));
  EXPECT_TRUE(k_shortest_paths(t, 0, 2, 0).empty());
  EXPECT_THROW(k_shortest_paths(t, 1, 1, 2), std::invalid_argument);
}

TEST(KShortest, EqualLengthsLexicographic) {
  Topology t = make_topology(4, {{0, 2}, {2, 3}, {0, 1}, {1, 3}}, 3, 4);
  const auto paths = k_shortest_paths(t, 0, 3, 2);
  ASSERT_EQ(paths.size(), 2u);
  EXPECT_EQ(paths[0].nodes, (std::vector<NodeId>{0, 1, 3}));
  EXPECT_EQ(paths[1].nodes, (std::vector<NodeId>{0, 2, 3}));
}

TEST(KShortest, LooplessAndSorted) {
  ScenarioConfig c = ScenarioConfig::desk();
  Rng rng = make_stream(9, "topology");
  Topology t = waxman_generate(c, rng);
  const auto paths = k_shortest_paths(t, 0, 17, 5);
  ASSERT_FALSE(paths.empty());
  double prev = 0.0;
  for (const auto& p : paths) {
    std::set<NodeId> uniq(p.nodes.begin(), p.nodes.end());
    EXPECT_EQ(uniq.size(), p.nodes.size());
    double len = 0.0;
    for (std::size_t k = 0; k + 1 < p.nodes.size(); ++k) len += t.edges[t.find_edge(p.nodes[k], p.nodes[k + 1])].length_km;
    EXPECT_GE(len, prev - 1e-9);
    prev = len;
  }
}

TEST(BuildInstance, DeterministicAndPruned) {
  ScenarioConfig c = ScenarioConfig::desk();
  c.seed = 11;
  const Instance a = build_instance(c);
  const Instance b = build_instance(c);
  ASSERT_EQ(a.requests.size(), 15u);
  std::set<std::pair<int, int>> pairs;
  for (std::size_t r = 0; r < a.requests.size(); ++r) {
    const Request& q = a.requests[r];
    EXPECT_NE(q.source, q.destination);
    pairs.insert({std::min(q.source, q.destination), std::max(q.source, q.destination)});
    ASSERT_EQ(q.paths.size(), b.requests[r].paths.size());
    for (std::size_t p = 0; p < q.paths.size(); ++p) {
      EXPECT_EQ(q.paths[p].nodes, b.requests[r].paths[p].nodes);
      EXPECT_LE(min_root_slot(q.paths[p].hops()), c.num_slots);
      EXPECT_EQ(q.paths[p].nodes.front(), q.source);
      EXPECT_EQ(q.paths[p].nodes.back(), q.destination);
    }
  }
  EXPECT_EQ(pairs.size(), 15u);
}

TEST(BuildInstance, LinkModel) {
  ScenarioConfig c = ScenarioConfig::desk();
  const Instance inst = build_instance(c);
  for (const Edge& e : inst.topology.edges) {
    EXPECT_NEAR(e.link_prob, link_success_prob(0.045, e.length_km, 8), 1e-12);
  }
  c.link_prob_override = 0.5;
  for (const Edge& e : build_instance(c).topology.edges) EXPECT_EQ(e.link_prob, 0.5);
}

TEST(BuildInstance, TooManyRequests) {
  ScenarioConfig c = ScenarioConfig::desk();
  c.num_nodes = 4;
  c.num_requests = 7;
  EXPECT_THROW(build_instance(c), std::invalid_argument);
}

TEST(TopologyIo, RoundTrip) {
  ScenarioConfig c = ScenarioConfig::desk();
  Rng rng = make_stream(2, "topology");
  const Topology t = waxman_generate(c, rng);
  std::stringstream ss;
  write_topology(ss, t);
  const Topology back = read_topology(ss, c.num_slots);
  ASSERT_EQ(back.num_nodes(), t.num_nodes());
  ASSERT_EQ(back.edges.size(), t.edges.size());
  for (std::size_t k = 0; k < t.edges.size(); ++k) {
    EXPECT_EQ(back.edges[k].length_km, t.edges[k].length_km);
    EXPECT_EQ(back.edges[k].init_fidelity, t.edges[k].init_fidelity);
  }
  EXPECT_EQ(back.capacity, t.capacity);
  std::istringstream bad("node 0 0 0 5 0.9\nedge 0 3 1 0.9\n");
  EXPECT_THROW(read_topology(bad, 3), std::invalid_argument);
}

TEST(MisReduction, Triangle) {
  const SimpleGraph k3{3, {{0, 1}, {1, 2}, {0, 2}}};
  const Instance inst = mis_reduction(k3);
  EXPECT_EQ(inst.num_slots(), 4);
  ASSERT_EQ(inst.requests.size(), 3u);
  for (const auto& r : inst.requests) {
    ASSERT_EQ(r.paths.size(), 1u);
    EXPECT_EQ(r.paths[0].nodes.size(), 5u);
    EXPECT_DOUBLE_EQ(r.paths[0].success_prob, 1.0);
    EXPECT_EQ(inst.capacity()(1, r.source), 1);
  }
  EXPECT_EQ(max_independent_set_size(k3), 1);
}

TEST(MisReduction, RejectsTooManyEdgesPerVertex) {
  // a star on 3 vertices is fine; the centre of a 3-leaf star has degree 3
  // but its path only has 3 interior nodes, which still fits
  EXPECT_NO_THROW(mis_reduction(SimpleGraph{4, {{0, 1}, {0, 2}, {0, 3}}}));
  EXPECT_THROW(mis_reduction(SimpleGraph{2, {{0, 1}, {0, 1}}}), std::invalid_argument);
  EXPECT_THROW(mis_reduction(SimpleGraph{2, {{0, 5}}}), std::invalid_argument);
}

TEST(MisReduction, IndependentSetSizes) {
  EXPECT_EQ(max_independent_set_size(SimpleGraph{5, {}}), 5);
  EXPECT_EQ(max_independent_set_size(SimpleGraph{4, {{0, 1}, {1, 2}, {2, 3}}}), 2);
  EXPECT_EQ(max_independent_set_size(SimpleGraph{5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}}}), 2);
}
