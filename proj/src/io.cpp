#include "qsched/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qsched {

void write_topology(std::ostream& out, const Topology& topo) {
  const auto old_precision = out.precision(17);
  for (const Node& n : topo.nodes) {
    const int cap = topo.capacity.num_slots() > 0 ? topo.capacity(1, n.id) : 0;
    out << "node " << n.id << ' ' << n.x_km << ' ' << n.y_km << ' ' << cap << ' ' << n.swap_prob << '\n';
  }
  for (const Edge& e : topo.edges) {
    out << "edge " << e.u << ' ' << e.v << ' ' << e.length_km << ' ' << e.init_fidelity << '\n';
  }
  out.precision(old_precision);
}

Topology read_topology(std::istream& in, int num_slots) {
  Topology topo;
  std::vector<int> caps;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("topology line " + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;
    if (kind == "node") {
      Node n;
      int cap = 0;
      if (!(ls >> n.id >> n.x_km >> n.y_km >> cap >> n.swap_prob)) fail("malformed node");
      if (n.id != static_cast<int>(topo.nodes.size())) fail("node ids must be dense and in order");
      if (cap < 0) fail("negative capacity");
      topo.nodes.push_back(n);
      caps.push_back(cap);
    } else if (kind == "edge") {
      Edge e;
      if (!(ls >> e.u >> e.v >> e.length_km >> e.init_fidelity)) fail("malformed edge");
      const int n = static_cast<int>(topo.nodes.size());
      if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n || e.u == e.v) fail("edge endpoint out of range");
      if (topo.find_edge(e.u, e.v) >= 0) fail("duplicate edge");
      topo.edges.push_back(e);
    } else {
      fail("unknown record '" + kind + "'");
    }
  }
  topo.capacity = CapacityGrid(num_slots, topo.num_nodes(), 0);
  for (int t = 1; t <= num_slots; ++t)
    for (int v = 0; v < topo.num_nodes(); ++v) topo.capacity(t, v) = caps[v];
  return topo;
}

Topology load_topology(const std::string& file, int num_slots) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open topology file '" + file + "'");
  return read_topology(in, num_slots);
}

void write_instance(std::ostream& out, const Instance& inst) {
  write_topology(out, inst.topology);
  for (const Request& r : inst.requests) {
    for (const Path& p : r.paths) {
      out << "request " << r.id << ' ';
      for (std::size_t k = 0; k < p.nodes.size(); ++k) out << (k ? "-" : "") << p.nodes[k];
      out << '\n';
    }
  }
}

}  // namespace qsched
