#include "qsched/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qsched {

double Allocation::expected_fidelity_sum() const {
  double sum = 0.0;
  for (const auto& a : chosen)
    if (a) sum += a->expected_fidelity();
  return sum;
}

int Allocation::accepted() const {
  return static_cast<int>(std::count_if(chosen.begin(), chosen.end(), [](const auto& a) { return a.has_value(); }));
}

Assignment make_assignment(const Instance& inst, int req, int path_index, const StrategyTree& tree) {
  const Path& path = inst.requests.at(req).paths.at(path_index);
  Assignment a;
  a.path_index = path_index;
  a.tree = tree;
  a.numerology = tree_to_numerology(tree);
  a.fidelity = try_evaluate_fidelity(tree, path.link_fidelity, inst.model).value_or(inst.model.A);
  a.path_prob = path.success_prob;
  return a;
}

SlotGrid<int> load_of(const Instance& inst, const Allocation& alloc) {
  SlotGrid<int> load(inst.num_slots(), inst.topology.num_nodes(), 0);
  for (std::size_t r = 0; r < alloc.chosen.size(); ++r) {
    if (!alloc.chosen[r]) continue;
    const auto& a = *alloc.chosen[r];
    apply_load(load, a.numerology, inst.requests[r].paths[a.path_index].nodes, +1);
  }
  return load;
}

double max_overload(const Instance& inst, const Allocation& alloc) {
  const auto load = load_of(inst, alloc);
  double worst = 0.0;
  for (int t = 1; t <= inst.num_slots(); ++t) {
    for (int v = 0; v < inst.topology.num_nodes(); ++v) {
      const int c = inst.capacity()(t, v);
      if (load(t, v) == 0) continue;
      worst = std::max(worst, c > 0 ? static_cast<double>(load(t, v)) / c
                                    : std::numeric_limits<double>::infinity());
    }
  }
  return worst;
}

FeasibilityReport check_feasible(const Instance& inst, const Allocation& alloc, bool enforce_threshold) {
  if (alloc.chosen.size() != inst.requests.size()) return {false, "allocation size differs from request count"};
  for (std::size_t r = 0; r < alloc.chosen.size(); ++r) {
    if (!alloc.chosen[r]) continue;
    const auto& a = *alloc.chosen[r];
    const auto& req = inst.requests[r];
    if (a.path_index < 0 || a.path_index >= static_cast<int>(req.paths.size())) {
      return {false, "request " + std::to_string(r) + ": bad path index"};
    }
    const Path& p = req.paths[a.path_index];
    if (!a.tree.is_feasible(inst.num_slots()) || a.tree.root().i != 0 || a.tree.root().j != p.hops()) {
      return {false, "request " + std::to_string(r) + ": infeasible strategy tree"};
    }
    if (!(a.numerology == tree_to_numerology(a.tree))) {
      return {false, "request " + std::to_string(r) + ": numerology does not match tree"};
    }
    if (enforce_threshold && a.fidelity < inst.fidelity_threshold) {
      return {false, "request " + std::to_string(r) + ": fidelity below threshold"};
    }
  }
  const auto load = load_of(inst, alloc);
  for (int t = 1; t <= inst.num_slots(); ++t)
    for (int v = 0; v < inst.topology.num_nodes(); ++v)
      if (load(t, v) > inst.capacity()(t, v)) {
        return {false, "memory overload at slot " + std::to_string(t) + " node " + std::to_string(v)};
      }
  return {};
}

void write_allocation(std::ostream& out, const Instance& inst, const Allocation& alloc) {
  const auto old_precision = out.precision(17);
  for (std::size_t r = 0; r < alloc.chosen.size(); ++r) {
    if (!alloc.chosen[r]) continue;
    const auto& a = *alloc.chosen[r];
    const Path& p = inst.requests[r].paths[a.path_index];
    out << "request=" << inst.requests[r].id << " path=";
    for (std::size_t k = 0; k < p.nodes.size(); ++k) out << (k ? "-" : "") << p.nodes[k];
    out << " tree=" << to_compact_string(a.tree) << " fidelity=" << a.fidelity << " prob=" << a.path_prob
        << '\n';
  }
  out.precision(old_precision);
}

std::string format_allocation(const Instance& inst, const Allocation& alloc) {
  std::ostringstream os;
  write_allocation(os, inst, alloc);
  return os.str();
}

Allocation read_allocation(std::istream& in, const Instance& inst) {
  Allocation alloc(inst.requests.size());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string field;
    int request_id = -1;
    std::vector<NodeId> nodes;
    std::string tree_text;
    while (ls >> field) {
      const auto eq = field.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("allocation: malformed field '" + field + "'");
      const std::string key = field.substr(0, eq);
      const std::string value = field.substr(eq + 1);
      if (key == "request") {
        request_id = std::stoi(value);
      } else if (key == "path") {
        std::istringstream ps(value);
        std::string tok;
        while (std::getline(ps, tok, '-')) nodes.push_back(std::stoi(tok));
      } else if (key == "tree") {
        tree_text = value;
      }
    }
    auto it = std::find_if(inst.requests.begin(), inst.requests.end(),
                           [&](const Request& r) { return r.id == request_id; });
    if (it == inst.requests.end()) throw std::invalid_argument("allocation: unknown request " + std::to_string(request_id));
    const int r = static_cast<int>(it - inst.requests.begin());
    int path_index = -1;
    for (std::size_t k = 0; k < it->paths.size(); ++k)
      if (it->paths[k].nodes == nodes) path_index = static_cast<int>(k);
    if (path_index < 0) throw std::invalid_argument("allocation: path not in request's path set");
    if (alloc.chosen[r]) throw std::invalid_argument("allocation: request listed twice");
    alloc.chosen[r] = make_assignment(inst, r, path_index, parse_compact_tree(tree_text));
  }
  return alloc;
}

}  // namespace qsched
