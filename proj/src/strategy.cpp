#include "qsched/strategy.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <tuple>

namespace qsched {

StrategyTree StrategyTree::leaf(int i, int avail) {
  StrategyTree t;
  t.nodes_.push_back(TreeNode{i, i + 1, avail, -1, -1, -1});
  return t;
}

StrategyTree StrategyTree::join(const StrategyTree& left, const StrategyTree& right, int avail) {
  if (left.root().j != right.root().i) {
    throw InvalidTreeError("join: children do not share an endpoint");
  }
  StrategyTree t;
  const int left_size = static_cast<int>(left.nodes_.size());
  t.nodes_.push_back(TreeNode{left.root().i, right.root().j, avail, left.root().j, 1, 1 + left_size});
  t.append(left, 1);
  t.append(right, 1 + left_size);
  return t;
}

void StrategyTree::append(const StrategyTree& sub, int offset) {
  for (TreeNode n : sub.nodes_) {
    if (!n.is_leaf()) {
      n.left += offset;
      n.right += offset;
    }
    nodes_.push_back(n);
  }
}

void StrategyTree::validate(int num_slots) const {
  if (nodes_.empty()) throw InvalidTreeError("empty strategy tree");
  for (const TreeNode& n : nodes_) {
    if (n.i >= n.j) throw InvalidTreeError("pair span must satisfy i < j");
    if (n.avail > num_slots) throw InvalidTreeError("pair slot beyond the batch");
    if (n.is_leaf()) {
      if (n.j != n.i + 1) throw InvalidTreeError("leaf must span a single link");
      if (n.avail < 2) throw InvalidTreeError("leaf entangling slot before slot 1");
      continue;
    }
    const int size = static_cast<int>(nodes_.size());
    if (n.left <= 0 || n.right <= 0 || n.left >= size || n.right >= size) {
      throw InvalidTreeError("dangling child index");
    }
    const TreeNode& l = nodes_[n.left];
    const TreeNode& r = nodes_[n.right];
    if (!(n.i < n.split && n.split < n.j) || l.i != n.i || l.j != n.split || r.i != n.split ||
        r.j != n.j) {
      throw InvalidTreeError("children do not decompose the parent span");
    }
    if (l.avail > n.avail - 1 || r.avail > n.avail - 1) {
      throw InvalidTreeError("child pair must exist before the parent's swap slot");
    }
  }
}

bool StrategyTree::is_feasible(int num_slots) const {
  try {
    validate(num_slots);
    return true;
  } catch (const InvalidTreeError&) {
    return false;
  }
}

StrategyTree StrategyTree::mirrored() const {
  const int a = root().i;
  const int b = root().j;
  auto rec = [&](auto&& self, int idx) -> StrategyTree {
    const TreeNode& n = nodes_[idx];
    if (n.is_leaf()) return leaf(a + b - n.j, n.avail);
    return join(self(self, n.right), self(self, n.left), n.avail);
  };
  return rec(rec, 0);
}

int Numerology::root_slot() const {
  int best = 0;
  for (const auto& p : pairs) best = std::max(best, p.last_slot);
  return best;
}

Numerology tree_to_numerology(const StrategyTree& tree) {
  Numerology m;
  const auto& nodes = tree.nodes();
  auto rec = [&](auto&& self, int idx, int parent_avail) -> void {
    const TreeNode& n = nodes[idx];
    const bool is_root = parent_avail < 0;
    const int first = n.is_leaf() ? n.avail - 1 : n.avail;
    const int last = is_root ? n.avail : parent_avail - 1;
    m.pairs.push_back(PairOccupancy{n.i, n.j, first, last});
    if (!n.is_leaf()) {
      self(self, n.left, n.avail);
      self(self, n.right, n.avail);
    }
  };
  rec(rec, 0, -1);
  std::sort(m.pairs.begin(), m.pairs.end());
  return m;
}

StrategyTree numerology_to_tree(const Numerology& m) {
  if (m.pairs.empty()) throw MalformedNumerologyError("empty numerology");
  int lo = m.pairs.front().i, hi = m.pairs.front().j;
  for (const auto& p : m.pairs) {
    if (p.i >= p.j || p.first_slot > p.last_slot) {
      throw MalformedNumerologyError("pair with an empty span or interval");
    }
    lo = std::min(lo, p.i);
    hi = std::max(hi, p.j);
  }
  std::vector<char> used(m.pairs.size(), 0);
  int root_idx = -1;
  for (std::size_t k = 0; k < m.pairs.size(); ++k) {
    if (m.pairs[k].i == lo && m.pairs[k].j == hi) {
      if (root_idx >= 0) throw MalformedNumerologyError("two candidate root pairs");
      root_idx = static_cast<int>(k);
    }
  }
  if (root_idx < 0) throw MalformedNumerologyError("no end-to-end pair");
  const PairOccupancy& root = m.pairs[root_idx];
  const bool root_is_leaf = root.j == root.i + 1;
  if (!root_is_leaf && root.first_slot != root.last_slot) {
    throw MalformedNumerologyError("end-to-end pair must occupy a single slot");
  }
  if (root_is_leaf && root.first_slot + 1 != root.last_slot) {
    throw MalformedNumerologyError("single-link root must occupy its entangling and root slots");
  }
  used[root_idx] = 1;

  // At slot avail-1 the two children of (i, j) both end; the split node is
  // the interior position holding two units in that slot.
  auto rec = [&](auto&& self, int i, int j, int avail) -> StrategyTree {
    if (j == i + 1) return StrategyTree::leaf(i, avail);
    const int slot = avail - 1;
    std::vector<int> ending;
    for (std::size_t k = 0; k < m.pairs.size(); ++k) {
      const auto& p = m.pairs[k];
      if (!used[k] && p.last_slot == slot && p.i >= i && p.j <= j) ending.push_back(static_cast<int>(k));
    }
    std::vector<int> holds(static_cast<std::size_t>(j - i + 1), 0);
    for (int k : ending) {
      ++holds[m.pairs[k].i - i];
      ++holds[m.pairs[k].j - i];
    }
    int split = -1;
    for (int pos = i + 1; pos < j; ++pos) {
      if (holds[pos - i] == 2) {
        if (split >= 0) throw MalformedNumerologyError("ambiguous split at slot " + std::to_string(slot));
        split = pos;
      }
    }
    if (split < 0 || ending.size() != 2) {
      throw MalformedNumerologyError("no unique split for pair (" + std::to_string(i) + "," +
                                     std::to_string(j) + ") at slot " + std::to_string(slot));
    }
    int left = -1, right = -1;
    for (int k : ending) {
      if (m.pairs[k].i == i && m.pairs[k].j == split) left = k;
      if (m.pairs[k].i == split && m.pairs[k].j == j) right = k;
    }
    if (left < 0 || right < 0) throw MalformedNumerologyError("children do not decompose the parent");
    used[left] = used[right] = 1;
    auto child_avail = [&](int k) {
      const auto& p = m.pairs[k];
      return p.j == p.i + 1 ? p.first_slot + 1 : p.first_slot;
    };
    const int la = child_avail(left);
    const int ra = child_avail(right);
    if (la > slot || ra > slot) throw MalformedNumerologyError("child interval is empty");
    return StrategyTree::join(self(self, i, split, la), self(self, split, j, ra), avail);
  };
  StrategyTree tree = rec(rec, lo, hi, root.last_slot);
  if (std::find(used.begin(), used.end(), 0) != used.end()) {
    throw MalformedNumerologyError("numerology has pairs outside the reconstructed tree");
  }
  try {
    tree.validate(root.last_slot);
  } catch (const InvalidTreeError& e) {
    throw MalformedNumerologyError(e.what());
  }
  return tree;
}

std::vector<OccupancyCell> occupancy(const Numerology& m) {
  std::map<std::pair<int, int>, int> cells;
  for (const auto& p : m.pairs) {
    for (int t = p.first_slot; t <= p.last_slot; ++t) {
      ++cells[{t, p.i}];
      ++cells[{t, p.j}];
    }
  }
  std::vector<OccupancyCell> out;
  out.reserve(cells.size());
  for (const auto& [key, units] : cells) out.push_back(OccupancyCell{key.first, key.second, units});
  return out;
}

int total_units(const Numerology& m) {
  int total = 0;
  for (const auto& p : m.pairs) total += 2 * (p.last_slot - p.first_slot + 1);
  return total;
}

bool fits(const Numerology& m, std::span<const NodeId> path_nodes, const CapacityGrid& capacity) {
  for (const auto& c : occupancy(m)) {
    if (c.slot < 1 || c.slot > capacity.num_slots()) return false;
    if (c.units > capacity(c.slot, path_nodes[c.position])) return false;
  }
  return true;
}

void apply_load(SlotGrid<int>& load, const Numerology& m, std::span<const NodeId> path_nodes, int sign) {
  for (const auto& p : m.pairs) {
    for (int t = p.first_slot; t <= p.last_slot; ++t) {
      load(t, path_nodes[p.i]) += sign;
      load(t, path_nodes[p.j]) += sign;
    }
  }
}

double resource_cost(const Numerology& m, std::span<const NodeId> path_nodes, const WeightGrid& weights) {
  double cost = 0.0;
  for (const auto& c : occupancy(m)) cost += weights(c.slot, path_nodes[c.position]) * c.units;
  return cost;
}

double evaluate_fidelity(const StrategyTree& tree, std::span<const double> link_fidelity,
                         const FidelityModel& model) {
  const auto& nodes = tree.nodes();
  // fidelity of a pair once it has idled until `until`
  auto rec = [&](auto&& self, int idx, int until) -> double {
    const TreeNode& n = nodes[idx];
    double f = n.is_leaf()
                   ? link_fidelity[static_cast<std::size_t>(n.i)]
                   : swap_with_decay(model, self(self, n.left, n.avail - 1), self(self, n.right, n.avail - 1));
    for (int t = n.avail; t < until; ++t) f = decay_one_slot(model, f);
    return f;
  };
  const double f = rec(rec, 0, tree.root_slot());
  if (!in_inversion_domain(model, f)) throw DecoheredError("end-to-end pair is fully decohered");
  return f;
}

std::optional<double> try_evaluate_fidelity(const StrategyTree& tree,
                                            std::span<const double> link_fidelity,
                                            const FidelityModel& model) {
  try {
    return evaluate_fidelity(tree, link_fidelity, model);
  } catch (const DecoheredError&) {
    return std::nullopt;
  }
}

std::vector<EnumeratedNumerology> enumerate_numerologies(int hops, int num_slots,
                                                        std::span<const NodeId> path_nodes,
                                                        const CapacityGrid* capacity,
                                                        const EnumerationLimits& limits) {
  if (hops < 1) throw std::invalid_argument("enumerate_numerologies: path needs at least one hop");
  if (hops > limits.max_hops || num_slots > limits.max_slots) {
    throw EnumerationGuardError("enumeration guard: " + std::to_string(hops) + " hops, " +
                                std::to_string(num_slots) + " slots");
  }
  if (capacity && static_cast<int>(path_nodes.size()) != hops + 1) {
    throw std::invalid_argument("enumerate_numerologies: path node count does not match hops");
  }
  // trees over (i, j) whose pair exists exactly at slot a
  std::map<std::tuple<int, int, int>, std::vector<StrategyTree>> memo;
  std::size_t produced = 0;
  auto trees = [&](auto&& self, int i, int j, int a) -> const std::vector<StrategyTree>& {
    const auto key = std::make_tuple(i, j, a);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::vector<StrategyTree> out;
    if (j == i + 1) {
      if (a >= 2) out.push_back(StrategyTree::leaf(i, a));
    } else if (a >= 3) {
      for (int k = i + 1; k < j; ++k) {
        for (int la = 2; la < a; ++la) {
          const auto& lefts = self(self, i, k, la);
          if (lefts.empty()) continue;
          for (int ra = 2; ra < a; ++ra) {
            const auto& rights = self(self, k, j, ra);
            for (const auto& l : lefts) {
              for (const auto& r : rights) {
                out.push_back(StrategyTree::join(l, r, a));
                if (++produced > limits.max_results) {
                  throw EnumerationGuardError("enumeration guard: too many strategy trees");
                }
              }
            }
          }
        }
      }
    }
    return memo.emplace(key, std::move(out)).first->second;
  };

  std::vector<EnumeratedNumerology> result;
  for (int a = 2; a <= num_slots; ++a) {
    for (const auto& tree : trees(trees, 0, hops, a)) {
      Numerology m = tree_to_numerology(tree);
      if (capacity && !fits(m, path_nodes, *capacity)) continue;
      result.push_back(EnumeratedNumerology{tree, std::move(m)});
    }
  }
  std::sort(result.begin(), result.end(),
            [](const auto& x, const auto& y) { return x.numerology < y.numerology; });
  result.erase(std::unique(result.begin(), result.end(),
                           [](const auto& x, const auto& y) { return x.numerology == y.numerology; }),
               result.end());
  return result;
}

std::string to_debug_string(const StrategyTree& tree) {
  std::ostringstream os;
  auto rec = [&](auto&& self, int idx, int depth) -> void {
    const TreeNode& n = tree.nodes()[idx];
    os << std::string(static_cast<std::size_t>(depth) * 2, ' ') << '(' << n.i << ',' << n.j << ")@"
       << n.avail << '\n';
    if (!n.is_leaf()) {
      self(self, n.left, depth + 1);
      self(self, n.right, depth + 1);
    }
  };
  rec(rec, 0, 0);
  return os.str();
}

std::string to_compact_string(const StrategyTree& tree) {
  std::ostringstream os;
  bool first = true;
  for (const TreeNode& n : tree.nodes()) {
    if (!first) os << ';';
    first = false;
    os << '(' << n.i << ',' << n.j << ")@" << n.avail;
  }
  return os.str();
}

StrategyTree parse_compact_tree(const std::string& text) {
  struct Item {
    int i, j, avail;
  };
  std::vector<Item> items;
  std::istringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ';')) {
    Item it{};
    char c1 = 0, c2 = 0, c3 = 0, c4 = 0;
    std::istringstream ts(tok);
    if (!(ts >> c1 >> it.i >> c2 >> it.j >> c3 >> c4 >> it.avail) || c1 != '(' || c2 != ',' ||
        c3 != ')' || c4 != '@') {
      throw InvalidTreeError("cannot parse tree token '" + tok + "'");
    }
    items.push_back(it);
  }
  std::size_t pos = 0;
  auto rec = [&](auto&& self) -> StrategyTree {
    if (pos >= items.size()) throw InvalidTreeError("truncated tree");
    const Item it = items[pos++];
    if (it.j == it.i + 1) return StrategyTree::leaf(it.i, it.avail);
    StrategyTree l = self(self);
    StrategyTree r = self(self);
    if (l.root().i != it.i || r.root().j != it.j) throw InvalidTreeError("tree spans do not nest");
    return StrategyTree::join(l, r, it.avail);
  };
  StrategyTree tree = rec(rec);
  if (pos != items.size()) throw InvalidTreeError("trailing tree tokens");
  return tree;
}

}  // namespace qsched
