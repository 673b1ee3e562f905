#pragma once

#include <compare>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsched/fidelity.hpp"
#include "qsched/grid.hpp"

namespace qsched {

class InvalidTreeError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class MalformedNumerologyError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// One pair (v_i, v_j) of a strategy tree, in path positions (0-based).
/// `avail` is the slot at which the pair exists. A leaf (j == i + 1) is
/// entangled during avail - 1; an internal pair is produced by a swap at
/// its split node during avail - 1.
struct TreeNode {
  int i = 0;
  int j = 1;
  int avail = 2;
  int split = -1;  // -1 for leaves
  int left = -1;   // child indices into StrategyTree::nodes()
  int right = -1;

  bool is_leaf() const { return split < 0; }
  bool operator==(const TreeNode&) const = default;
};

/// Binary swap tree over a path, stored in pre-order with the root first,
/// so structural equality is vector equality.
class StrategyTree {
public:
  static StrategyTree leaf(int i, int avail);
  static StrategyTree join(const StrategyTree& left, const StrategyTree& right, int avail);

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& root() const { return nodes_.front(); }
  int root_slot() const { return root().avail; }
  int hops() const { return root().j - root().i; }

  /// Checks the span decomposition and slot ordering, and that every pair
  /// (and every leaf's entangling slot) lies within 1..num_slots.
  /// Throws InvalidTreeError.
  void validate(int num_slots) const;
  bool is_feasible(int num_slots) const;

  StrategyTree mirrored() const;

  bool operator==(const StrategyTree&) const = default;

private:
  void append(const StrategyTree& sub, int offset);
  std::vector<TreeNode> nodes_;
};

/// A pair and the contiguous slots during which it holds one memory unit
/// at each endpoint. For leaves the interval includes the entangling slot.
struct PairOccupancy {
  int i = 0;
  int j = 1;
  int first_slot = 1;
  int last_slot = 1;

  auto operator<=>(const PairOccupancy&) const = default;
};

/// Memory footprint of a strategy tree. `pairs` is sorted, which also makes
/// it the canonical deduplication key.
struct Numerology {
  std::vector<PairOccupancy> pairs;

  int root_slot() const;
  bool operator==(const Numerology&) const = default;
  auto operator<=>(const Numerology&) const = default;
};

/// theta over path positions: units held by `position` during `slot`.
struct OccupancyCell {
  int slot = 0;
  int position = 0;
  int units = 0;

  bool operator==(const OccupancyCell&) const = default;
};

Numerology tree_to_numerology(const StrategyTree& tree);

/// Rebuilds the tree by scanning slots downward from the root, splitting at
/// the interior node that holds two units. Throws MalformedNumerologyError.
StrategyTree numerology_to_tree(const Numerology& m);

/// Aggregated theta, sorted by (slot, position); zero cells omitted.
std::vector<OccupancyCell> occupancy(const Numerology& m);
int total_units(const Numerology& m);

/// True when theta(t, path[pos]) <= capacity(t, path[pos]) everywhere.
bool fits(const Numerology& m, std::span<const NodeId> path_nodes, const CapacityGrid& capacity);

/// Adds (sign = +1) or removes (sign = -1) theta into a load table.
void apply_load(SlotGrid<int>& load, const Numerology& m, std::span<const NodeId> path_nodes, int sign);

/// Sum over cells of weight(t, v) * theta(t, v).
double resource_cost(const Numerology& m, std::span<const NodeId> path_nodes, const WeightGrid& weights);

/// Bottom-up fidelity: leaves start at their link fidelity, idle slots apply
/// decay_one_slot, swaps apply swap_with_decay. Throws DecoheredError.
double evaluate_fidelity(const StrategyTree& tree, std::span<const double> link_fidelity,
                         const FidelityModel& model);

/// Same, but returns nullopt instead of throwing when the pair decoheres.
std::optional<double> try_evaluate_fidelity(const StrategyTree& tree,
                                            std::span<const double> link_fidelity,
                                            const FidelityModel& model);

struct EnumerationLimits {
  int max_hops = 5;
  int max_slots = 8;
  std::size_t max_results = 2'000'000;
};

class EnumerationGuardError : public std::length_error {
public:
  using std::length_error::length_error;
};

struct EnumeratedNumerology {
  StrategyTree tree;
  Numerology numerology;
};

/// Every feasible strategy tree over `hops` links within `num_slots`, with
/// its numerology, in canonical numerology order. When `capacity` is given
/// only numerologies fitting it along `path_nodes` are kept.
std::vector<EnumeratedNumerology> enumerate_numerologies(int hops, int num_slots,
                                                        std::span<const NodeId> path_nodes = {},
                                                        const CapacityGrid* capacity = nullptr,
                                                        const EnumerationLimits& limits = {});

/// Indented `(i,j)@slot` lines, children below their parent.
std::string to_debug_string(const StrategyTree& tree);

/// Compact pre-order form `(i,j)@t;(i,k)@t;...` used in allocation files.
std::string to_compact_string(const StrategyTree& tree);
StrategyTree parse_compact_tree(const std::string& text);

}  // namespace qsched
