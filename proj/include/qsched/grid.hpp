#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace qsched {

using NodeId = int;

/// Dense table over (slot, node) with slots numbered 1..num_slots.
template <typename T>
class SlotGrid {
public:
  SlotGrid() = default;
  SlotGrid(int num_slots, int num_nodes, T init = T{})
      : slots_(num_slots), nodes_(num_nodes),
        cells_(static_cast<std::size_t>(num_slots) * static_cast<std::size_t>(num_nodes), init) {}

  int num_slots() const { return slots_; }
  int num_nodes() const { return nodes_; }

  T& operator()(int slot, NodeId v) { return cells_[index(slot, v)]; }
  const T& operator()(int slot, NodeId v) const { return cells_[index(slot, v)]; }

  std::vector<T>& raw() { return cells_; }
  const std::vector<T>& raw() const { return cells_; }

  bool operator==(const SlotGrid&) const = default;

private:
  std::size_t index(int slot, NodeId v) const {
    assert(slot >= 1 && slot <= slots_ && v >= 0 && v < nodes_);
    return static_cast<std::size_t>(slot - 1) * static_cast<std::size_t>(nodes_) +
           static_cast<std::size_t>(v);
  }

  int slots_ = 0;
  int nodes_ = 0;
  std::vector<T> cells_;
};

using CapacityGrid = SlotGrid<int>;
using WeightGrid = SlotGrid<double>;

}  // namespace qsched
