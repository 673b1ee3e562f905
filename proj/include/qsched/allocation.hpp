#pragma once

#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qsched/instance.hpp"
#include "qsched/strategy.hpp"

namespace qsched {

/// The strategy chosen for one request.
struct Assignment {
  int path_index = 0;
  StrategyTree tree;
  Numerology numerology;
  double fidelity = 0.0;   // F(m)
  double path_prob = 0.0;  // Pr(p)

  double expected_fidelity() const { return path_prob * fidelity; }
};

/// At most one assignment per request, indexed by request position.
struct Allocation {
  std::vector<std::optional<Assignment>> chosen;
  /// max over (t, v) of load / capacity right after rounding (FNPR only).
  double pre_repair_overload = std::numeric_limits<double>::quiet_NaN();

  explicit Allocation(std::size_t num_requests = 0) : chosen(num_requests) {}

  double expected_fidelity_sum() const;
  int accepted() const;
};

/// Builds an assignment for `tree` on request `req`'s path `path_index`,
/// evaluating F(m). A fully decohered tree gets fidelity A.
Assignment make_assignment(const Instance& inst, int req, int path_index, const StrategyTree& tree);

/// Memory load per (slot, node) induced by the allocation.
SlotGrid<int> load_of(const Instance& inst, const Allocation& alloc);

/// max over cells of load / capacity (0 for an empty allocation).
double max_overload(const Instance& inst, const Allocation& alloc);

struct FeasibilityReport {
  bool ok = true;
  std::string reason;
};

/// Memory limits, tree validity, path membership, and (optionally) the
/// fidelity threshold.
FeasibilityReport check_feasible(const Instance& inst, const Allocation& alloc, bool enforce_threshold);

/// One line per accepted request:
/// `request=<id> path=<v1>-<v2>-... tree=<compact tree> fidelity=<F> prob=<Pr>`
void write_allocation(std::ostream& out, const Instance& inst, const Allocation& alloc);
std::string format_allocation(const Instance& inst, const Allocation& alloc);

/// Parses allocation records against `inst`; the path is matched to the
/// request's path set and F(m) is recomputed.
Allocation read_allocation(std::istream& in, const Instance& inst);

}  // namespace qsched
