#pragma once

#include <iosfwd>
#include <string>

#include "qsched/instance.hpp"

namespace qsched {

/// Line-oriented topology text:
///   node <id> <x_km> <y_km> <capacity> <swap_prob>
///   edge <u> <v> <length_km> <init_fidelity>
/// Capacity is written from slot 1 (it is constant across slots).
void write_topology(std::ostream& out, const Topology& topo);

/// Link probabilities are left at 1; build_instance applies the link model.
Topology read_topology(std::istream& in, int num_slots);
Topology load_topology(const std::string& file, int num_slots);

/// Topology lines followed by `request <id> <v1>-<v2>-...` per path.
void write_instance(std::ostream& out, const Instance& inst);

}  // namespace qsched
