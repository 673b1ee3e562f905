#pragma once

#include <optional>
#include <vector>

#include "qsched/allocation.hpp"
#include "qsched/dp.hpp"
#include "qsched/instance.hpp"
#include "qsched/strategy.hpp"

namespace qsched {

/// Exhaustive counterparts of the dynamic programs: every numerology of the
/// path that fits `capacity` is enumerated and scored directly.
std::optional<double> brute_force_max_fidelity(const Path& path, int num_slots,
                                               const CapacityGrid& capacity,
                                               const FidelityModel& model, double threshold,
                                               const EnumerationLimits& limits = {});
std::optional<double> brute_force_min_weight(const Path& path, int num_slots,
                                             const CapacityGrid& capacity, const WeightGrid& weights,
                                             const EnumerationLimits& limits = {});

enum class IlpObjective {
  ExpectedFidelity,  // sum of Pr(p) * F(m)
  SuccessProb,       // sum of Pr(p)
  Count,             // accepted requests
};

struct IlpOptions {
  IlpObjective objective = IlpObjective::ExpectedFidelity;
  bool enforce_threshold = true;
  EnumerationLimits limits{};
};

struct IlpResult {
  double optimum = 0.0;
  Allocation allocation;
};

/// Exact optimum of the integer program by depth-first search over every
/// (request, path, numerology) choice. Only for tiny instances.
IlpResult brute_force_ilp(const Instance& inst, const IlpOptions& options = {});

}  // namespace qsched
