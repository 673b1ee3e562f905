#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qsched/allocation.hpp"
#include "qsched/instance.hpp"
#include "qsched/rng.hpp"
#include "qsched/strategy.hpp"

namespace qsched {

class SolverDivergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Dual weights of the packing program: one per request (alpha) and one per
/// (slot, node) memory cell (beta).
struct DualWeights {
  std::vector<double> alpha;
  WeightGrid beta;
};

struct FractionalColumn {
  int request = 0;
  int path_index = 0;
  StrategyTree tree;
  Numerology numerology;
  double value = 0.0;  // x after the final scaling
};

struct FractionalSolution {
  std::vector<FractionalColumn> columns;  // in order of first generation
  double objective = 0.0;                 // sum of Pr(p) * x
  long long iterations = 0;
};

struct FractionalOptions {
  double epsilon = 0.1;
  /// Defaults to 10 * eps^-2 * eta * ln(eta), eta = |V||T| + |I|.
  std::optional<long long> max_iterations;
};

/// Multiplicative-weights packing solve of the relaxed program
/// max sum Pr(p) x subject to one-per-request and memory rows, with the
/// min-weight DP as column oracle. Throws SolverDivergenceError when the
/// iteration cap is hit.
FractionalSolution solve_fractional(const Instance& inst, const FractionalOptions& options = {});

/// One uniform draw per request over the cumulative values of its columns;
/// the leftover mass selects nothing. Memory may be overloaded afterwards.
Allocation randomized_round(const Instance& inst, const FractionalSolution& frac, Rng& rng);

/// Restores feasibility: drops sub-threshold picks (Tetris mode), evicts the
/// lowest expected-fidelity occupants of the most overloaded cell until no
/// cell is overloaded, then refills unserved requests from the fractional
/// columns in non-increasing value order.
Allocation repair(const Allocation& tentative, const FractionalSolution& frac, const Instance& inst,
                  FnprMode mode);

struct FnprResult {
  FractionalSolution fractional;
  Allocation rounded;  // before repair
  Allocation allocation;
};

FnprResult fnpr_run(const Instance& inst, FnprMode mode, const FractionalOptions& options, Rng& rng);

/// Full pipeline; allocation.pre_repair_overload holds the rounding overload.
Allocation fnpr_solve(const Instance& inst, FnprMode mode, double epsilon, Rng& rng);

}  // namespace qsched
