#include "qsched/dp.hpp"

#include <cassert>
#include <cstdint>
#include <limits>
#include <vector>

namespace qsched {
namespace {

enum class Step : std::uint8_t { None, Leaf, Idle, Split };

struct Choice {
  Step step = Step::None;
  std::uint8_t split = 0;
  std::uint8_t reserve_right = 0;  // 1: the right child holds two units at the split
};

// Flat memo over (t, i, j, sigma_s, sigma_d) for one path.
class Table {
public:
  Table(int num_slots, int n) : slots_(num_slots), n_(n) {
    const std::size_t size = static_cast<std::size_t>(num_slots + 1) * n * n * 4;
    value.assign(size, 0.0);
    aux.assign(size, 0.0);
    choice.assign(size, Choice{});
  }
  std::size_t at(int t, int i, int j, int ss, int sd) const {
    return ((static_cast<std::size_t>(t) * n_ + i) * n_ + j) * 4 + (ss - 1) * 2 + (sd - 1);
  }
  std::vector<double> value;
  std::vector<double> aux;  // max-fidelity: value after one more idle slot
  std::vector<Choice> choice;

private:
  int slots_;
  int n_;
};

StrategyTree rebuild(const Table& table, int t, int i, int j, int ss, int sd) {
  for (;;) {
    const Choice c = table.choice[table.at(t, i, j, ss, sd)];
    switch (c.step) {
      case Step::Leaf:
        return StrategyTree::leaf(i, t);
      case Step::Idle:
        --t;
        continue;
      case Step::Split: {
        const int k = c.split;
        const int left_sd = c.reserve_right ? 1 : 2;
        const int right_ss = c.reserve_right ? 2 : 1;
        return StrategyTree::join(rebuild(table, t - 1, i, k, ss, left_sd),
                                  rebuild(table, t - 1, k, j, right_ss, sd), t);
      }
      case Step::None:
        break;
    }
    assert(false && "rebuild reached an infeasible state");
    return StrategyTree::leaf(i, t);
  }
}

bool has_room(const CapacityGrid& cap, int t, NodeId v, int sigma) {
  return cap(t, v) >= sigma;
}

}  // namespace

std::optional<DpResult> max_fidelity_numerology(const Path& path, int num_slots,
                                                const CapacityGrid& capacity,
                                                const FidelityModel& model, double threshold) {
  const int n = static_cast<int>(path.nodes.size());
  if (n < 2 || num_slots < 2) return std::nullopt;
  assert(num_slots <= capacity.num_slots());
  constexpr double kNone = -std::numeric_limits<double>::infinity();
  Table table(num_slots, n);
  std::fill(table.value.begin(), table.value.end(), kNone);
  std::fill(table.aux.begin(), table.aux.end(), kNone);

  for (int t = 2; t <= num_slots; ++t) {
    for (int i = 0; i < n - 1; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const NodeId s = path.nodes[i];
        const NodeId d = path.nodes[j];
        for (int ss = 1; ss <= 2; ++ss) {
          for (int sd = 1; sd <= 2; ++sd) {
            const std::size_t here = table.at(t, i, j, ss, sd);
            double best = kNone;
            Choice pick;
            if (j == i + 1 && has_room(capacity, t, s, ss) && has_room(capacity, t - 1, s, ss) &&
                has_room(capacity, t, d, sd) && has_room(capacity, t - 1, d, sd)) {
              best = path.link_fidelity[i];
              pick.step = Step::Leaf;
            } else if (has_room(capacity, t, s, ss) && has_room(capacity, t, d, sd)) {
              const double idle = table.aux[table.at(t - 1, i, j, ss, sd)];
              if (idle > best) {
                best = idle;
                pick = Choice{Step::Idle, 0, 0};
              }
              for (int k = i + 1; k < j; ++k) {
                for (int reserve_right = 0; reserve_right <= 1; ++reserve_right) {
                  const double a = table.aux[table.at(t - 1, i, k, ss, reserve_right ? 1 : 2)];
                  const double b = table.aux[table.at(t - 1, k, j, reserve_right ? 2 : 1, sd)];
                  if (a == kNone || b == kNone) continue;
                  const double f = swap_fidelity(a, b);
                  if (f > best && in_inversion_domain(model, f)) {
                    best = f;
                    pick = Choice{Step::Split, static_cast<std::uint8_t>(k),
                                  static_cast<std::uint8_t>(reserve_right)};
                  }
                }
              }
            }
            table.value[here] = best;
            table.choice[here] = pick;
            if (best != kNone && in_inversion_domain(model, best)) {
              const double next = decay_one_slot(model, best);
              table.aux[here] = in_inversion_domain(model, next) ? next : kNone;
            }
          }
        }
      }
    }
  }

  int best_t = -1;
  double best = kNone;
  for (int t = 2; t <= num_slots; ++t) {
    const double v = table.value[table.at(t, 0, n - 1, 1, 1)];
    if (v != kNone && v >= best) {
      best = v;
      best_t = t;
    }
  }
  if (best_t < 0 || best < threshold) return std::nullopt;
  return DpResult{rebuild(table, best_t, 0, n - 1, 1, 1), best};
}

std::optional<DpResult> min_weight_numerology(const Path& path, int num_slots,
                                              const CapacityGrid& capacity,
                                              const WeightGrid& weights) {
  const int n = static_cast<int>(path.nodes.size());
  if (n < 2 || num_slots < 2) return std::nullopt;
  assert(num_slots <= capacity.num_slots() && num_slots <= weights.num_slots());
  constexpr double kNone = std::numeric_limits<double>::infinity();
  Table table(num_slots, n);
  std::fill(table.value.begin(), table.value.end(), kNone);

  for (int t = 2; t <= num_slots; ++t) {
    for (int i = 0; i < n - 1; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const NodeId s = path.nodes[i];
        const NodeId d = path.nodes[j];
        const double level = weights(t, s) + weights(t, d);
        for (int ss = 1; ss <= 2; ++ss) {
          for (int sd = 1; sd <= 2; ++sd) {
            const std::size_t here = table.at(t, i, j, ss, sd);
            double best = kNone;
            Choice pick;
            if (j == i + 1 && has_room(capacity, t, s, ss) && has_room(capacity, t - 1, s, ss) &&
                has_room(capacity, t, d, sd) && has_room(capacity, t - 1, d, sd)) {
              best = level + weights(t - 1, s) + weights(t - 1, d);
              pick.step = Step::Leaf;
            } else if (has_room(capacity, t, s, ss) && has_room(capacity, t, d, sd)) {
              double sub = kNone;
              const double idle = table.value[table.at(t - 1, i, j, ss, sd)];
              if (idle < sub) {
                sub = idle;
                pick = Choice{Step::Idle, 0, 0};
              }
              for (int k = i + 1; k < j; ++k) {
                for (int reserve_right = 0; reserve_right <= 1; ++reserve_right) {
                  const double a = table.value[table.at(t - 1, i, k, ss, reserve_right ? 1 : 2)];
                  const double b = table.value[table.at(t - 1, k, j, reserve_right ? 2 : 1, sd)];
                  if (a == kNone || b == kNone) continue;
                  if (a + b < sub) {
                    sub = a + b;
                    pick = Choice{Step::Split, static_cast<std::uint8_t>(k),
                                  static_cast<std::uint8_t>(reserve_right)};
                  }
                }
              }
              if (sub != kNone) best = level + sub;
            }
            table.value[here] = best;
            table.choice[here] = pick;
          }
        }
      }
    }
  }

  int best_t = -1;
  double best = kNone;
  for (int t = 2; t <= num_slots; ++t) {
    const double v = table.value[table.at(t, 0, n - 1, 1, 1)];
    if (v < best) {
      best = v;
      best_t = t;
    }
  }
  if (best_t < 0) return std::nullopt;
  return DpResult{rebuild(table, best_t, 0, n - 1, 1, 1), best};
}

}  // namespace qsched
