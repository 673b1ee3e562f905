#pragma once

#include <span>
#include <stdexcept>

namespace qsched {

/// Raised when a fidelity sits at or below the decoherence asymptote (or
/// above A + B) and therefore has no preimage on the decoherence curve.
class DecoheredError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Decoherence constants plus the slot length. Times are milliseconds.
///
/// F(t) = A + B * exp(-(t / coherence_ms)^kappa)
struct FidelityModel {
  double A = 0.25;
  double B = 0.75;
  double coherence_ms = 40.0;
  double kappa = 2.0;
  double tau_ms = 2.0;

  /// Throws std::invalid_argument when the constants violate
  /// 0 <= A < A + B <= 1 or any of coherence_ms, kappa, tau_ms is not positive.
  void validate() const;

  /// Inputs closer than this to A are treated as fully decohered.
  static constexpr double kDomainSlack = 1e-12;
};

double decoherence_curve(const FidelityModel& model, double t_ms);

/// Inverse of decoherence_curve. Throws DecoheredError outside (A, A + B].
double invert_curve(const FidelityModel& model, double fidelity);

/// Fidelity after idling one slot of length model.tau_ms.
double decay_one_slot(const FidelityModel& model, double fidelity);

/// Werner-state swap: F1 F2 + (1 - F1)(1 - F2) / 3.
double swap_fidelity(double f1, double f2);

/// Both inputs idle one slot, then get swapped.
double swap_with_decay(const FidelityModel& model, double f1, double f2);

/// True when `fidelity` can be inverted (and hence decayed) under `model`.
bool in_inversion_domain(const FidelityModel& model, double fidelity);

/// 1 - (1 - exp(-lambda * length))^attempts
double link_success_prob(double lambda_per_km, double length_km, int attempts);

/// Product of every link probability and every interior swap probability.
double path_success_prob(std::span<const double> link_probs,
                         std::span<const double> swap_probs);

}  // namespace qsched
