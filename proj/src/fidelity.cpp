#include "qsched/fidelity.hpp"

#include <cassert>
#include <cmath>
#include <string>

namespace qsched {

void FidelityModel::validate() const {
  if (!(A >= 0.0 && B > 0.0 && A + B <= 1.0 + 1e-15)) {
    throw std::invalid_argument("decoherence constants must satisfy 0 <= A < A+B <= 1");
  }
  if (!(coherence_ms > 0.0 && kappa > 0.0 && tau_ms > 0.0)) {
    throw std::invalid_argument("coherence time, kappa and slot length must be positive");
  }
}

double decoherence_curve(const FidelityModel& model, double t_ms) {
  if (t_ms < 0.0) {
    throw std::invalid_argument("decoherence_curve: negative time");
  }
  return model.A + model.B * std::exp(-std::pow(t_ms / model.coherence_ms, model.kappa));
}

bool in_inversion_domain(const FidelityModel& model, double fidelity) {
  return fidelity > model.A + FidelityModel::kDomainSlack &&
         fidelity <= model.A + model.B + 1e-15;
}

double invert_curve(const FidelityModel& model, double fidelity) {
  if (!in_inversion_domain(model, fidelity)) {
    throw DecoheredError("fidelity " + std::to_string(fidelity) +
                         " is outside the invertible range (A, A+B]");
  }
  const double ratio = model.B / (fidelity - model.A);
  // ratio < 1 only through rounding at the A+B end
  if (ratio <= 1.0) {
    return 0.0;
  }
  return model.coherence_ms * std::pow(std::log(ratio), 1.0 / model.kappa);
}

double decay_one_slot(const FidelityModel& model, double fidelity) {
  return decoherence_curve(model, invert_curve(model, fidelity) + model.tau_ms);
}

double swap_fidelity(double f1, double f2) {
  // Werner-parameter form of f1 f2 + (1 - f1)(1 - f2) / 3; keeps 0.25 exact
  return 0.25 + (4.0 * f1 - 1.0) * (4.0 * f2 - 1.0) / 12.0;
}

double swap_with_decay(const FidelityModel& model, double f1, double f2) {
  return swap_fidelity(decay_one_slot(model, f1), decay_one_slot(model, f2));
}

double link_success_prob(double lambda_per_km, double length_km, int attempts) {
  if (attempts < 1) {
    throw std::invalid_argument("link_success_prob: at least one attempt is required");
  }
  assert(lambda_per_km >= 0.0 && length_km >= 0.0);
  const double single = std::exp(-lambda_per_km * length_km);
  return 1.0 - std::pow(1.0 - single, attempts);
}

double path_success_prob(std::span<const double> link_probs,
                         std::span<const double> swap_probs) {
  double p = 1.0;
  for (double q : link_probs) p *= q;
  for (double q : swap_probs) p *= q;
  return p;
}

}  // namespace qsched
