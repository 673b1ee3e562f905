#include <gtest/gtest.h>

#include <random>

#include "qsched/fidelity.hpp"

using namespace qsched;

// Expected values below were computed independently from the closed forms.

TEST(Fidelity, CurveAnchors) {
  const FidelityModel m;
  EXPECT_DOUBLE_EQ(decoherence_curve(m, 0.0), 1.0);
  EXPECT_NEAR(decoherence_curve(m, 40.0), 0.525909580878582, 1e-12);
  EXPECT_NEAR(invert_curve(m, 0.98), 6.576159655959629, 1e-9);
}

TEST(Fidelity, InverseRoundTrip) {
  const FidelityModel m;
  for (double t : {0.5, 2.0, 10.0, 37.5, 80.0}) {
    EXPECT_NEAR(invert_curve(m, decoherence_curve(m, t)), t, 1e-8);
  }
}

TEST(Fidelity, InverseRejectsOutsideDomain) {
  const FidelityModel m;
  EXPECT_THROW(invert_curve(m, 0.25), DecoheredError);
  EXPECT_THROW(invert_curve(m, 0.2), DecoheredError);
  EXPECT_THROW(invert_curve(m, 1.01), DecoheredError);
}

TEST(Fidelity, OneSlotDecay) {
  const FidelityModel m;
  EXPECT_NEAR(decay_one_slot(m, 1.0), 0.998127341798095, 1e-12);
  EXPECT_NEAR(decay_one_slot(m, 0.98), 0.966303625477196, 1e-12);
  for (double f : {0.3, 0.5, 0.7, 0.9, 0.99}) EXPECT_LT(decay_one_slot(m, f), f);
}

TEST(Fidelity, Swap) {
  EXPECT_NEAR(swap_fidelity(0.975, 0.975), 0.950833333333333, 1e-12);
  EXPECT_DOUBLE_EQ(swap_fidelity(1.0, 0.8), 0.8);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.25, 1.0);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(swap_fidelity(0.25, u(rng)), 0.25);
}

TEST(Fidelity, SwapWithDecay) {
  const FidelityModel m;
  EXPECT_NEAR(swap_with_decay(m, 0.98, 0.98), 0.934121178495701, 1e-12);
  EXPECT_NEAR(swap_with_decay(m, 0.9, 0.8), 0.681944543111251, 1e-12);
}

TEST(Fidelity, LinkProbability) {
  EXPECT_NEAR(link_success_prob(0.045, 30.0, 8), 0.909339322199749, 1e-12);
  EXPECT_DOUBLE_EQ(link_success_prob(0.045, 0.0, 1), 1.0);
  EXPECT_THROW(link_success_prob(0.045, 30.0, 0), std::invalid_argument);
  // more attempts never hurt
  EXPECT_LT(link_success_prob(0.045, 30.0, 4), link_success_prob(0.045, 30.0, 8));
}

TEST(Fidelity, PathProbability) {
  const std::vector<double> links{0.9, 0.9, 0.9};
  const std::vector<double> swaps{0.9, 0.9};
  EXPECT_NEAR(path_success_prob(links, swaps), 0.59049, 1e-12);
}

TEST(Fidelity, ModelValidation) {
  FidelityModel m;
  m.coherence_ms = 0.0;
  EXPECT_THROW(m.validate(), std::invalid_argument);
}
