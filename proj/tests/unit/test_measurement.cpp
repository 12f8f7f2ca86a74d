#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "telefock/measurement.hpp"
#include "telefock/optics.hpp"
#include "telefock/protocol.hpp"

using namespace telefock;

namespace {

const double kHalf = 1.0 / std::sqrt(2.0);

PureState singlet() {
  const ModeRegistry reg{"k_A", "k_B"};
  return superpose({{kHalf, basis_state(reg, {1, 0})}, {-kHalf, basis_state(reg, {0, 1})}});
}

PureState after_alice(double alpha_sq) {
  return alice_interference(assemble_total_state(InputQubit::from_alpha_sq(alpha_sq)), 0.0);
}

std::vector<Detector> threshold(std::initializer_list<const char*> modes, double eta) {
  std::vector<Detector> out;
  for (const char* m : modes) out.push_back({m, DetectorModel{eta, false}});
  return out;
}

}  // namespace

TEST(OutcomeDistribution, SingletSplitsEvenly) {
  const auto dist = outcome_distribution(singlet(), {"k_A"});
  EXPECT_NEAR(dist.probability({1}), 0.5, 1e-15);
  EXPECT_NEAR(dist.probability({0}), 0.5, 1e-15);
  EXPECT_NEAR(dist.total(), 1.0, 1e-15);
}

TEST(OutcomeDistribution, AlicePatternsAfterInterference) {
  const auto dist = outcome_distribution(after_alice(0.3), {"k_1", "k_2"});
  EXPECT_NEAR(dist.probability({0, 0}), 0.15, 1e-12);
  EXPECT_NEAR(dist.probability({2, 0}) + dist.probability({0, 2}), 0.35, 1e-12);
  EXPECT_NEAR(dist.probability({1, 0}), 0.25, 1e-12);
  EXPECT_NEAR(dist.probability({0, 1}), 0.25, 1e-12);
  EXPECT_NEAR(dist.probability({1, 1}), 0.0, 1e-28);
}

TEST(OutcomeDistribution, MarginalAndLabels) {
  const auto dist = outcome_distribution(after_alice(0.3), {"k_1", "k_2"});
  const auto k1 = dist.marginal({"k_1"});
  EXPECT_NEAR(k1.probability({1}), 0.25, 1e-12);
  EXPECT_NEAR(k1.total(), 1.0, 1e-12);
  EXPECT_EQ(dist.label_index("k_2"), 1u);
  EXPECT_THROW(dist.label_index("D9"), std::invalid_argument);
  EXPECT_THROW(outcome_distribution(singlet(), {"k_X"}), std::invalid_argument);
}

TEST(ConditionOnPattern, TeleportedBranch) {
  const double alpha = std::sqrt(0.3), beta = std::sqrt(0.7);
  const auto branch = condition_on_pattern(after_alice(0.3), {"k_1", "k_2"}, {1, 0});
  ASSERT_TRUE(branch);
  EXPECT_NEAR(branch.probability, 0.25, 1e-12);
  const ModeRegistry reg{"k_a~", "k_B"};
  // alpha |0_B 1_a~> + beta |1_B 0_a~>, up to a global phase.
  const auto expected = superpose({{alpha, basis_state(reg, {1, 0})}, {beta, basis_state(reg, {0, 1})}});
  const auto got = reorder_modes(*branch.state, reg);
  EXPECT_NEAR(fidelity(got, expected), 1.0, 1e-12);
}

TEST(ConditionOnPattern, IdleBranchesAndCertainty) {
  const auto total = after_alice(0.3);
  const auto idle = condition_on_pattern(total, {"k_1", "k_2"}, {0, 0});
  ASSERT_TRUE(idle);
  EXPECT_NEAR(idle.probability, 0.15, 1e-12);
  const auto both = reorder_modes(*idle.state, ModeRegistry{"k_a~", "k_B"});
  EXPECT_NEAR(std::norm(both.amplitude({1, 1})), 1.0, 1e-12);

  const auto never = condition_on_pattern(total, {"k_1", "k_2"}, {1, 1});
  EXPECT_FALSE(never);
  EXPECT_NEAR(never.probability, 0.0, 1e-28);

  const auto basis = basis_state(ModeRegistry{"k_1", "k_2"}, {1, 0});
  const auto sure = condition_on_pattern(basis, {"k_1", "k_2"}, {1, 0});
  ASSERT_TRUE(sure);
  EXPECT_DOUBLE_EQ(sure.probability, 1.0);
  EXPECT_EQ(sure.state->registry().size(), 0u);
}

TEST(ConditionOnPattern, BranchesSumToOne) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto state = alice_interference(assemble_total_state(InputQubit::from_alpha_sq(u(rng))), 6.0 * u(rng));
    double sum = 0.0;
    for (int n1 = 0; n1 <= 2; ++n1) {
      for (int n2 = 0; n1 + n2 <= 2; ++n2) sum += condition_on_pattern(state, {"k_1", "k_2"}, {n1, n2}).probability;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(ClickDistribution, EfficiencyOnSinglePhoton) {
  const auto s = basis_state(ModeRegistry{"k_1"}, {1});
  const auto dist = click_distribution(s, threshold({"k_1"}, 0.45));
  EXPECT_NEAR(dist.probability({1}), 0.45, 1e-15);
  EXPECT_NEAR(dist.probability({0}), 0.55, 1e-15);
}

TEST(ClickDistribution, ThresholdOnTwoPhotons) {
  const auto s = basis_state(ModeRegistry{"k_1"}, {2});
  const auto dist = click_distribution(s, threshold({"k_1"}, 0.45));
  EXPECT_NEAR(dist.probability({1}), 0.6975, 1e-14);
  EXPECT_NEAR(dist.probability({1}), threshold_click_probability(2, 0.45), 1e-14);
}

TEST(ClickDistribution, BinomialProperty) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 4;
    const double eta = u(rng);
    const auto s = basis_state(ModeRegistry{"m"}, {n}, 4);
    const auto dist = click_distribution(s, threshold({"m"}, eta));
    EXPECT_NEAR(dist.probability({1}), 1.0 - std::pow(1.0 - eta, n), 1e-12);
    EXPECT_NEAR(dist.total(), 1.0, 1e-12);
  }
}

TEST(ClickDistribution, IdealResolvingMatchesBornRule) {
  const auto state = after_alice(0.3);
  const std::vector<Detector> dets{{"k_1", {1.0, true}}, {"k_2", {1.0, true}}};
  const auto clicks = click_distribution(state, dets);
  const auto born = outcome_distribution(state, {"k_1", "k_2"});
  EXPECT_LT(total_variation(clicks, born), 1e-14);
}

TEST(ClickDistribution, RejectsBadEfficiency) {
  const auto s = basis_state(ModeRegistry{"k_1"}, {1});
  EXPECT_THROW(click_distribution(s, threshold({"k_1"}, 1.2)), std::invalid_argument);
  EXPECT_THROW(threshold_click_probability(1, -0.1), std::invalid_argument);
}

TEST(Coincidence, UnknownLabelAndHomExclusion) {
  ExperimentConfig cfg;
  cfg.input = InputQubit::from_alpha_sq(0.3);
  const auto dist = detection_distribution(cfg, 0.7);
  EXPECT_THROW(coincidence_probability(dist, "D1", "D9"), std::invalid_argument);
  // Psi2 photons bunch, so the two Alice detectors never fire together.
  EXPECT_NEAR(coincidence_probability(dist, "D1", "D2"), 0.0, 1e-28);
  EXPECT_NEAR(dist.total(), 1.0, 1e-12);
}

TEST(TotalVariation, LabelMismatchThrows) {
  const OutcomeDistribution a({"x"}, {{Occupation{0}, 1.0}});
  const OutcomeDistribution b({"y"}, {{Occupation{0}, 1.0}});
  EXPECT_THROW(total_variation(a, b), std::invalid_argument);
  EXPECT_DOUBLE_EQ(total_variation(a, a), 0.0);
}
