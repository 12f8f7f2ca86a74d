#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "telefock/measurement.hpp"
#include "telefock/optics.hpp"

using namespace telefock;

namespace {

constexpr double kPi = std::numbers::pi;
const double kHalf = 1.0 / std::sqrt(2.0);

BeamSplitter in_place(double r_sq) { return BeamSplitter::from_reflectivity(r_sq, "a", "b", "a", "b"); }

void expect_same_state(const PureState& x, const PureState& y, double tol) {
  ASSERT_EQ(x.registry(), y.registry());
  for (const auto& [occ, amp] : x.terms()) EXPECT_NEAR(std::abs(amp - y.amplitude(occ)), 0.0, tol) << to_string(occ);
  for (const auto& [occ, amp] : y.terms()) EXPECT_NEAR(std::abs(amp - x.amplitude(occ)), 0.0, tol) << to_string(occ);
}

PureState random_two_mode_state(std::mt19937_64& rng, int cap) {
  std::normal_distribution<double> g;
  PureState::TermMap terms;
  for (int n = 0; n <= cap; ++n) {
    for (int m = 0; m + n <= cap; ++m) terms[{n, m}] = {g(rng), g(rng)};
  }
  return normalize(PureState(ModeRegistry{"a", "b"}, terms, cap));
}

}  // namespace

TEST(BeamSplitter, Validation) {
  EXPECT_THROW((BeamSplitter{0.5, 0.5, "a", "b", "c", "d"}.validate()), std::invalid_argument);
  EXPECT_THROW((BeamSplitter{1.0, 0.0, "a", "a", "c", "d"}.validate()), std::invalid_argument);
  EXPECT_THROW((BeamSplitter{1.0, 0.0, "a", "b", "c", "c"}.validate()), std::invalid_argument);
  EXPECT_THROW(BeamSplitter::from_reflectivity(1.2, "a", "b", "a", "b"), std::invalid_argument);
  EXPECT_NO_THROW(BeamSplitter::balanced("a", "b", "c", "d"));
}

TEST(BeamSplitter, SinglePhotonBalanced) {
  const auto in = basis_state(ModeRegistry{"k_S", "k_A"}, {1, 0});
  const auto out = apply_beam_splitter(in, BeamSplitter::balanced("k_S", "k_A", "k_1", "k_2"));
  EXPECT_EQ(out.registry(), (ModeRegistry{"k_1", "k_2"}));
  EXPECT_NEAR(std::abs(out.amplitude({1, 0}) - kHalf), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out.amplitude({0, 1}) - kHalf), 0.0, 1e-15);
}

TEST(BeamSplitter, HongOuMandelNull) {
  const auto in = basis_state(ModeRegistry{"k_S", "k_A"}, {1, 1});
  const auto out = apply_beam_splitter(in, BeamSplitter::balanced("k_S", "k_A", "k_1", "k_2"));
  EXPECT_LT(std::abs(out.amplitude({1, 1})), 1e-14);
  EXPECT_EQ(out.size(), 2u);
  // (t c + r d)(r c - t d) = rt c^2 - rt d^2 -> 2^(-1/2)(|2,0> - |0,2>)
  EXPECT_NEAR(std::abs(out.amplitude({2, 0}) - kHalf), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out.amplitude({0, 2}) + kHalf), 0.0, 1e-15);
  EXPECT_NEAR(out.norm_squared(), 1.0, 1e-12);
}

TEST(BeamSplitter, UnbalancedSinglePhoton) {
  // a^dag -> t c^dag + r d^dag with r^2 = 0.2
  const auto out = apply_beam_splitter(basis_state(ModeRegistry{"a", "b"}, {1, 0}), in_place(0.2));
  EXPECT_NEAR(std::abs(out.amplitude({1, 0}) - std::sqrt(0.8)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out.amplitude({0, 1}) - std::sqrt(0.2)), 0.0, 1e-15);
}

TEST(BeamSplitter, CapExceededNamesTerm) {
  const auto in = basis_state(ModeRegistry{"a", "b"}, {1, 1}, 1);
  try {
    apply_beam_splitter(in, in_place(0.5));
    FAIL() << "expected cap error";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("exceeds photon cap 1"), std::string::npos) << e.what();
  }
}

TEST(BeamSplitter, OutputNameClash) {
  const auto in = basis_state(ModeRegistry{"a", "b", "c"}, {1, 0, 0});
  EXPECT_THROW(apply_beam_splitter(in, BeamSplitter::balanced("a", "b", "c", "d")), std::invalid_argument);
}

TEST(BeamSplitter, InvolutionAndUnitarityProperty) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int cap = 2 + trial % 3;  // caps 2..4, total photons <= cap keeps every output in range
    const auto state = random_two_mode_state(rng, cap);
    const auto bs = in_place(u(rng));
    const auto once = apply_beam_splitter(state, bs);
    EXPECT_NEAR(once.norm_squared(), 1.0, 1e-12);
    expect_same_state(apply_beam_splitter(once, bs), state, 1e-12);
  }
}

TEST(BeamSplitter, SinglePhotonSectorMatchesMatrix) {
  // Independent route: the 2x2 matrix [[t, r], [r, -t]] acting on amplitudes (c_a, c_b).
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 100; ++trial) {
    const double r_sq = u(rng);
    const double r = std::sqrt(r_sq), t = std::sqrt(1.0 - r_sq);
    Eigen::Vector2cd in(Amplitude(g(rng), g(rng)), Amplitude(g(rng), g(rng)));
    in.normalize();
    Eigen::Matrix2cd m;
    m << t, r, r, -t;
    const Eigen::Vector2cd expected = m * in;

    const ModeRegistry reg{"a", "b"};
    const auto state = superpose({{in(0), basis_state(reg, {1, 0})}, {in(1), basis_state(reg, {0, 1})}});
    const auto out = apply_beam_splitter(state, BeamSplitter::from_reflectivity(r_sq, "a", "b", "a", "b"));
    EXPECT_NEAR(std::abs(out.amplitude({1, 0}) - expected(0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(out.amplitude({0, 1}) - expected(1)), 0.0, 1e-12);
  }
}

TEST(PhaseShift, Examples) {
  const ModeRegistry reg{"k_S"};
  const auto vac = basis_state(reg, {0});
  expect_same_state(apply_phase_shift(vac, "k_S", 1.234), vac, 0.0);

  const auto one = apply_phase_shift(basis_state(reg, {1}), "k_S", kPi);
  EXPECT_NEAR(std::abs(one.amplitude({1}) - Amplitude(-1.0, 0.0)), 0.0, 1e-15);

  const auto two = apply_phase_shift(basis_state(reg, {2}), "k_S", kPi / 2);
  EXPECT_NEAR(std::abs(two.amplitude({2}) - Amplitude(-1.0, 0.0)), 0.0, 1e-15);

  EXPECT_THROW(apply_phase_shift(vac, "k_B", 0.1), std::invalid_argument);
}

TEST(PhaseShift, AdditiveAndNormPreserving) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto state = random_two_mode_state(rng, 3);
    const double p1 = u(rng), p2 = u(rng);
    const auto split = apply_phase_shift(apply_phase_shift(state, "a", p1), "a", p2);
    const auto joined = apply_phase_shift(state, "a", p1 + p2);
    expect_same_state(split, joined, 1e-12);
    EXPECT_NEAR(joined.norm_squared(), state.norm_squared(), 1e-12);
  }
}

TEST(PauliZ, Examples) {
  const ModeRegistry reg{"k_B"};
  const double a = std::sqrt(0.3), b = std::sqrt(0.7);
  const auto phi = superpose({{a, basis_state(reg, {0})}, {b, basis_state(reg, {1})}});
  const auto flipped = apply_pauli_z(phi, "k_B");
  EXPECT_EQ(flipped.amplitude({0}), phi.amplitude({0}));
  EXPECT_EQ(flipped.amplitude({1}), -phi.amplitude({1}));

  const auto vac = basis_state(reg, {0});
  expect_same_state(apply_pauli_z(vac, "k_B"), vac, 0.0);
  expect_same_state(apply_pauli_z(flipped, "k_B"), phi, 0.0);

  // Agrees with a pi phase shift on the qubit subspace.
  expect_same_state(flipped, apply_phase_shift(phi, "k_B", kPi), 1e-15);
}

TEST(PauliZ, RejectsTwoPhotons) {
  const auto s = basis_state(ModeRegistry{"k_B"}, {2});
  EXPECT_THROW(apply_pauli_z(s, "k_B"), std::invalid_argument);
}

TEST(Loss, Lossless) {
  const auto s = basis_state(ModeRegistry{"k_1"}, {1});
  const auto out = apply_loss(s, "k_1", 1.0, "loss");
  EXPECT_EQ(out.registry(), (ModeRegistry{"k_1", "loss"}));
  EXPECT_NEAR(std::abs(out.amplitude({1, 0}) - 1.0), 0.0, 1e-15);
  EXPECT_EQ(out.size(), 1u);
}

TEST(Loss, Opaque) {
  const auto out = apply_loss(basis_state(ModeRegistry{"k_1"}, {1}), "k_1", 0.0, "loss");
  EXPECT_NEAR(std::norm(out.amplitude({0, 1})), 1.0, 1e-15);
  const auto dist = outcome_distribution(out, {"k_1"});
  EXPECT_NEAR(dist.probability({1}), 0.0, 1e-15);
}

TEST(Loss, DetectorEfficiency) {
  const auto out = apply_loss(basis_state(ModeRegistry{"k_1"}, {1}), "k_1", 0.45, "loss");
  EXPECT_NEAR(outcome_distribution(out, {"k_1"}).probability({1}), 0.45, 1e-15);
  EXPECT_NEAR(out.norm_squared(), 1.0, 1e-12);
}

TEST(Loss, Errors) {
  const auto s = basis_state(ModeRegistry{"k_1"}, {1});
  EXPECT_THROW(apply_loss(s, "k_1", 1.5, "loss"), std::invalid_argument);
  EXPECT_THROW(apply_loss(s, "k_1", -0.1, "loss"), std::invalid_argument);
  EXPECT_THROW(apply_loss(s, "k_1", 0.5, "k_1"), std::invalid_argument);
  EXPECT_THROW(apply_loss(s, "k_9", 0.5, "loss"), std::invalid_argument);
}

TEST(Mirror, Calibration) {
  EXPECT_EQ(mirror_to_phase(0.0, 0.7276), 0.0);
  EXPECT_NEAR(phase_to_mirror(kPi, 0.7276), 0.7276 / std::pow(2.0, 1.5), 1e-15);
  EXPECT_NEAR(phase_to_mirror(kPi, 0.7276), 0.2572, 5e-5);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    const double x = u(rng);
    EXPECT_NEAR(phase_to_mirror(mirror_to_phase(x, 0.7276), 0.7276), x, 1e-12);
  }
  EXPECT_THROW(mirror_to_phase(1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(phase_to_mirror(1.0, -1.0), std::invalid_argument);
}

TEST(PhaseSetting, Consistency) {
  const auto p = PhaseSetting::from_mirror(0.1, 0.7276);
  EXPECT_NO_THROW(p.validate());
  PhaseSetting bad{1.0, 0.1, 0.7276};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  PhaseSetting no_lambda{1.0, 0.1, std::nullopt};
  EXPECT_THROW(no_lambda.validate(), std::invalid_argument);
}
