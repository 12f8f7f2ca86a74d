#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>

#include "telefock/emulation.hpp"
#include "telefock/philox.hpp"

using namespace telefock;

namespace {

constexpr double kPi = std::numbers::pi;

// Two points, phi = 0 and phi = pi.
ExperimentConfig symmetric_mc(std::uint64_t shots, std::uint64_t seed, double eta = 1.0) {
  ExperimentConfig cfg;
  cfg.input = InputQubit::from_alpha_sq(0.5);
  cfg.bsb_r_sq = 0.5;
  cfg.sweep = PhaseSweep{0.0, 2.0 * kPi, 2};
  cfg.shots = shots;
  cfg.seed = seed;
  cfg.eta = eta;
  return cfg;
}

double binomial_z(std::uint64_t k, std::uint64_t n, double p) {
  const double nn = static_cast<double>(n);
  return (static_cast<double>(k) - nn * p) / std::sqrt(nn * p * (1.0 - p));
}

}  // namespace

TEST(Philox, KnownAnswers) {
  using B = Philox4x32::Block;
  EXPECT_EQ(Philox4x32::encrypt(B{0, 0, 0, 0}, {0, 0}), (B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(Philox4x32::encrypt(B{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(Philox4x32::encrypt(B{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Philox, StreamsAreReproducibleAndDistinct) {
  Philox4x32 a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  int same_c = 0, same_d = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    same_c += x == c();
    same_d += x == d();
  }
  EXPECT_LT(same_c, 3);
  EXPECT_LT(same_d, 3);
  Philox4x32 u(1, 0);
  for (int i = 0; i < 10000; ++i) {
    const double x = u.uniform01();
    ASSERT_GE(x, 0.0);
    ASSERT_LT(x, 1.0);
  }
}

TEST(SamplePatterns, ChiSquareAcrossSeeds) {
  ExperimentConfig cfg;
  cfg.input = InputQubit::from_alpha_sq(0.3);
  cfg.bsb_r_sq = 0.2;
  cfg.eta = 0.45;
  const auto dist = detection_distribution(cfg, 1.0);
  const std::uint64_t n = 100000;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto hist = sample_patterns(dist, n, seed, 0);
    double chi2 = 0.0, lumped_expected = 0.0, lumped_observed = 0.0;
    int bins = 0;
    for (const auto& [pattern, p] : dist.probabilities()) {
      const double expected = p * static_cast<double>(n);
      const auto it = hist.find(pattern);
      const double observed = it == hist.end() ? 0.0 : static_cast<double>(it->second);
      if (expected < 5.0) {
        lumped_expected += expected;
        lumped_observed += observed;
        continue;
      }
      chi2 += (observed - expected) * (observed - expected) / expected;
      ++bins;
    }
    if (lumped_expected >= 5.0) {
      chi2 += (lumped_observed - lumped_expected) * (lumped_observed - lumped_expected) / lumped_expected;
      ++bins;
    }
    ASSERT_GE(bins, 3);
    const boost::math::chi_squared chi(bins - 1);
    EXPECT_GT(boost::math::cdf(boost::math::complement(chi, chi2)), 0.001) << "seed " << seed;
  }
}

TEST(SimulateCounts, BinomialJointCount) {
  const auto report = simulate_counts(symmetric_mc(100000, 12345));
  ASSERT_EQ(report.records.size(), 2u);
  const auto& at_zero = report.records[0];
  EXPECT_EQ(at_zero.phi, 0.0);
  // phi = 0 here is the bright point of D1-D1*: joint 1/4.
  EXPECT_LT(std::abs(binomial_z(*at_zero[DetectorPair::kD1D1s].counts, 100000, 0.25)), 4.0);
  EXPECT_EQ(*at_zero[DetectorPair::kD1D2s].counts, 0u);
  EXPECT_EQ(*report.records[1][DetectorPair::kD1D1s].counts, 0u);
  EXPECT_EQ(report.rng_algorithm, "philox4x32-10");
}

TEST(SimulateCounts, EfficiencyScalesCoincidencesByEtaSquared) {
  const double eta = 0.45;
  const auto report = simulate_counts(symmetric_mc(100000, 99, eta));
  for (const auto& rec : report.records) {
    std::uint64_t total = 0;
    for (const auto& p : rec.pairs) total += *p.counts;
    EXPECT_LT(std::abs(binomial_z(total, 100000, 0.5 * eta * eta)), 4.0);
  }
  const auto& at_zero = report.records[0];
  EXPECT_LT(std::abs(binomial_z(*at_zero[DetectorPair::kD1D1s].counts, 100000, 0.25 * eta * eta)), 4.0);
}

TEST(SimulateCounts, TalliesAddUpAndBranchesMatch) {
  auto cfg = symmetric_mc(20000, 5);
  cfg.input = InputQubit::from_alpha_sq(0.3);
  cfg.bsb_r_sq.reset();
  const auto report = simulate_counts(cfg);
  ASSERT_EQ(report.tallies.size(), report.records.size());
  for (const auto& t : report.tallies) {
    EXPECT_EQ(t.total(), 20000u);
    EXPECT_EQ(t.ambiguous, 0u);
    EXPECT_EQ(t.undetected, 0u);
    EXPECT_LT(std::abs(binomial_z(t.psi1, 20000, 0.15)), 4.0);
    EXPECT_LT(std::abs(binomial_z(t.psi2, 20000, 0.35)), 4.0);
    EXPECT_LT(std::abs(binomial_z(t.psi3, 20000, 0.25)), 4.0);
  }
  EXPECT_EQ(report.totals.total(), 40000u);
}

TEST(SimulateCounts, DeterministicUnderSeed) {
  auto cfg = symmetric_mc(5000, 77);
  cfg.sweep = PhaseSweep{0.0, 2.0 * kPi, 16};
  const auto a = simulate_counts(cfg);
  const auto b = simulate_counts(cfg);
  cfg.seed = 78;
  const auto c = simulate_counts(cfg);
  bool any_diff = false;
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    for (std::size_t p = 0; p < 4; ++p) {
      EXPECT_EQ(a.records[i].pairs[p].counts, b.records[i].pairs[p].counts);
      any_diff |= a.records[i].pairs[p].counts != c.records[i].pairs[p].counts;
    }
  }
  EXPECT_TRUE(any_diff);
  EXPECT_EQ(a.fits.size(), 4u);
}

TEST(SimulateCounts, Errors) {
  EXPECT_THROW(simulate_counts(symmetric_mc(0, 1)), std::invalid_argument);
  const OutcomeDistribution empty({"x"}, {});
  EXPECT_THROW(sample_patterns(empty, 10, 1, 0), std::invalid_argument);
}

TEST(AnalyticReport, FitsConditionalFringe) {
  auto cfg = symmetric_mc(0, 0);
  cfg.sweep = PhaseSweep{};
  const auto report = analytic_report(cfg);
  EXPECT_EQ(report.records.size(), 64u);
  EXPECT_TRUE(report.tallies.empty());
  ASSERT_EQ(report.fits.size(), 4u);
  for (const auto& [pair, fit] : report.fits) {
    EXPECT_NEAR(fit.visibility, 1.0, 1e-10);
    EXPECT_NEAR(fit.mean_level, 0.25, 1e-12);
  }
  cfg.normalization = Normalization::kJoint;
  cfg.eta = 0.5;
  for (const auto& [pair, fit] : analytic_report(cfg).fits) EXPECT_NEAR(fit.mean_level, 0.25 * 0.25 * 0.5, 1e-12);
}
