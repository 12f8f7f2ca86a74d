#include "telefock/emulation.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "telefock/parallel.hpp"
#include "telefock/philox.hpp"

namespace telefock {

namespace {

// Reading layout: (D1, D2, D1*, D2*).
ShotTally classify_reading(const Occupation& r, std::uint64_t n) {
  ShotTally t;
  const bool d1 = r[0] > 0, d2 = r[1] > 0, bob = r[2] > 0 || r[3] > 0;
  if (d1 && d2) {
    t.ambiguous = n;
  } else if (!d1 && !d2) {
    (bob ? t.psi1 : t.undetected) = n;
  } else if (!bob) {
    t.psi2 = n;
  } else {
    (d1 ? t.psi3 : t.psi4) = n;
  }
  return t;
}

std::uint64_t pair_count(const std::map<Occupation, std::uint64_t>& hist, DetectorPair pair) {
  const std::size_t alice = alice_detector(pair) == detector::kD1 ? 0 : 1;
  const std::size_t bob = bob_detector(pair) == detector::kD1s ? 2 : 3;
  std::uint64_t n = 0;
  for (const auto& [r, c] : hist) {
    if (r[alice] > 0 && r[1 - alice] == 0 && r[bob] > 0) n += c;
  }
  return n;
}

void fit_pairs(RunReport& report, bool use_counts) {
  for (auto pair : kAllPairs) {
    std::vector<FringeSample> samples;
    for (const auto& rec : report.records) {
      double v = 0.0;
      if (use_counts) {
        v = static_cast<double>(rec[pair].counts.value_or(0));
      } else {
        v = report.config.normalization == Normalization::kJoint ? rec[pair].joint : rec[pair].conditional;
      }
      samples.push_back({rec.phi, v});
    }
    try {
      report.fits.emplace(pair, fit_visibility(samples));
    } catch (const std::invalid_argument&) {
      // Too few or too clustered points, or a dark pair: no fit for this pair.
    }
  }
}

}  // namespace

ShotTally& ShotTally::operator+=(const ShotTally& o) {
  psi1 += o.psi1;
  psi2 += o.psi2;
  psi3 += o.psi3;
  psi4 += o.psi4;
  undetected += o.undetected;
  ambiguous += o.ambiguous;
  return *this;
}

std::map<Occupation, std::uint64_t> sample_patterns(const OutcomeDistribution& dist, std::uint64_t shots,
                                                    std::uint64_t seed, std::uint64_t stream) {
  std::vector<Occupation> patterns;
  std::vector<double> cdf;
  double acc = 0.0;
  for (const auto& [pattern, p] : dist.probabilities()) {
    if (p <= 0.0) continue;
    acc += p;
    patterns.push_back(pattern);
    cdf.push_back(acc);
  }
  if (patterns.empty()) throw std::invalid_argument("cannot sample an empty distribution");

  Philox4x32 rng(seed, stream);
  std::vector<std::uint64_t> hits(patterns.size(), 0);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform01() * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), patterns.size() - 1);
    ++hits[idx];
  }
  std::map<Occupation, std::uint64_t> out;
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    if (hits[i]) out.emplace(patterns[i], hits[i]);
  }
  return out;
}

RunReport simulate_counts(const ExperimentConfig& config) {
  config.validate();
  if (config.shots == 0) throw std::invalid_argument("Monte Carlo run requested with zero shots");
  const auto start = std::chrono::steady_clock::now();

  RunReport report;
  report.config = config;
  report.rng_algorithm = std::string(Philox4x32::kName);
  const auto phases = config.phase_points();

  struct Point {
    FringeRecord record;
    ShotTally tally;
  };
  auto points = parallel_map(phases.size(), [&](std::size_t i) {
    Point pt;
    pt.record = run_fringe(config, phases[i]);
    const auto hist = sample_patterns(detection_distribution(config, phases[i].phi), config.shots, config.seed, i);
    for (const auto& [reading, n] : hist) pt.tally += classify_reading(reading, n);
    for (auto pair : kAllPairs) pt.record[pair].counts = pair_count(hist, pair);
    return pt;
  });

  for (auto& pt : points) {
    report.totals += pt.tally;
    report.tallies.push_back(pt.tally);
    report.records.push_back(std::move(pt.record));
  }
  fit_pairs(report, true);
  report.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

RunReport analytic_report(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.config = config;
  report.records = run_sweep(config);
  fit_pairs(report, false);
  report.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace telefock
