#ifndef TELEFOCK_EMULATION_HPP
#define TELEFOCK_EMULATION_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "telefock/fitting.hpp"
#include "telefock/measurement.hpp"
#include "telefock/protocol.hpp"

namespace telefock {

/// Per-shot classification of a (D1, D2, D1*, D2*) reading as the coincidence
/// circuit sees it: no Alice click but a Bob click is the Psi1 idle event, an
/// Alice click without Bob is Psi2, an Alice single click with Bob is Psi3/Psi4.
struct ShotTally {
  std::uint64_t psi1 = 0;
  std::uint64_t psi2 = 0;
  std::uint64_t psi3 = 0;
  std::uint64_t psi4 = 0;
  std::uint64_t undetected = 0;  ///< nothing clicked
  std::uint64_t ambiguous = 0;   ///< both Alice detectors clicked

  std::uint64_t total() const noexcept { return psi1 + psi2 + psi3 + psi4 + undetected + ambiguous; }
  ShotTally& operator+=(const ShotTally& o);
};

struct RunReport {
  ExperimentConfig config;
  std::vector<FringeRecord> records;  ///< ordered by sweep index
  std::vector<ShotTally> tallies;     ///< per record; empty for analytic runs
  ShotTally totals;
  std::map<DetectorPair, FitResult> fits;
  std::string rng_algorithm;
  std::optional<double> elapsed_ms;
};

/// Draws one reading index per shot from `dist` using inverse-CDF sampling
/// over its (sorted) patterns; returns how often each pattern was drawn.
std::map<Occupation, std::uint64_t> sample_patterns(const OutcomeDistribution& dist, std::uint64_t shots,
                                                    std::uint64_t seed, std::uint64_t stream);

/// Monte Carlo emulation: `config.shots` emissions per sweep point, each a
/// joint click reading drawn from the exact detection distribution.
/// Point i uses Philox substream i under `config.seed`, so the result does not
/// depend on thread scheduling. Throws if shots == 0.
RunReport simulate_counts(const ExperimentConfig& config);

/// Noise-free report over the configured sweep (no tallies).
RunReport analytic_report(const ExperimentConfig& config);

}  // namespace telefock

#endif  // TELEFOCK_EMULATION_HPP
