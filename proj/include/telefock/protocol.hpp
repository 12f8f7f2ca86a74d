#ifndef TELEFOCK_PROTOCOL_HPP
#define TELEFOCK_PROTOCOL_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "telefock/fock_state.hpp"
#include "telefock/measurement.hpp"
#include "telefock/optics.hpp"

namespace telefock {

/// Mode names used by the teleportation pipeline.
namespace mode {
inline const std::string kSystem = "k_S";
inline const std::string kAncilla = "k_a~";
inline const std::string kAlice = "k_A";
inline const std::string kBob = "k_B";
inline const std::string kOut1 = "k_1";
inline const std::string kOut2 = "k_2";
inline const std::string kVerify1 = "k_1*";
inline const std::string kVerify2 = "k_2*";
}  // namespace mode

/// Detector labels; D1/D2 watch k_1/k_2, D1*/D2* watch k_1*/k_2*.
namespace detector {
inline const std::string kD1 = "D1";
inline const std::string kD2 = "D2";
inline const std::string kD1s = "D1*";
inline const std::string kD2s = "D2*";
}  // namespace detector

inline constexpr double kDefaultWavelengthUm = 0.7276;

/// Real amplitudes of the qubit alpha|0> + beta|1> (alpha on vacuum).
struct InputQubit {
  double alpha = 1.0;
  double beta = 0.0;

  static InputQubit from_alpha_sq(double alpha_sq);
  double alpha_sq() const noexcept { return alpha * alpha; }
  void validate() const;
};

enum class BellOutcome { kPsi1, kPsi2, kPsi3, kPsi4 };
std::string_view to_string(BellOutcome outcome);

enum class Variant { kPassive, kActive };
enum class Normalization { kJoint, kConditional };

std::string_view to_string(Variant v);
std::string_view to_string(Normalization n);

/// Half-open grid start + k (stop - start) / steps, k = 0..steps-1.
struct PhaseSweep {
  double start = 0.0;
  double stop = 6.283185307179586;
  int steps = 64;
};

/// Same grid semantics over mirror positions (micrometres).
struct MirrorSweep {
  double start_um = 0.0;
  double stop_um = 0.0;
  int steps = 64;
};

struct ExperimentConfig {
  InputQubit input = InputQubit::from_alpha_sq(0.5);
  /// Verification splitter reflectivity r_B^2; unset means matched to alpha^2.
  std::optional<double> bsb_r_sq;
  std::variant<PhaseSweep, MirrorSweep> sweep = PhaseSweep{};
  double wavelength_um = kDefaultWavelengthUm;
  double eta = 1.0;
  Variant variant = Variant::kPassive;
  std::uint64_t shots = 0;  ///< 0 = analytic
  std::uint64_t seed = 0;
  Normalization normalization = Normalization::kConditional;

  void validate() const;
  double verification_r_sq() const noexcept;
  BeamSplitter verification_splitter() const;
  /// Every sweep point as a phase, with the mirror position filled in.
  std::vector<PhaseSetting> phase_points() const;
};

enum class DetectorPair { kD1D1s, kD1D2s, kD2D1s, kD2D2s };
inline constexpr std::array<DetectorPair, 4> kAllPairs = {DetectorPair::kD1D1s, DetectorPair::kD1D2s,
                                                           DetectorPair::kD2D1s, DetectorPair::kD2D2s};

/// "D1-D1*" style label.
std::string_view to_string(DetectorPair pair);
std::optional<DetectorPair> parse_pair(std::string_view label);
const std::string& alice_detector(DetectorPair pair);
const std::string& bob_detector(DetectorPair pair);

/// Pairs ending on the same verification detector share a visibility curve:
/// the D1* family peaks at alpha^2 = t_B^2, the D2* family at alpha^2 = r_B^2.
enum class PairFamily { kFirstVerifier, kSecondVerifier };
PairFamily family_of(DetectorPair pair);

struct PairProbability {
  double joint = 0.0;
  double conditional = 0.0;
  std::optional<std::uint64_t> counts;
};

struct FringeRecord {
  double phi = 0.0;
  std::optional<double> mirror_um;
  std::array<PairProbability, 4> pairs{};  ///< indexed like kAllPairs
  /// Probabilities of Alice's four Bell classes from the ideal pattern on k_1, k_2.
  std::array<double, 4> bell{};
  /// Sum of the four joint coincidence probabilities (the post-selected ensemble).
  double coincidence_total = 0.0;

  const PairProbability& operator[](DetectorPair pair) const { return pairs[static_cast<std::size_t>(pair)]; }
  PairProbability& operator[](DetectorPair pair) { return pairs[static_cast<std::size_t>(pair)]; }
};

/// alpha|0>_S|1>_a~ + beta|1>_S|0>_a~, from one photon on BS_S (r = alpha, t = beta).
PureState prepare_source(const InputQubit& input);

/// 2^(-1/2) (|1>_A|0>_B - |0>_A|1>_B): one photon entering the second port of a 50:50 splitter.
PureState prepare_channel();

/// source (x) channel over (k_S, k_a~, k_A, k_B).
PureState assemble_total_state(const InputQubit& input);

/// Phase phi on k_S, then Alice's 50:50 splitter with outputs k_1, k_2.
///
/// The splitter feeds k_S into its first port and k_A into its second and
/// sends the ports' c/d outputs to k_2/k_1, which realizes
///   a_S^dag -> (a_1^dag + a_2^dag)/sqrt2,  a_A^dag -> (a_2^dag - a_1^dag)/sqrt2
/// so the antisymmetric S/A combination lands on k_1 alone.
PureState alice_interference(const PureState& total, double phi);
BeamSplitter alice_splitter();

/// Total map from an ideal pattern on (k_1, k_2). Throws on (1, 1), which the
/// two-photon interference forbids, and on patterns with more than two photons.
BellOutcome classify_alice(const Occupation& pattern);

/// P(Psi1..Psi4) at phase phi, indexed by BellOutcome.
std::array<double, 4> bell_probabilities(const InputQubit& input, double phi = 0.0);

/// Normalized state of (k_a~, k_B) after Alice reports Psi3 or Psi4, with
/// the sigma_z correction on k_B applied to Psi4 when `corrected`.
PureState teleported_state(const InputQubit& input, double phi, BellOutcome outcome, bool corrected);

/// Click readings on (D1, D2, D1*, D2*) at phase phi for the configured
/// variant, efficiency and verification splitter.
OutcomeDistribution detection_distribution(const ExperimentConfig& config, double phi);

/// Readings on (D1*, D2*) given that Alice reported Psi3 or Psi4, including
/// the active correction when the config asks for it.
OutcomeDistribution bob_click_distribution(const ExperimentConfig& config, double phi, BellOutcome outcome);

FringeRecord run_passive(const ExperimentConfig& config, const PhaseSetting& phase);
FringeRecord run_active(const ExperimentConfig& config, const PhaseSetting& phase);
/// Dispatches on config.variant.
FringeRecord run_fringe(const ExperimentConfig& config, const PhaseSetting& phase);
/// Every point of the configured sweep, ordered by grid index.
std::vector<FringeRecord> run_sweep(const ExperimentConfig& config);

struct VisibilityPoint {
  double alpha_sq = 0.0;
  double visibility = 0.0;
  bool degenerate = false;
};

/// (max - min) / (max + min); degenerate (and 0) when the values are all zero or
/// constant to a relative 1e-12.
VisibilityPoint fringe_visibility(const std::vector<double>& values);

/// Conditional-probability visibility of `pair` at each alpha^2, each from a full phase sweep.
std::vector<VisibilityPoint> visibility_sweep(const ExperimentConfig& base, const std::vector<double>& alpha_sq_grid,
                                              DetectorPair pair);

/// Maximizes the sweep visibility of `pair` over alpha^2 in [lo, hi] (Brent).
VisibilityPoint refine_visibility_peak(const ExperimentConfig& base, DetectorPair pair, double lo, double hi);

}  // namespace telefock

#endif  // TELEFOCK_PROTOCOL_HPP
