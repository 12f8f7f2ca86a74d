#include "telefock/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>

#include "telefock/parallel.hpp"

namespace telefock {

namespace {

constexpr double kUnitTol = 1e-12;
constexpr double kFlatTol = 1e-12;  // relative spread below which a fringe counts as constant

const std::vector<std::string>& alice_modes() {
  static const std::vector<std::string> modes{mode::kOut1, mode::kOut2};
  return modes;
}

std::vector<Detector> threshold_detectors(const std::vector<std::string>& modes, double eta) {
  std::vector<Detector> out;
  for (const auto& m : modes) out.push_back({m, DetectorModel{eta, false}});
  return out;
}

OutcomeDistribution relabel(const OutcomeDistribution& dist, std::vector<std::string> labels) {
  return OutcomeDistribution(std::move(labels), dist.probabilities());
}

Occupation pattern_for(BellOutcome outcome) {
  switch (outcome) {
    case BellOutcome::kPsi3:
      return {1, 0};
    case BellOutcome::kPsi4:
      return {0, 1};
    default:
      throw std::invalid_argument("only Psi3 and Psi4 carry a teleported state");
  }
}

std::vector<double> grid(double start, double stop, int steps) {
  std::vector<double> pts(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) pts[static_cast<std::size_t>(k)] = start + (stop - start) * k / steps;
  return pts;
}

FringeRecord make_record(const ExperimentConfig& config, const PhaseSetting& phase) {
  config.validate();
  phase.validate();
  FringeRecord rec;
  rec.phi = phase.phi;
  rec.mirror_um = phase.mirror ? phase.mirror : std::optional<double>(phase_to_mirror(phase.phi, config.wavelength_um));

  const auto dist = detection_distribution(config, phase.phi);
  double total = 0.0;
  for (auto pair : kAllPairs) {
    const auto& alice = alice_detector(pair);
    const auto& other = alice == detector::kD1 ? detector::kD2 : detector::kD1;
    rec[pair].joint = coincidence_probability(dist, alice, bob_detector(pair), {other});
    total += rec[pair].joint;
  }
  rec.coincidence_total = total;
  for (auto pair : kAllPairs) rec[pair].conditional = total > 0.0 ? rec[pair].joint / total : 0.0;
  rec.bell = bell_probabilities(config.input, phase.phi);
  return rec;
}

std::vector<FringeRecord> sweep_records(const ExperimentConfig& config, bool parallel) {
  const auto phases = config.phase_points();
  auto one = [&](std::size_t i) { return run_fringe(config, phases[i]); };
  if (parallel) return parallel_map(phases.size(), one);
  std::vector<FringeRecord> out;
  out.reserve(phases.size());
  for (std::size_t i = 0; i < phases.size(); ++i) out.push_back(one(i));
  return out;
}

VisibilityPoint visibility_at(const ExperimentConfig& base, double alpha_sq, DetectorPair pair) {
  ExperimentConfig cfg = base;
  cfg.input = InputQubit::from_alpha_sq(alpha_sq);
  const auto records = sweep_records(cfg, false);
  std::vector<double> values;
  values.reserve(records.size());
  for (const auto& r : records) values.push_back(r[pair].conditional);
  auto v = fringe_visibility(values);
  v.alpha_sq = alpha_sq;
  return v;
}

}  // namespace

InputQubit InputQubit::from_alpha_sq(double alpha_sq) {
  if (!(alpha_sq >= 0.0 && alpha_sq <= 1.0)) throw std::invalid_argument("alpha^2 must lie in [0, 1]");
  InputQubit q{std::sqrt(alpha_sq), std::sqrt(1.0 - alpha_sq)};
  q.validate();
  return q;
}

void InputQubit::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0 && beta >= 0.0 && beta <= 1.0)) {
    throw std::invalid_argument("qubit amplitudes must lie in [0, 1]");
  }
  if (std::abs(alpha * alpha + beta * beta - 1.0) > kUnitTol) {
    throw std::invalid_argument("qubit amplitudes must satisfy alpha^2 + beta^2 = 1");
  }
}

std::string_view to_string(BellOutcome outcome) {
  switch (outcome) {
    case BellOutcome::kPsi1: return "psi1";
    case BellOutcome::kPsi2: return "psi2";
    case BellOutcome::kPsi3: return "psi3";
    case BellOutcome::kPsi4: return "psi4";
  }
  return "?";
}

std::string_view to_string(Variant v) { return v == Variant::kPassive ? "passive" : "active"; }
std::string_view to_string(Normalization n) { return n == Normalization::kJoint ? "joint" : "conditional"; }

void ExperimentConfig::validate() const {
  input.validate();
  if (bsb_r_sq && !(*bsb_r_sq >= 0.0 && *bsb_r_sq <= 1.0)) {
    throw std::invalid_argument("verification reflectivity must lie in [0, 1]");
  }
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("efficiency must lie in [0, 1]");
  if (!(wavelength_um > 0.0)) throw std::invalid_argument("wavelength must be positive");
  const int steps = std::visit([](const auto& s) { return s.steps; }, sweep);
  if (steps < 2) throw std::invalid_argument("sweep needs at least two points");
}

double ExperimentConfig::verification_r_sq() const noexcept { return bsb_r_sq.value_or(input.alpha_sq()); }

BeamSplitter ExperimentConfig::verification_splitter() const {
  return BeamSplitter::from_reflectivity(verification_r_sq(), mode::kBob, mode::kAncilla, mode::kVerify1,
                                         mode::kVerify2);
}

std::vector<PhaseSetting> ExperimentConfig::phase_points() const {
  std::vector<PhaseSetting> out;
  if (const auto* ps = std::get_if<PhaseSweep>(&sweep)) {
    for (double phi : grid(ps->start, ps->stop, ps->steps)) out.push_back(PhaseSetting::from_phase(phi, wavelength_um));
  } else {
    const auto& ms = std::get<MirrorSweep>(sweep);
    for (double x : grid(ms.start_um, ms.stop_um, ms.steps)) out.push_back(PhaseSetting::from_mirror(x, wavelength_um));
  }
  return out;
}

std::string_view to_string(DetectorPair pair) {
  switch (pair) {
    case DetectorPair::kD1D1s: return "D1-D1*";
    case DetectorPair::kD1D2s: return "D1-D2*";
    case DetectorPair::kD2D1s: return "D2-D1*";
    case DetectorPair::kD2D2s: return "D2-D2*";
  }
  return "?";
}

std::optional<DetectorPair> parse_pair(std::string_view label) {
  for (auto p : kAllPairs) {
    if (to_string(p) == label) return p;
  }
  return std::nullopt;
}

const std::string& alice_detector(DetectorPair pair) {
  return (pair == DetectorPair::kD1D1s || pair == DetectorPair::kD1D2s) ? detector::kD1 : detector::kD2;
}

const std::string& bob_detector(DetectorPair pair) {
  return (pair == DetectorPair::kD1D1s || pair == DetectorPair::kD2D1s) ? detector::kD1s : detector::kD2s;
}

PairFamily family_of(DetectorPair pair) {
  return bob_detector(pair) == detector::kD1s ? PairFamily::kFirstVerifier : PairFamily::kSecondVerifier;
}

PureState prepare_source(const InputQubit& input) {
  input.validate();
  const ModeRegistry reg{mode::kSystem, mode::kAncilla};
  const BeamSplitter bs_s{input.alpha, input.beta, mode::kSystem, mode::kAncilla, mode::kSystem, mode::kAncilla};
  return apply_beam_splitter(basis_state(reg, {1, 0}), bs_s);
}

PureState prepare_channel() {
  const ModeRegistry reg{mode::kAlice, mode::kBob};
  return apply_beam_splitter(basis_state(reg, {0, 1}),
                             BeamSplitter::balanced(mode::kAlice, mode::kBob, mode::kAlice, mode::kBob));
}

PureState assemble_total_state(const InputQubit& input) { return tensor(prepare_source(input), prepare_channel()); }

BeamSplitter alice_splitter() { return BeamSplitter::balanced(mode::kSystem, mode::kAlice, mode::kOut2, mode::kOut1); }

PureState alice_interference(const PureState& total, double phi) {
  return apply_beam_splitter(apply_phase_shift(total, mode::kSystem, phi), alice_splitter());
}

BellOutcome classify_alice(const Occupation& pattern) {
  if (pattern.size() != 2) throw std::invalid_argument("Alice pattern needs exactly two entries (k_1, k_2)");
  const int n1 = pattern[0], n2 = pattern[1];
  if (n1 < 0 || n2 < 0 || n1 + n2 > 2) {
    throw std::invalid_argument("Alice pattern (" + to_string(pattern) + ") outside the two-photon space");
  }
  if (n1 == 1 && n2 == 1) throw std::logic_error("impossible pattern under ideal HOM: (1,1)");
  if (n1 + n2 == 0) return BellOutcome::kPsi1;
  if (n1 + n2 == 2) return BellOutcome::kPsi2;
  return n1 == 1 ? BellOutcome::kPsi3 : BellOutcome::kPsi4;
}

std::array<double, 4> bell_probabilities(const InputQubit& input, double phi) {
  const auto state = alice_interference(assemble_total_state(input), phi);
  const auto alice = outcome_distribution(state, alice_modes());
  std::array<double, 4> out{};
  for (const auto& [pattern, p] : alice.probabilities()) {
    out[static_cast<std::size_t>(classify_alice(pattern))] += p;
  }
  return out;
}

PureState teleported_state(const InputQubit& input, double phi, BellOutcome outcome, bool corrected) {
  const auto state = alice_interference(assemble_total_state(input), phi);
  auto branch = condition_on_pattern(state, alice_modes(), pattern_for(outcome));
  if (!branch) throw std::logic_error("teleportation branch has zero probability");
  auto bob = *branch.state;
  if (corrected && outcome == BellOutcome::kPsi4) bob = apply_pauli_z(bob, mode::kBob);
  return bob;
}

OutcomeDistribution detection_distribution(const ExperimentConfig& config, double phi) {
  config.validate();
  const auto state = alice_interference(assemble_total_state(config.input), phi);
  const auto bs_b = config.verification_splitter();
  const auto alice_dets = threshold_detectors(alice_modes(), config.eta);
  const auto bob_dets = threshold_detectors({mode::kVerify1, mode::kVerify2}, config.eta);
  const ModeRegistry alice_reg{mode::kOut1, mode::kOut2};

  // Alice's ideal pattern splits the state into orthogonal branches; loss at
  // her detectors then decides which click reading (and which correction) Bob sees.
  const auto alice = outcome_distribution(state, alice_modes());
  std::map<Occupation, double> joint;
  for (const auto& [pattern, p] : alice.probabilities()) {
    classify_alice(pattern);  // rejects (1,1)
    const auto branch = condition_on_pattern(state, alice_modes(), pattern);
    if (!branch) continue;
    const auto alice_clicks = click_distribution(basis_state(alice_reg, pattern), alice_dets);
    for (const auto& [reading, q] : alice_clicks.probabilities()) {
      auto bob = *branch.state;
      if (config.variant == Variant::kActive && reading[1] == 1) bob = apply_pauli_z(bob, mode::kBob);
      bob = apply_beam_splitter(bob, bs_b);
      const auto bob_clicks = click_distribution(bob, bob_dets);
      for (const auto& [bob_reading, b] : bob_clicks.probabilities()) {
        joint[Occupation{reading[0], reading[1], bob_reading[0], bob_reading[1]}] += p * q * b;
      }
    }
  }
  return OutcomeDistribution({detector::kD1, detector::kD2, detector::kD1s, detector::kD2s}, std::move(joint));
}

OutcomeDistribution bob_click_distribution(const ExperimentConfig& config, double phi, BellOutcome outcome) {
  config.validate();
  auto bob = teleported_state(config.input, phi, outcome, config.variant == Variant::kActive);
  bob = apply_beam_splitter(bob, config.verification_splitter());
  const auto dist = click_distribution(bob, threshold_detectors({mode::kVerify1, mode::kVerify2}, config.eta));
  return relabel(dist, {detector::kD1s, detector::kD2s});
}

FringeRecord run_passive(const ExperimentConfig& config, const PhaseSetting& phase) {
  if (config.variant != Variant::kPassive) throw std::invalid_argument("run_passive needs a passive config");
  return make_record(config, phase);
}

FringeRecord run_active(const ExperimentConfig& config, const PhaseSetting& phase) {
  if (config.variant != Variant::kActive) throw std::invalid_argument("run_active needs an active config");
  return make_record(config, phase);
}

FringeRecord run_fringe(const ExperimentConfig& config, const PhaseSetting& phase) {
  return config.variant == Variant::kActive ? run_active(config, phase) : run_passive(config, phase);
}

std::vector<FringeRecord> run_sweep(const ExperimentConfig& config) { return sweep_records(config, true); }

VisibilityPoint fringe_visibility(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("visibility of an empty fringe");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  VisibilityPoint v;
  if (!(*hi + *lo > 0.0) || *hi - *lo <= kFlatTol * (*hi + *lo)) {
    v.degenerate = true;
    return v;
  }
  v.visibility = (*hi - *lo) / (*hi + *lo);
  return v;
}

std::vector<VisibilityPoint> visibility_sweep(const ExperimentConfig& base, const std::vector<double>& alpha_sq_grid,
                                              DetectorPair pair) {
  base.validate();
  return parallel_map(alpha_sq_grid.size(), [&](std::size_t i) { return visibility_at(base, alpha_sq_grid[i], pair); });
}

VisibilityPoint refine_visibility_peak(const ExperimentConfig& base, DetectorPair pair, double lo, double hi) {
  if (!(lo >= 0.0 && hi <= 1.0 && lo < hi)) throw std::invalid_argument("peak bracket must satisfy 0 <= lo < hi <= 1");
  auto negative = [&](double a2) { return -visibility_at(base, a2, pair).visibility; };
  const auto [x, fx] = boost::math::tools::brent_find_minima(negative, lo, hi, std::numeric_limits<double>::digits / 2);
  (void)fx;
  return visibility_at(base, x, pair);
}

}  // namespace telefock
