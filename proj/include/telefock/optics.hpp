#ifndef TELEFOCK_OPTICS_HPP
#define TELEFOCK_OPTICS_HPP

#include <optional>
#include <string>

#include "telefock/fock_state.hpp"

namespace telefock {

/// Lossless two-port beam splitter with real amplitudes.
///
/// Creation operators map as
///   a^dag -> t c^dag + r d^dag
///   b^dag -> r c^dag - t d^dag
/// i.e. the real involutive matrix [[t, r], [r, -t]]. Output names replace the
/// input names in the registry at the same positions, so `out_c` / `out_d` may
/// equal the inputs (in-place element) or be fresh names.
struct BeamSplitter {
  double r = 0.0;
  double t = 1.0;
  std::string in_a, in_b;
  std::string out_c, out_d;

  /// Builds from the intensity reflectivity r^2; t = sqrt(1 - r^2).
  static BeamSplitter from_reflectivity(double r_sq, std::string in_a, std::string in_b, std::string out_c,
                                        std::string out_d);
  /// 50:50 element.
  static BeamSplitter balanced(std::string in_a, std::string in_b, std::string out_c, std::string out_d);

  /// Throws std::invalid_argument if r^2 + t^2 != 1, r or t outside [0, 1],
  /// or port names repeat.
  void validate() const;
};

/// Interferometer phase, optionally tied to a mirror displacement.
struct PhaseSetting {
  double phi = 0.0;                  ///< radians
  std::optional<double> mirror;      ///< same length unit as wavelength
  std::optional<double> wavelength;  ///< e.g. micrometres

  static PhaseSetting from_phase(double phi, std::optional<double> wavelength = std::nullopt);
  static PhaseSetting from_mirror(double x, double wavelength);
  /// Throws if both phi and mirror are present and disagree beyond 1e-12 rad.
  void validate() const;
};

/// Mirror position X maps to phi = 2^(3/2) * pi * X / lambda.
double mirror_to_phase(double x, double wavelength);
double phase_to_mirror(double phi, double wavelength);

PureState apply_beam_splitter(const PureState& state, const BeamSplitter& bs);

/// Multiplies each term by exp(i n phi), n the occupation of `mode`.
PureState apply_phase_shift(const PureState& state, const std::string& mode, double phi);

/// Qubit-subspace sigma_z on `mode`: |0> -> |0>, |1> -> -|1>. Throws if any
/// term carries two or more photons on the mode.
PureState apply_pauli_z(const PureState& state, const std::string& mode);

/// Detector inefficiency as a beam splitter with t = sqrt(eta) coupling
/// `mode` to a fresh vacuum mode `loss_mode`, appended to the registry.
PureState apply_loss(const PureState& state, const std::string& mode, double eta, const std::string& loss_mode);

}  // namespace telefock

#endif  // TELEFOCK_OPTICS_HPP
