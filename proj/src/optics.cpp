#include "telefock/optics.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace telefock {

namespace {

constexpr double kUnitTol = 1e-12;

// Exact integer tables; total photons through one element never exceed 2 * kMaxPhotonCap.
constexpr int kMaxTotal = 2 * kMaxPhotonCap;

constexpr std::array<std::uint64_t, kMaxTotal + 1> factorials() {
  std::array<std::uint64_t, kMaxTotal + 1> f{};
  f[0] = 1;
  for (int i = 1; i <= kMaxTotal; ++i) f[i] = f[i - 1] * static_cast<std::uint64_t>(i);
  return f;
}

constexpr auto kFactorial = factorials();

constexpr std::uint64_t binomial(int n, int k) { return kFactorial[n] / (kFactorial[k] * kFactorial[n - k]); }

}  // namespace

BeamSplitter BeamSplitter::from_reflectivity(double r_sq, std::string in_a, std::string in_b, std::string out_c,
                                             std::string out_d) {
  if (!(r_sq >= 0.0 && r_sq <= 1.0)) throw std::invalid_argument("beam splitter reflectivity must lie in [0, 1]");
  BeamSplitter bs{std::sqrt(r_sq), std::sqrt(1.0 - r_sq), std::move(in_a), std::move(in_b), std::move(out_c),
                  std::move(out_d)};
  bs.validate();
  return bs;
}

BeamSplitter BeamSplitter::balanced(std::string in_a, std::string in_b, std::string out_c, std::string out_d) {
  const double h = std::numbers::sqrt2 / 2.0;
  BeamSplitter bs{h, h, std::move(in_a), std::move(in_b), std::move(out_c), std::move(out_d)};
  bs.validate();
  return bs;
}

void BeamSplitter::validate() const {
  if (!(r >= 0.0 && r <= 1.0 && t >= 0.0 && t <= 1.0)) {
    throw std::invalid_argument("beam splitter amplitudes r, t must lie in [0, 1]");
  }
  if (std::abs(r * r + t * t - 1.0) > kUnitTol) throw std::invalid_argument("beam splitter requires r^2 + t^2 = 1");
  if (in_a == in_b) throw std::invalid_argument("beam splitter input modes must differ");
  if (out_c == out_d) throw std::invalid_argument("beam splitter output modes must differ");
}

double mirror_to_phase(double x, double wavelength) {
  if (!(wavelength > 0.0)) throw std::invalid_argument("wavelength must be positive");
  return 2.0 * std::numbers::sqrt2 * std::numbers::pi * x / wavelength;
}

double phase_to_mirror(double phi, double wavelength) {
  if (!(wavelength > 0.0)) throw std::invalid_argument("wavelength must be positive");
  return wavelength * phi / (2.0 * std::numbers::sqrt2 * std::numbers::pi);
}

PhaseSetting PhaseSetting::from_phase(double phi, std::optional<double> wavelength) {
  PhaseSetting p{phi, std::nullopt, wavelength};
  if (wavelength) p.mirror = phase_to_mirror(phi, *wavelength);
  return p;
}

PhaseSetting PhaseSetting::from_mirror(double x, double wavelength) {
  return PhaseSetting{mirror_to_phase(x, wavelength), x, wavelength};
}

void PhaseSetting::validate() const {
  if (mirror && !wavelength) throw std::invalid_argument("mirror position given without a wavelength");
  if (mirror && std::abs(mirror_to_phase(*mirror, *wavelength) - phi) > kUnitTol) {
    throw std::invalid_argument("mirror position and phase disagree");
  }
}

PureState apply_beam_splitter(const PureState& state, const BeamSplitter& bs) {
  bs.validate();
  const auto& reg = state.registry();
  const std::size_t ia = reg.index(bs.in_a);
  const std::size_t ib = reg.index(bs.in_b);

  auto out_reg = reg;
  if (bs.out_c != bs.in_a || bs.out_d != bs.in_b) {
    for (const auto* name : {&bs.out_c, &bs.out_d}) {
      if (*name != bs.in_a && *name != bs.in_b && reg.contains(*name)) {
        throw std::invalid_argument("beam splitter output '" + *name + "' already names another mode");
      }
    }
    std::vector<std::string> names = reg.names();
    names[ia] = bs.out_c;
    names[ib] = bs.out_d;
    out_reg = ModeRegistry(std::move(names));
  }

  const int cap = state.photon_cap();
  // Powers of r, t up to the largest photon number entering one port.
  std::array<double, kMaxTotal + 1> rp{}, tp{};
  rp[0] = tp[0] = 1.0;
  for (int i = 1; i <= kMaxTotal; ++i) {
    rp[i] = rp[i - 1] * bs.r;
    tp[i] = tp[i - 1] * bs.t;
  }

  PureState::TermMap out;
  for (const auto& [occ, amp] : state.terms()) {
    const int n = occ[ia];
    const int m = occ[ib];
    // (t c + r d)^n (r c - t d)^m / sqrt(n! m!) acting on vacuum.
    for (int k = 0; k <= n; ++k) {
      for (int j = 0; j <= m; ++j) {
        const int p = k + j;
        const int q = (n - k) + (m - j);
        const double sign = ((m - j) % 2 == 0) ? 1.0 : -1.0;
        const double combinatorial =
            static_cast<double>(binomial(n, k) * binomial(m, j)) *
            std::sqrt(static_cast<double>(kFactorial[p] * kFactorial[q]) /
                      static_cast<double>(kFactorial[n] * kFactorial[m]));
        const double coef = sign * combinatorial * tp[k] * rp[n - k] * rp[j] * tp[m - j];
        if (coef == 0.0) continue;
        Occupation next = occ;
        next[ia] = p;
        next[ib] = q;
        out[next] += coef * amp;
      }
    }
  }

  for (const auto& [occ, amp] : out) {
    if (std::abs(amp) < kPruneThreshold) continue;
    if (occ[ia] > cap || occ[ib] > cap) {
      throw std::invalid_argument("beam splitter output term (" + to_string(occ) + ") exceeds photon cap " +
                                  std::to_string(cap));
    }
  }
  // Drop cancelled terms before validation so HOM-cancelled entries above the cap never reach the constructor.
  std::erase_if(out, [](const auto& kv) { return std::abs(kv.second) < kPruneThreshold; });
  return PureState(std::move(out_reg), std::move(out), cap);
}

PureState apply_phase_shift(const PureState& state, const std::string& mode, double phi) {
  const std::size_t i = state.registry().index(mode);
  PureState::TermMap out;
  for (const auto& [occ, amp] : state.terms()) {
    out.emplace(occ, occ[i] == 0 ? amp : amp * std::polar(1.0, occ[i] * phi));
  }
  return PureState(state.registry(), std::move(out), state.photon_cap());
}

PureState apply_pauli_z(const PureState& state, const std::string& mode) {
  const std::size_t i = state.registry().index(mode);
  PureState::TermMap out;
  for (const auto& [occ, amp] : state.terms()) {
    if (occ[i] > 1) {
      throw std::invalid_argument("sigma_z undefined outside the qubit subspace: term (" + to_string(occ) +
                                  ") has " + std::to_string(occ[i]) + " photons on '" + mode + "'");
    }
    out.emplace(occ, occ[i] == 1 ? -amp : amp);
  }
  return PureState(state.registry(), std::move(out), state.photon_cap());
}

PureState apply_loss(const PureState& state, const std::string& mode, double eta, const std::string& loss_mode) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("efficiency must lie in [0, 1]");
  state.registry().index(mode);
  if (state.registry().contains(loss_mode)) {
    throw std::invalid_argument("loss mode '" + loss_mode + "' already present in registry");
  }
  PureState::TermMap padded;
  for (const auto& [occ, amp] : state.terms()) {
    Occupation o = occ;
    o.counts.push_back(0);
    padded.emplace(std::move(o), amp);
  }
  PureState extended(state.registry().with_appended(loss_mode), std::move(padded), state.photon_cap());
  BeamSplitter bs{std::sqrt(1.0 - eta), std::sqrt(eta), mode, loss_mode, mode, loss_mode};
  return apply_beam_splitter(extended, bs);
}

}  // namespace telefock
