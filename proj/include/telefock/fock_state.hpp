#ifndef TELEFOCK_FOCK_STATE_HPP
#define TELEFOCK_FOCK_STATE_HPP

#include <compare>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace telefock {

using Amplitude = std::complex<double>;

/// Amplitudes with modulus below this are dropped from every state.
inline constexpr double kPruneThreshold = 1e-14;

/// Default photon cap per mode; the protocol never puts more than two photons anywhere.
inline constexpr int kDefaultPhotonCap = 2;
inline constexpr int kMaxPhotonCap = 4;

/// Ordered set of named optical modes. Order is fixed at construction.
class ModeRegistry {
 public:
  ModeRegistry() = default;
  ModeRegistry(std::initializer_list<std::string> names);
  explicit ModeRegistry(std::vector<std::string> names);

  std::size_t size() const noexcept { return names_.size(); }
  bool empty() const noexcept { return names_.empty(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(std::size_t i) const { return names_.at(i); }

  bool contains(std::string_view name) const noexcept;
  std::optional<std::size_t> find(std::string_view name) const noexcept;
  /// Throws std::invalid_argument naming the missing mode.
  std::size_t index(std::string_view name) const;

  /// Concatenation; throws if any name appears in both.
  ModeRegistry concat(const ModeRegistry& other) const;
  ModeRegistry with_appended(std::string name) const;
  ModeRegistry with_renamed(std::size_t position, std::string name) const;
  ModeRegistry without(const std::vector<std::size_t>& positions) const;

  friend bool operator==(const ModeRegistry&, const ModeRegistry&) = default;

 private:
  std::vector<std::string> names_;
};

/// Per-mode photon numbers, one entry per registry mode.
struct Occupation {
  std::vector<int> counts;

  Occupation() = default;
  Occupation(std::initializer_list<int> c) : counts(c) {}
  explicit Occupation(std::vector<int> c) : counts(std::move(c)) {}

  std::size_t size() const noexcept { return counts.size(); }
  int operator[](std::size_t i) const { return counts[i]; }
  int& operator[](std::size_t i) { return counts[i]; }
  int total() const noexcept;

  friend auto operator<=>(const Occupation&, const Occupation&) = default;
  friend bool operator==(const Occupation&, const Occupation&) = default;
};

std::string to_string(const Occupation& occ);

/// Sparse pure state of a few bosonic modes: occupation pattern -> amplitude.
///
/// Values are immutable once built; every operation in the library returns a
/// new state. Stored terms always satisfy |amplitude| >= kPruneThreshold and
/// every occupation entry is within [0, photon_cap()].
class PureState {
 public:
  using TermMap = std::map<Occupation, Amplitude>;

  /// Builds a state from raw terms (not normalized). Validates every
  /// occupation against the registry and cap, prunes dust.
  PureState(ModeRegistry registry, TermMap terms, int photon_cap = kDefaultPhotonCap);

  const ModeRegistry& registry() const noexcept { return registry_; }
  const TermMap& terms() const noexcept { return terms_; }
  int photon_cap() const noexcept { return photon_cap_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  Amplitude amplitude(const Occupation& occ) const;
  double norm_squared() const noexcept;

  /// Same terms under a registry whose names differ only by renaming.
  PureState relabeled(ModeRegistry registry) const;

 private:
  ModeRegistry registry_;
  TermMap terms_;
  int photon_cap_;
};

/// |occ> with amplitude 1.
PureState basis_state(const ModeRegistry& registry, const Occupation& occ,
                      int photon_cap = kDefaultPhotonCap);

/// Scales amplitudes so the norm is one; throws on a zero-norm state.
PureState normalize(const PureState& state);

/// Normalized linear combination. All states must share registry and cap.
PureState superpose(const std::vector<std::pair<Amplitude, PureState>>& terms);

/// Linear combination without the final normalization.
PureState linear_combination(const std::vector<std::pair<Amplitude, PureState>>& terms);

/// <a|b>. Registries must be identical (same names, same order).
Amplitude inner_product(const PureState& a, const PureState& b);

/// |<a|b>|^2 for normalized inputs.
double fidelity(const PureState& a, const PureState& b);

/// a (x) b over the concatenated registry. Registries must be disjoint.
PureState tensor(const PureState& a, const PureState& b);

/// Renames one mode; positions and amplitudes are untouched.
PureState rename_mode(const PureState& state, std::string_view from, std::string to);

/// Reorders modes to match `target`, which must hold the same names.
PureState reorder_modes(const PureState& state, const ModeRegistry& target);

/// Canonical text: one "n1,...,nk : re,im" line per term, lexicographic by
/// occupation, global phase fixed so the first amplitude is real positive.
std::string to_canonical_text(const PureState& state);

}  // namespace telefock

#endif  // TELEFOCK_FOCK_STATE_HPP
