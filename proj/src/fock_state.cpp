#include "telefock/fock_state.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace telefock {

namespace {

void check_unique(const std::vector<std::string>& names) {
  std::set<std::string_view> seen;
  for (const auto& n : names) {
    if (n.empty()) throw std::invalid_argument("mode names must be non-empty");
    if (!seen.insert(n).second) throw std::invalid_argument("duplicate mode name '" + n + "'");
  }
}

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // folds -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ModeRegistry::ModeRegistry(std::initializer_list<std::string> names) : names_(names) {
  check_unique(names_);
}

ModeRegistry::ModeRegistry(std::vector<std::string> names) : names_(std::move(names)) {
  check_unique(names_);
}

bool ModeRegistry::contains(std::string_view name) const noexcept {
  return find(name).has_value();
}

std::optional<std::size_t> ModeRegistry::find(std::string_view name) const noexcept {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

std::size_t ModeRegistry::index(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw std::invalid_argument("unknown mode '" + std::string(name) + "'");
}

ModeRegistry ModeRegistry::concat(const ModeRegistry& other) const {
  std::vector<std::string> all = names_;
  for (const auto& n : other.names_) {
    if (contains(n)) throw std::invalid_argument("mode '" + n + "' present in both registries");
    all.push_back(n);
  }
  return ModeRegistry(std::move(all));
}

ModeRegistry ModeRegistry::with_appended(std::string name) const {
  std::vector<std::string> all = names_;
  all.push_back(std::move(name));
  return ModeRegistry(std::move(all));
}

ModeRegistry ModeRegistry::with_renamed(std::size_t position, std::string name) const {
  std::vector<std::string> all = names_;
  all.at(position) = std::move(name);
  return ModeRegistry(std::move(all));
}

ModeRegistry ModeRegistry::without(const std::vector<std::size_t>& positions) const {
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (std::find(positions.begin(), positions.end(), i) == positions.end()) kept.push_back(names_[i]);
  }
  return ModeRegistry(std::move(kept));
}

int Occupation::total() const noexcept { return std::accumulate(counts.begin(), counts.end(), 0); }

std::string to_string(const Occupation& occ) {
  std::string out;
  for (std::size_t i = 0; i < occ.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(occ[i]);
  }
  return out;
}

PureState::PureState(ModeRegistry registry, TermMap terms, int photon_cap)
    : registry_(std::move(registry)), photon_cap_(photon_cap) {
  if (photon_cap < 1 || photon_cap > kMaxPhotonCap) {
    throw std::invalid_argument("photon cap must lie in [1, " + std::to_string(kMaxPhotonCap) + "]");
  }
  for (auto& [occ, amp] : terms) {
    if (occ.size() != registry_.size()) {
      throw std::invalid_argument("occupation (" + to_string(occ) + ") has " + std::to_string(occ.size()) +
                                  " entries, registry has " + std::to_string(registry_.size()) + " modes");
    }
    for (std::size_t i = 0; i < occ.size(); ++i) {
      if (occ[i] < 0 || occ[i] > photon_cap_) {
        throw std::invalid_argument("occupation (" + to_string(occ) + ") exceeds photon cap " +
                                    std::to_string(photon_cap_) + " on mode '" + registry_.name(i) + "'");
      }
    }
    if (std::abs(amp) >= kPruneThreshold) terms_.emplace(occ, amp);
  }
}

Amplitude PureState::amplitude(const Occupation& occ) const {
  auto it = terms_.find(occ);
  return it == terms_.end() ? Amplitude{} : it->second;
}

double PureState::norm_squared() const noexcept {
  double sum = 0.0;
  for (const auto& [occ, amp] : terms_) sum += std::norm(amp);
  return sum;
}

PureState PureState::relabeled(ModeRegistry registry) const {
  if (registry.size() != registry_.size()) throw std::invalid_argument("relabel must keep the mode count");
  return PureState(std::move(registry), terms_, photon_cap_);
}

PureState basis_state(const ModeRegistry& registry, const Occupation& occ, int photon_cap) {
  return PureState(registry, {{occ, Amplitude{1.0, 0.0}}}, photon_cap);
}

PureState normalize(const PureState& state) {
  const double n2 = state.norm_squared();
  if (!(n2 > 0.0)) throw std::invalid_argument("cannot normalize a zero-norm state");
  const double scale = 1.0 / std::sqrt(n2);
  PureState::TermMap terms;
  for (const auto& [occ, amp] : state.terms()) terms.emplace(occ, amp * scale);
  return PureState(state.registry(), std::move(terms), state.photon_cap());
}

PureState linear_combination(const std::vector<std::pair<Amplitude, PureState>>& terms) {
  if (terms.empty()) throw std::invalid_argument("linear combination of an empty list");
  const auto& reg = terms.front().second.registry();
  const int cap = terms.front().second.photon_cap();
  PureState::TermMap acc;
  for (const auto& [coef, st] : terms) {
    if (st.registry() != reg) throw std::invalid_argument("superposed states must share one registry");
    if (st.photon_cap() != cap) throw std::invalid_argument("superposed states must share one photon cap");
    for (const auto& [occ, amp] : st.terms()) acc[occ] += coef * amp;
  }
  return PureState(reg, std::move(acc), cap);
}

PureState superpose(const std::vector<std::pair<Amplitude, PureState>>& terms) {
  auto combined = linear_combination(terms);
  if (combined.empty()) throw std::invalid_argument("superposition has zero norm");
  return normalize(combined);
}

Amplitude inner_product(const PureState& a, const PureState& b) {
  if (a.registry() != b.registry()) throw std::invalid_argument("inner product across different registries");
  Amplitude sum{};
  // Iterate the smaller map, look up in the larger.
  const bool a_small = a.size() <= b.size();
  const auto& small = a_small ? a.terms() : b.terms();
  const auto& large = a_small ? b.terms() : a.terms();
  for (const auto& [occ, amp] : small) {
    auto it = large.find(occ);
    if (it == large.end()) continue;
    sum += a_small ? std::conj(amp) * it->second : std::conj(it->second) * amp;
  }
  return sum;
}

double fidelity(const PureState& a, const PureState& b) { return std::norm(inner_product(a, b)); }

PureState tensor(const PureState& a, const PureState& b) {
  auto reg = a.registry().concat(b.registry());
  const int cap = std::max(a.photon_cap(), b.photon_cap());
  PureState::TermMap terms;
  for (const auto& [oa, xa] : a.terms()) {
    for (const auto& [ob, xb] : b.terms()) {
      Occupation joined = oa;
      joined.counts.insert(joined.counts.end(), ob.counts.begin(), ob.counts.end());
      terms.emplace(std::move(joined), xa * xb);
    }
  }
  return PureState(std::move(reg), std::move(terms), cap);
}

PureState rename_mode(const PureState& state, std::string_view from, std::string to) {
  const auto pos = state.registry().index(from);
  return state.relabeled(state.registry().with_renamed(pos, std::move(to)));
}

PureState reorder_modes(const PureState& state, const ModeRegistry& target) {
  const auto& src = state.registry();
  if (src.size() != target.size()) throw std::invalid_argument("reorder target has a different mode count");
  std::vector<std::size_t> from(target.size());
  for (std::size_t i = 0; i < target.size(); ++i) from[i] = src.index(target.name(i));
  PureState::TermMap terms;
  for (const auto& [occ, amp] : state.terms()) {
    Occupation moved;
    moved.counts.resize(occ.size());
    for (std::size_t i = 0; i < from.size(); ++i) moved[i] = occ[from[i]];
    terms.emplace(std::move(moved), amp);
  }
  return PureState(target, std::move(terms), state.photon_cap());
}

std::string to_canonical_text(const PureState& state) {
  Amplitude phase{1.0, 0.0};
  if (!state.empty()) {
    const auto first = state.terms().begin()->second;
    phase = std::conj(first) / std::abs(first);
  }
  std::ostringstream out;
  for (const auto& [occ, amp] : state.terms()) {
    const Amplitude a = amp * phase;
    out << to_string(occ) << " : " << format_double(a.real()) << ',' << format_double(a.imag()) << '\n';
  }
  return out.str();
}

}  // namespace telefock
