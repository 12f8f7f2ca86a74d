#include "telefock/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

#include "telefock/optics.hpp"

namespace telefock {

namespace {

std::vector<std::size_t> positions_of(const ModeRegistry& reg, const std::vector<std::string>& modes) {
  std::vector<std::size_t> pos;
  pos.reserve(modes.size());
  std::set<std::string> seen;
  for (const auto& m : modes) {
    if (!seen.insert(m).second) throw std::invalid_argument("mode '" + m + "' listed twice");
    pos.push_back(reg.index(m));
  }
  return pos;
}

Occupation project(const Occupation& occ, const std::vector<std::size_t>& pos) {
  Occupation out;
  out.counts.reserve(pos.size());
  for (auto p : pos) out.counts.push_back(occ[p]);
  return out;
}

}  // namespace

void DetectorModel::validate() const {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("detector efficiency must lie in [0, 1]");
}

OutcomeDistribution::OutcomeDistribution(std::vector<std::string> labels, std::map<Occupation, double> probabilities)
    : labels_(std::move(labels)), probs_(std::move(probabilities)) {
  for (const auto& [pattern, p] : probs_) {
    if (pattern.size() != labels_.size()) throw std::invalid_argument("pattern length does not match labels");
    if (p < 0.0) throw std::invalid_argument("negative probability");
  }
}

std::size_t OutcomeDistribution::label_index(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw std::invalid_argument("unknown detector '" + label + "'");
  return static_cast<std::size_t>(it - labels_.begin());
}

double OutcomeDistribution::probability(const Occupation& pattern) const {
  auto it = probs_.find(pattern);
  return it == probs_.end() ? 0.0 : it->second;
}

double OutcomeDistribution::total() const noexcept {
  double s = 0.0;
  for (const auto& [pattern, p] : probs_) s += p;
  return s;
}

OutcomeDistribution OutcomeDistribution::marginal(const std::vector<std::string>& keep) const {
  std::vector<std::size_t> pos;
  for (const auto& k : keep) pos.push_back(label_index(k));
  std::map<Occupation, double> out;
  for (const auto& [pattern, p] : probs_) out[project(pattern, pos)] += p;
  return OutcomeDistribution(keep, std::move(out));
}

std::string OutcomeDistribution::to_text() const {
  std::ostringstream out;
  for (const auto& [pattern, p] : probs_) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", p);
    out << to_string(pattern) << " : " << buf << '\n';
  }
  return out.str();
}

OutcomeDistribution outcome_distribution(const PureState& state, const std::vector<std::string>& modes) {
  const auto pos = positions_of(state.registry(), modes);
  const double n2 = state.norm_squared();
  if (!(n2 > 0.0)) throw std::invalid_argument("outcome distribution of a zero-norm state");
  std::map<Occupation, double> probs;
  for (const auto& [occ, amp] : state.terms()) probs[project(occ, pos)] += std::norm(amp) / n2;
  return OutcomeDistribution(modes, std::move(probs));
}

Branch condition_on_pattern(const PureState& state, const std::vector<std::string>& modes,
                            const Occupation& pattern) {
  const auto pos = positions_of(state.registry(), modes);
  if (pattern.size() != pos.size()) throw std::invalid_argument("pattern length does not match measured modes");
  const double n2 = state.norm_squared();
  if (!(n2 > 0.0)) throw std::invalid_argument("conditioning a zero-norm state");

  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < state.registry().size(); ++i) {
    if (std::find(pos.begin(), pos.end(), i) == pos.end()) rest.push_back(i);
  }

  PureState::TermMap kept;
  double weight = 0.0;
  for (const auto& [occ, amp] : state.terms()) {
    if (project(occ, pos) != pattern) continue;
    weight += std::norm(amp);
    kept[project(occ, rest)] += amp;
  }
  Branch branch;
  branch.probability = weight / n2;
  if (weight == 0.0) return branch;
  branch.state = normalize(PureState(state.registry().without(pos), std::move(kept), state.photon_cap()));
  return branch;
}

OutcomeDistribution click_distribution(const PureState& state, const std::vector<Detector>& detectors) {
  PureState lossy = state;
  std::vector<std::string> modes;
  for (const auto& d : detectors) {
    d.model.validate();
    modes.push_back(d.mode);
    if (d.model.eta < 1.0) lossy = apply_loss(lossy, d.mode, d.model.eta, "loss:" + d.mode);
  }
  const auto counts = outcome_distribution(lossy, modes);
  std::map<Occupation, double> out;
  for (const auto& [pattern, p] : counts.probabilities()) {
    Occupation reading = pattern;
    for (std::size_t i = 0; i < detectors.size(); ++i) {
      if (!detectors[i].model.resolving) reading[i] = std::min(reading[i], 1);
    }
    out[reading] += p;
  }
  return OutcomeDistribution(std::move(modes), std::move(out));
}

double coincidence_probability(const OutcomeDistribution& dist, const std::string& first, const std::string& second,
                               const std::vector<std::string>& silent) {
  const auto i = dist.label_index(first);
  const auto j = dist.label_index(second);
  std::vector<std::size_t> quiet;
  for (const auto& s : silent) quiet.push_back(dist.label_index(s));
  double p = 0.0;
  for (const auto& [pattern, prob] : dist.probabilities()) {
    if (pattern[i] < 1 || pattern[j] < 1) continue;
    if (std::any_of(quiet.begin(), quiet.end(), [&](std::size_t q) { return pattern[q] != 0; })) continue;
    p += prob;
  }
  return p;
}

double total_variation(const OutcomeDistribution& a, const OutcomeDistribution& b) {
  if (a.labels() != b.labels()) throw std::invalid_argument("total variation across different detector labels");
  double sum = 0.0;
  for (const auto& [pattern, p] : a.probabilities()) sum += std::abs(p - b.probability(pattern));
  for (const auto& [pattern, p] : b.probabilities()) {
    if (!a.probabilities().contains(pattern)) sum += p;
  }
  return 0.5 * sum;
}

double threshold_click_probability(int photons, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("efficiency must lie in [0, 1]");
  if (photons < 0) throw std::invalid_argument("negative photon number");
  return 1.0 - std::pow(1.0 - eta, photons);
}

}  // namespace telefock
