#ifndef TELEFOCK_MEASUREMENT_HPP
#define TELEFOCK_MEASUREMENT_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "telefock/fock_state.hpp"

namespace telefock {

struct DetectorModel {
  double eta = 1.0;
  bool resolving = false;  ///< photon-number resolving; otherwise click / no-click

  void validate() const;
};

struct Detector {
  std::string mode;
  DetectorModel model;
};

/// Probabilities over joint patterns on a labelled list of detectors or modes.
/// Threshold detectors report 0 / 1 per entry; resolving ones report counts.
class OutcomeDistribution {
 public:
  OutcomeDistribution(std::vector<std::string> labels, std::map<Occupation, double> probabilities);

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::map<Occupation, double>& probabilities() const noexcept { return probs_; }
  std::size_t label_index(const std::string& label) const;

  double probability(const Occupation& pattern) const;
  double total() const noexcept;

  /// Marginal distribution over a subset of the labels, in the given order.
  OutcomeDistribution marginal(const std::vector<std::string>& keep) const;

  /// Sorted "pattern : probability" lines.
  std::string to_text() const;

 private:
  std::vector<std::string> labels_;
  std::map<Occupation, double> probs_;
};

/// Born-rule distribution of photon numbers on `modes`; other modes are traced out.
OutcomeDistribution outcome_distribution(const PureState& state, const std::vector<std::string>& modes);

/// Result of post-selecting a pattern: joint probability and the normalized
/// state of the unmeasured modes. `state` is empty when the pattern cannot occur.
struct Branch {
  double probability = 0.0;
  std::optional<PureState> state;

  explicit operator bool() const noexcept { return state.has_value(); }
};

Branch condition_on_pattern(const PureState& state, const std::vector<std::string>& modes,
                            const Occupation& pattern);

/// Detection on the given modes; each detector applies its own loss first.
/// Loss modes are named "loss:<mode>" and marginalized.
OutcomeDistribution click_distribution(const PureState& state, const std::vector<Detector>& detectors);

/// P(first clicks and second clicks and every label in `silent` reads zero).
double coincidence_probability(const OutcomeDistribution& dist, const std::string& first,
                               const std::string& second, const std::vector<std::string>& silent = {});

/// Half the L1 distance. Both distributions must have identical labels.
double total_variation(const OutcomeDistribution& a, const OutcomeDistribution& b);

/// Threshold click probability for n photons: 1 - (1 - eta)^n.
double threshold_click_probability(int photons, double eta);

}  // namespace telefock

#endif  // TELEFOCK_MEASUREMENT_HPP
