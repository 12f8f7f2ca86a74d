#ifndef TELEFOCK_IO_HPP
#define TELEFOCK_IO_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "telefock/emulation.hpp"
#include "telefock/fitting.hpp"
#include "telefock/protocol.hpp"

namespace telefock {

/// Malformed or out-of-range configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Every emitted float uses "%.17g".
std::string format_double(double v);

/// Keys: alpha_sq, bsb_r_sq, phase{start,stop,steps} | mirror{start_um,stop_um,steps,lambda_um},
/// eta, variant, shots, seed, normalization. Missing keys keep the values in `base`.
ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base = {});
nlohmann::json to_json(const ExperimentConfig& config);
nlohmann::json to_json(const FitResult& fit);
nlohmann::json to_json(const ShotTally& tally);
nlohmann::json to_json(const RunReport& report, bool include_timing = false);

inline constexpr const char* kFringeCsvHeader = "phi_rad,mirror_um,pair,p_joint,p_conditional,counts";

/// One row per (phi, pair) in kAllPairs order; LF endings; counts empty when analytic.
void write_fringe_csv(std::ostream& out, const std::vector<FringeRecord>& records);

struct FringeCsvRow {
  double phi = 0.0;
  std::optional<double> mirror_um;
  DetectorPair pair = DetectorPair::kD1D1s;
  double p_joint = 0.0;
  double p_conditional = 0.0;
  std::optional<std::uint64_t> counts;
};

/// Parses the fringe schema; throws ConfigError with the line number on bad input.
std::vector<FringeCsvRow> read_fringe_csv(std::istream& in);

struct VisibilityCurve {
  DetectorPair pair;
  std::vector<VisibilityPoint> points;
};

inline constexpr const char* kVisibilityCsvHeader = "alpha_sq,pair,visibility,degenerate";
void write_visibility_csv(std::ostream& out, const std::vector<VisibilityCurve>& curves);

/// Static SVG plots: conditional probability vs phase per pair, and visibility vs alpha^2.
void write_fringe_svg(std::ostream& out, const std::vector<FringeRecord>& records, Normalization normalization);
void write_visibility_svg(std::ostream& out, const std::vector<VisibilityCurve>& curves);

}  // namespace telefock

#endif  // TELEFOCK_IO_HPP
