#include "telefock/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

namespace telefock {

using nlohmann::json;

namespace {

const std::set<std::string> kConfigKeys = {"alpha_sq", "bsb_r_sq", "phase",  "mirror",       "eta",
                                           "variant",  "shots",    "seed",   "normalization", "lambda_um"};

template <typename T>
T get_as(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(line) + ": bad number '" + s + "'");
  }
}

// Plot helpers: fixed 640x400 canvas, 60 px margins.
constexpr double kW = 640, kH = 400, kM = 60;
constexpr std::array<const char*, 4> kColors = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

struct Frame {
  double x0, x1, y0, y1;
  double px(double x) const { return kM + (x - x0) / (x1 - x0) * (kW - 2 * kM); }
  double py(double y) const { return kH - kM - (y - y0) / (y1 - y0) * (kH - 2 * kM); }
};

void svg_open(std::ostream& out, const Frame& f, const std::string& xlabel, const std::string& ylabel) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<rect x=\"" << kM << "\" y=\"" << kM << "\" width=\"" << kW - 2 * kM << "\" height=\"" << kH - 2 * kM
      << "\" fill=\"none\" stroke=\"black\"/>\n"
      << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 15 << "\" text-anchor=\"middle\">" << xlabel << "</text>\n"
      << "<text x=\"15\" y=\"" << kH / 2 << "\" transform=\"rotate(-90 15 " << kH / 2
      << ")\" text-anchor=\"middle\">" << ylabel << "</text>\n";
  for (double t : {f.x0, f.x1}) {
    out << "<text x=\"" << f.px(t) << "\" y=\"" << kH - kM + 18 << "\" text-anchor=\"middle\">" << format_double(t)
        << "</text>\n";
  }
  for (double t : {f.y0, f.y1}) {
    out << "<text x=\"" << kM - 6 << "\" y=\"" << f.py(t) + 4 << "\" text-anchor=\"end\">" << format_double(t)
        << "</text>\n";
  }
}

void svg_series(std::ostream& out, const Frame& f, const std::vector<std::pair<double, double>>& pts,
                std::size_t idx, std::string_view label) {
  out << "<polyline fill=\"none\" stroke=\"" << kColors[idx % kColors.size()] << "\" points=\"";
  for (const auto& [x, y] : pts) out << f.px(x) << ',' << f.py(y) << ' ';
  out << "\"/>\n<text x=\"" << kW - kM + 4 << "\" y=\"" << kM + 16 * (idx + 1) << "\" fill=\""
      << kColors[idx % kColors.size()] << "\" font-size=\"11\">" << label << "</text>\n";
}

}  // namespace

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ExperimentConfig config_from_json(const json& j, ExperimentConfig cfg) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kConfigKeys.contains(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  if (j.contains("phase") && j.contains("mirror")) throw ConfigError("config may hold 'phase' or 'mirror', not both");

  try {
    if (j.contains("alpha_sq")) cfg.input = InputQubit::from_alpha_sq(get_as<double>(j, "alpha_sq"));
    if (j.contains("bsb_r_sq")) {
      if (j.at("bsb_r_sq").is_null() || j.at("bsb_r_sq") == "matched") {
        cfg.bsb_r_sq.reset();
      } else {
        cfg.bsb_r_sq = get_as<double>(j, "bsb_r_sq");
      }
    }
    if (j.contains("lambda_um")) cfg.wavelength_um = get_as<double>(j, "lambda_um");
    if (j.contains("phase")) {
      const auto& p = j.at("phase");
      PhaseSweep s;
      if (p.contains("start")) s.start = get_as<double>(p, "start");
      if (p.contains("stop")) s.stop = get_as<double>(p, "stop");
      if (p.contains("steps")) s.steps = get_as<int>(p, "steps");
      cfg.sweep = s;
    }
    if (j.contains("mirror")) {
      const auto& m = j.at("mirror");
      if (m.contains("lambda_um")) cfg.wavelength_um = get_as<double>(m, "lambda_um");
      MirrorSweep s;
      s.start_um = m.contains("start_um") ? get_as<double>(m, "start_um") : 0.0;
      // Default span: one full fringe period.
      s.stop_um = m.contains("stop_um") ? get_as<double>(m, "stop_um")
                                        : phase_to_mirror(2.0 * std::numbers::pi, cfg.wavelength_um);
      if (m.contains("steps")) s.steps = get_as<int>(m, "steps");
      cfg.sweep = s;
    }
    if (j.contains("eta")) cfg.eta = get_as<double>(j, "eta");
    if (j.contains("variant")) {
      const auto v = get_as<std::string>(j, "variant");
      if (v == "passive") cfg.variant = Variant::kPassive;
      else if (v == "active") cfg.variant = Variant::kActive;
      else throw ConfigError("variant must be 'passive' or 'active'");
    }
    if (j.contains("shots")) cfg.shots = get_as<std::uint64_t>(j, "shots");
    if (j.contains("seed")) cfg.seed = get_as<std::uint64_t>(j, "seed");
    if (j.contains("normalization")) {
      const auto n = get_as<std::string>(j, "normalization");
      if (n == "joint") cfg.normalization = Normalization::kJoint;
      else if (n == "conditional") cfg.normalization = Normalization::kConditional;
      else throw ConfigError("normalization must be 'joint' or 'conditional'");
    }
    cfg.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["alpha_sq"] = c.input.alpha_sq();
  j["bsb_r_sq"] = c.verification_r_sq();
  j["bsb_matched"] = !c.bsb_r_sq.has_value();
  if (const auto* p = std::get_if<PhaseSweep>(&c.sweep)) {
    j["phase"] = {{"start", p->start}, {"stop", p->stop}, {"steps", p->steps}};
  } else {
    const auto& m = std::get<MirrorSweep>(c.sweep);
    j["mirror"] = {{"start_um", m.start_um}, {"stop_um", m.stop_um}, {"steps", m.steps}};
  }
  j["lambda_um"] = c.wavelength_um;
  j["eta"] = c.eta;
  j["variant"] = to_string(c.variant);
  j["shots"] = c.shots;
  j["seed"] = c.seed;
  j["normalization"] = to_string(c.normalization);
  return j;
}

json to_json(const FitResult& f) {
  return {{"visibility", f.visibility},       {"phase_offset", f.phase_offset},
          {"mean_level", f.mean_level},       {"residual_norm", f.residual_norm},
          {"se_visibility", f.se_visibility}, {"se_phase_offset", f.se_phase_offset},
          {"se_mean_level", f.se_mean_level}, {"points", f.points}};
}

json to_json(const ShotTally& t) {
  return {{"psi1", t.psi1},
          {"psi2", t.psi2},
          {"psi3", t.psi3},
          {"psi4", t.psi4},
          {"undetected", t.undetected},
          {"ambiguous", t.ambiguous},
          {"total", t.total()}};
}

json to_json(const RunReport& r, bool include_timing) {
  json j;
  j["config"] = to_json(r.config);
  j["rng"] = {{"algorithm", r.rng_algorithm.empty() ? "none" : r.rng_algorithm}, {"seed", r.config.seed}};
  json records = json::array();
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    const auto& rec = r.records[i];
    json jr;
    jr["phi_rad"] = rec.phi;
    if (rec.mirror_um) jr["mirror_um"] = *rec.mirror_um;
    json pairs = json::object();
    for (auto pair : kAllPairs) {
      json jp = {{"p_joint", rec[pair].joint}, {"p_conditional", rec[pair].conditional}};
      if (rec[pair].counts) jp["counts"] = *rec[pair].counts;
      pairs[std::string(to_string(pair))] = jp;
    }
    jr["pairs"] = pairs;
    jr["bell"] = {{"psi1", rec.bell[0]}, {"psi2", rec.bell[1]}, {"psi3", rec.bell[2]}, {"psi4", rec.bell[3]}};
    if (i < r.tallies.size()) jr["tally"] = to_json(r.tallies[i]);
    records.push_back(jr);
  }
  j["records"] = records;
  if (!r.tallies.empty()) j["bell_tallies"] = to_json(r.totals);
  json fits = json::object();
  for (const auto& [pair, fit] : r.fits) fits[std::string(to_string(pair))] = to_json(fit);
  j["fits"] = fits;
  if (include_timing && r.elapsed_ms) j["elapsed_ms"] = *r.elapsed_ms;
  return j;
}

void write_fringe_csv(std::ostream& out, const std::vector<FringeRecord>& records) {
  out << kFringeCsvHeader << '\n';
  for (const auto& rec : records) {
    for (auto pair : kAllPairs) {
      out << format_double(rec.phi) << ',' << (rec.mirror_um ? format_double(*rec.mirror_um) : std::string{}) << ','
          << to_string(pair) << ',' << format_double(rec[pair].joint) << ',' << format_double(rec[pair].conditional)
          << ',';
      if (rec[pair].counts) out << *rec[pair].counts;
      out << '\n';
    }
  }
}

std::vector<FringeCsvRow> read_fringe_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty fringe CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kFringeCsvHeader) throw ConfigError("fringe CSV header mismatch: '" + line + "'");
  std::vector<FringeCsvRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 6) throw ConfigError("line " + std::to_string(lineno) + ": expected 6 fields");
    FringeCsvRow row;
    row.phi = parse_double(f[0], lineno);
    if (!f[1].empty()) row.mirror_um = parse_double(f[1], lineno);
    const auto pair = parse_pair(f[2]);
    if (!pair) throw ConfigError("line " + std::to_string(lineno) + ": unknown pair '" + f[2] + "'");
    row.pair = *pair;
    row.p_joint = parse_double(f[3], lineno);
    row.p_conditional = parse_double(f[4], lineno);
    if (!f[5].empty()) {
      try {
        std::size_t used = 0;
        row.counts = std::stoull(f[5], &used);
        if (used != f[5].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(lineno) + ": bad count '" + f[5] + "'");
      }
    }
    rows.push_back(row);
  }
  return rows;
}

void write_visibility_csv(std::ostream& out, const std::vector<VisibilityCurve>& curves) {
  out << kVisibilityCsvHeader << '\n';
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      out << format_double(p.alpha_sq) << ',' << to_string(c.pair) << ',' << format_double(p.visibility) << ','
          << (p.degenerate ? 1 : 0) << '\n';
    }
  }
}

void write_fringe_svg(std::ostream& out, const std::vector<FringeRecord>& records, Normalization normalization) {
  if (records.empty()) throw std::invalid_argument("nothing to plot");
  double x0 = records.front().phi, x1 = records.front().phi, y1 = 0.0;
  for (const auto& r : records) {
    x0 = std::min(x0, r.phi);
    x1 = std::max(x1, r.phi);
    for (auto pair : kAllPairs) {
      y1 = std::max(y1, normalization == Normalization::kJoint ? r[pair].joint : r[pair].conditional);
    }
  }
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == 0.0) y1 = 1.0;
  const Frame f{x0, x1, 0.0, y1};
  svg_open(out, f, "phi (rad)", normalization == Normalization::kJoint ? "joint probability" : "conditional probability");
  for (std::size_t k = 0; k < kAllPairs.size(); ++k) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : records) {
      const auto& p = r[kAllPairs[k]];
      pts.emplace_back(r.phi, normalization == Normalization::kJoint ? p.joint : p.conditional);
    }
    svg_series(out, f, pts, k, to_string(kAllPairs[k]));
  }
  out << "</svg>\n";
}

void write_visibility_svg(std::ostream& out, const std::vector<VisibilityCurve>& curves) {
  const Frame f{0.0, 1.0, 0.0, 1.0};
  svg_open(out, f, "alpha^2", "visibility");
  for (std::size_t k = 0; k < curves.size(); ++k) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : curves[k].points) pts.emplace_back(p.alpha_sq, p.visibility);
    svg_series(out, f, pts, k, to_string(curves[k].pair));
  }
  out << "</svg>\n";
}

}  // namespace telefock
