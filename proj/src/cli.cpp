#include "telefock/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "telefock/emulation.hpp"
#include "telefock/io.hpp"
#include "telefock/protocol.hpp"

namespace telefock {

namespace {

namespace fs = std::filesystem;

struct ExperimentFlags {
  std::string config_path;
  std::optional<double> alpha_sq, bsb_r_sq, phase_start, phase_stop, mirror_start, mirror_stop, lambda, eta;
  std::optional<int> steps;
  std::optional<std::string> variant, normalization;
  std::optional<std::uint64_t> shots, seed;
  std::string out, svg, report;
  bool json = false;
  bool timing = false;
};

void add_experiment_flags(CLI::App* cmd, ExperimentFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON experiment config (flags override it)");
  cmd->add_option("--alpha-sq", f.alpha_sq, "input superposition weight alpha^2");
  cmd->add_option("--bsb-r-sq", f.bsb_r_sq, "verification splitter reflectivity r_B^2 (default: matched to alpha^2)");
  cmd->add_option("--phase-start", f.phase_start, "first phase (rad)");
  cmd->add_option("--phase-stop", f.phase_stop, "end of the half-open phase range (rad)");
  cmd->add_option("--steps", f.steps, "sweep points");
  cmd->add_option("--mirror-start-um", f.mirror_start, "first mirror position (um); switches to a mirror sweep");
  cmd->add_option("--mirror-stop-um", f.mirror_stop, "end of the half-open mirror range (um)");
  cmd->add_option("--lambda-um", f.lambda, "wavelength (um)");
  cmd->add_option("--eta", f.eta, "detector quantum efficiency");
  cmd->add_option("--variant", f.variant, "passive | active")->check(CLI::IsMember({"passive", "active"}));
  cmd->add_option("--shots", f.shots, "emissions per sweep point (0 = analytic)");
  cmd->add_option("--seed", f.seed, "64-bit RNG seed");
  cmd->add_option("--normalization", f.normalization, "joint | conditional")
      ->check(CLI::IsMember({"joint", "conditional"}));
  cmd->add_option("--out", f.out, "CSV output path (default: stdout)");
  cmd->add_option("--svg", f.svg, "optional SVG plot path");
  cmd->add_flag("--json", f.json, "print the machine-readable report on stdout");
  cmd->add_flag("--timing", f.timing, "include wall-clock timing in JSON reports");
}

fs::path resolve_output(const std::string& path) {
  fs::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv(kOutDirEnv); dir && *dir) p = fs::path(dir) / p;
  }
  return p;
}

std::ofstream open_output(const std::string& path) {
  const auto p = resolve_output(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + p.string() + "' for writing");
  return f;
}

ExperimentConfig build_config(const ExperimentFlags& f) {
  ExperimentConfig cfg;
  try {
    if (!f.config_path.empty()) {
      std::ifstream in(f.config_path);
      if (!in) throw ConfigError("cannot read config '" + f.config_path + "'");
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config '" + f.config_path + "' is not valid JSON: " + e.what());
      }
      cfg = config_from_json(j, cfg);
    }
    if (f.alpha_sq) cfg.input = InputQubit::from_alpha_sq(*f.alpha_sq);
    if (f.bsb_r_sq) cfg.bsb_r_sq = *f.bsb_r_sq;
    if (f.lambda) cfg.wavelength_um = *f.lambda;
    if (f.mirror_start || f.mirror_stop) {
      MirrorSweep m;
      if (const auto* old = std::get_if<MirrorSweep>(&cfg.sweep)) m = *old;
      else m.stop_um = phase_to_mirror(2.0 * std::numbers::pi, cfg.wavelength_um);
      if (f.mirror_start) m.start_um = *f.mirror_start;
      if (f.mirror_stop) m.stop_um = *f.mirror_stop;
      cfg.sweep = m;
    } else if (f.phase_start || f.phase_stop) {
      PhaseSweep p;
      if (const auto* old = std::get_if<PhaseSweep>(&cfg.sweep)) p = *old;
      if (f.phase_start) p.start = *f.phase_start;
      if (f.phase_stop) p.stop = *f.phase_stop;
      cfg.sweep = p;
    }
    if (f.steps) std::visit([&](auto& s) { s.steps = *f.steps; }, cfg.sweep);
    if (f.eta) cfg.eta = *f.eta;
    if (f.variant) cfg.variant = *f.variant == "active" ? Variant::kActive : Variant::kPassive;
    if (f.normalization) {
      cfg.normalization = *f.normalization == "joint" ? Normalization::kJoint : Normalization::kConditional;
    }
    if (f.shots) cfg.shots = *f.shots;
    if (f.seed) cfg.seed = *f.seed;
    cfg.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

void emit_csv(const ExperimentFlags& f, const std::vector<FringeRecord>& records, std::ostream& out) {
  if (f.out.empty()) {
    if (!f.json) write_fringe_csv(out, records);
    return;
  }
  auto file = open_output(f.out);
  write_fringe_csv(file, records);
}

void emit_report(const ExperimentFlags& f, const RunReport& report, std::ostream& out) {
  emit_csv(f, report.records, out);
  if (!f.svg.empty()) {
    auto file = open_output(f.svg);
    write_fringe_svg(file, report.records, report.config.normalization);
  }
  if (f.json) out << to_json(report, f.timing).dump(2) << '\n';
}

std::vector<double> alpha_grid(double lo, double hi, int n) {
  if (n < 2) throw ConfigError("--grid needs at least two points");
  if (!(lo >= 0.0 && hi <= 1.0 && lo < hi)) throw ConfigError("alpha^2 range must satisfy 0 <= min < max <= 1");
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return g;
}

int run_fit(const std::string& in_path, const std::string& pair_label, const std::string& column, std::ostream& out) {
  std::ifstream in(in_path);
  if (!in) throw ConfigError("cannot read '" + in_path + "'");
  const auto rows = read_fringe_csv(in);
  std::optional<DetectorPair> only;
  if (!pair_label.empty()) {
    only = parse_pair(pair_label);
    if (!only) throw ConfigError("unknown pair '" + pair_label + "'");
  }
  nlohmann::json report = nlohmann::json::object();
  for (auto pair : kAllPairs) {
    if (only && pair != *only) continue;
    std::vector<FringeSample> samples;
    bool have_counts = true;
    for (const auto& r : rows) {
      if (r.pair == pair && !r.counts) have_counts = false;
    }
    const bool use_counts = column == "counts" || (column == "auto" && have_counts);
    for (const auto& r : rows) {
      if (r.pair != pair) continue;
      if (use_counts && !r.counts) throw ConfigError("counts column is empty for " + std::string(to_string(pair)));
      double v = r.p_conditional;
      if (use_counts) v = static_cast<double>(*r.counts);
      else if (column == "p_joint") v = r.p_joint;
      samples.push_back({r.phi, v});
    }
    if (samples.empty()) continue;
    auto j = to_json(fit_visibility(samples));
    j["column"] = use_counts ? "counts" : (column == "p_joint" ? "p_joint" : "p_conditional");
    report[std::string(to_string(pair))] = j;
  }
  out << report.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Few-photon Fock-space simulator of vacuum/one-photon qubit teleportation", "telefock"};
  app.require_subcommand(1);

  ExperimentFlags fringe_flags, sweep_flags, bell_flags, mc_flags;
  auto* fringe = app.add_subcommand("fringe", "analytic coincidence fringes over a phase sweep");
  add_experiment_flags(fringe, fringe_flags);

  auto* vis = app.add_subcommand("visibility-sweep", "fringe visibility versus alpha^2");
  add_experiment_flags(vis, sweep_flags);
  int grid = 41;
  double alpha_min = 0.02, alpha_max = 0.98;
  std::string vis_pair;
  vis->add_option("--grid", grid, "alpha^2 grid points")->capture_default_str();
  vis->add_option("--alpha-min", alpha_min, "smallest alpha^2")->capture_default_str();
  vis->add_option("--alpha-max", alpha_max, "largest alpha^2")->capture_default_str();
  vis->add_option("--pair", vis_pair, "restrict to one detector pair, e.g. D2-D1*");

  auto* bell = app.add_subcommand("bell-stats", "Alice's Bell-class probabilities as JSON");
  add_experiment_flags(bell, bell_flags);
  double bell_phi = 0.0;
  bell->add_option("--phi", bell_phi, "phase on k_S (rad)")->capture_default_str();

  auto* mc = app.add_subcommand("simulate-counts", "Monte Carlo coincidence counts with detector efficiency");
  add_experiment_flags(mc, mc_flags);
  mc->add_option("--report", mc_flags.report, "write the JSON run report to this path");

  auto* fit = app.add_subcommand("fit", "fit A(1 + V cos(phi + phi0)) to a fringe CSV");
  std::string fit_in, fit_pair, fit_column = "auto";
  fit->add_option("--in", fit_in, "fringe CSV")->required();
  fit->add_option("--pair", fit_pair, "restrict to one detector pair");
  fit->add_option("--column", fit_column, "auto | counts | p_conditional | p_joint")
      ->check(CLI::IsMember({"auto", "counts", "p_conditional", "p_joint"}))
      ->capture_default_str();

  std::vector<std::string> argv_store{"telefock"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitConfig;
  }

  try {
    if (fringe->parsed()) {
      auto cfg = build_config(fringe_flags);
      emit_report(fringe_flags, analytic_report(cfg), out);
    } else if (vis->parsed()) {
      auto cfg = build_config(sweep_flags);
      const auto alphas = alpha_grid(alpha_min, alpha_max, grid);
      std::vector<VisibilityCurve> curves;
      for (auto pair : kAllPairs) {
        if (!vis_pair.empty() && to_string(pair) != vis_pair) continue;
        curves.push_back({pair, visibility_sweep(cfg, alphas, pair)});
      }
      if (curves.empty()) throw ConfigError("unknown pair '" + vis_pair + "'");
      if (!sweep_flags.out.empty()) {
        auto file = open_output(sweep_flags.out);
        write_visibility_csv(file, curves);
      } else if (!sweep_flags.json) {
        write_visibility_csv(out, curves);
      }
      if (!sweep_flags.svg.empty()) {
        auto file = open_output(sweep_flags.svg);
        write_visibility_svg(file, curves);
      }
      if (sweep_flags.json) {
        nlohmann::json j;
        j["config"] = to_json(cfg);
        for (const auto& c : curves) {
          auto& arr = j["curves"][std::string(to_string(c.pair))];
          for (const auto& p : c.points) {
            arr.push_back({{"alpha_sq", p.alpha_sq}, {"visibility", p.visibility}, {"degenerate", p.degenerate}});
          }
        }
        out << j.dump(2) << '\n';
      }
    } else if (bell->parsed()) {
      auto cfg = build_config(bell_flags);
      const auto p = bell_probabilities(cfg.input, bell_phi);
      nlohmann::json j = {{"psi1", p[0]}, {"psi2", p[1]}, {"psi3", p[2]}, {"psi4", p[3]}};
      out << j.dump(bell_flags.json ? 2 : -1) << '\n';
    } else if (mc->parsed()) {
      auto cfg = build_config(mc_flags);
      if (cfg.shots == 0) throw ConfigError("simulate-counts needs --shots > 0");
      const auto report = simulate_counts(cfg);
      emit_report(mc_flags, report, out);
      if (!mc_flags.report.empty()) {
        auto file = open_output(mc_flags.report);
        file << to_json(report, mc_flags.timing).dump(2) << '\n';
      }
    } else if (fit->parsed()) {
      return run_fit(fit_in, fit_pair, fit_column, out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace telefock
