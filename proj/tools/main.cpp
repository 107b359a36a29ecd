// Command-line front end: figure-data regeneration, sweeps, waveform
// emission, shape optimization and Monte Carlo validation.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "fracpulse/config.hpp"
#include "fracpulse/runner.hpp"

namespace {

struct CliOverrides {
  std::string config_path, preset, out, format, kernel;
  std::string duration, alpha, fmin, fmax, r0, k, jfloor, width;
  std::vector<std::string> shapes;
  long long seed = -1;
  int grid_n = -1, n_t = -1, points = -1, max_iter = -1, n_samples = -1;
  long long n_traj = -1;
  std::string sweep_axis, sweep_start, sweep_stop;
};

fracpulse::RunConfig build_config(const CliOverrides& o) {
  using fracpulse::RunConfig;
  RunConfig cfg;
  if (!o.preset.empty()) cfg = RunConfig::preset(o.preset);
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw fracpulse::config_error("cannot read config file: " + o.config_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw fracpulse::config_error(std::string("config parse error: ") + e.what());
    }
    cfg = RunConfig::from_json(j);
  }
  // flags override file and preset values
  if (!o.out.empty()) cfg.out_path = o.out;
  if (!o.format.empty()) cfg.format = o.format;
  if (!o.kernel.empty()) cfg.kernel = o.kernel;
  if (!o.duration.empty()) cfg.duration = fracpulse::parse_duration(o.duration);
  if (!o.alpha.empty()) cfg.alpha = std::stod(o.alpha);
  if (!o.fmin.empty()) cfg.f_min = std::stod(o.fmin);
  if (!o.fmax.empty()) cfg.f_max = std::stod(o.fmax);
  if (!o.r0.empty()) cfg.r0 = std::stod(o.r0);
  if (!o.k.empty()) cfg.gate_k = std::stod(o.k);
  if (!o.jfloor.empty()) cfg.j_floor = fracpulse::parse_energy(o.jfloor);
  if (!o.width.empty()) cfg.width = std::stod(o.width);
  if (!o.shapes.empty()) cfg.shapes = o.shapes;
  if (o.seed >= 0) cfg.seed = static_cast<std::uint64_t>(o.seed);
  if (o.grid_n > 0) cfg.grid_n = o.grid_n;
  if (o.n_t > 0) cfg.n_t = o.n_t;
  if (o.points > 0) cfg.sweep_points = o.points;
  if (o.max_iter >= 0) cfg.max_iter = o.max_iter;
  if (o.n_samples > 0) cfg.n_samples = o.n_samples;
  if (o.n_traj > 0) cfg.n_traj = static_cast<std::size_t>(o.n_traj);
  if (!o.sweep_axis.empty()) cfg.sweep_axis = o.sweep_axis;
  if (!o.sweep_start.empty())
    cfg.sweep_start = (cfg.sweep_axis == "T" || cfg.sweep_axis == "dt")
                          ? fracpulse::parse_duration(o.sweep_start)
                          : std::stod(o.sweep_start);
  if (!o.sweep_stop.empty())
    cfg.sweep_stop = (cfg.sweep_axis == "T" || cfg.sweep_axis == "dt")
                         ? fracpulse::parse_duration(o.sweep_stop)
                         : std::stod(o.sweep_stop);
  return cfg;
}

void add_common(CLI::App* cmd, CliOverrides& o) {
  cmd->add_option("--config", o.config_path, "JSON config file");
  cmd->add_option("--preset", o.preset, "named preset (fig1, fig2a, fig2b, fig2c, fig3, validate-perturbative)");
  cmd->add_option("--out", o.out, "output path (stem for multi-file commands)");
  cmd->add_option("--format", o.format, "csv|json");
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--grid-n", o.grid_n, "quadrature grid size");
  cmd->add_option("--kernel", o.kernel, "exact|coarse|improved|fbm");
  cmd->add_option("--alpha", o.alpha, "spectral exponent");
  cmd->add_option("--T", o.duration, "pulse duration (accepts ns/us/ms/s)");
  cmd->add_option("--fmin", o.fmin, "low cutoff (Hz)");
  cmd->add_option("--fmax", o.fmax, "high cutoff (Hz)");
  cmd->add_option("--r0", o.r0, "noise energy R0 (V^2)");
  cmd->add_option("--k", o.k, "SWAP exponent k");
  cmd->add_option("--shape", o.shapes, "shape tags (square, gaussian, exp_of_gaussian, beta_optimal)");
  cmd->add_option("--j-floor", o.jfloor, "idle exchange floor (accepts eV/ueV/neV)");
  cmd->add_option("--points", o.points, "sweep point count");
  cmd->add_option("--axis", o.sweep_axis, "sweep axis (T|alpha|shape|R0|width|dt|dtau|f)");
  cmd->add_option("--start", o.sweep_start, "sweep start");
  cmd->add_option("--stop", o.sweep_stop, "sweep stop");
  cmd->add_option("--n-traj", o.n_traj, "Monte Carlo trajectory count");
  cmd->add_option("--n-t", o.n_t, "samples per trajectory");
  cmd->add_option("--max-iter", o.max_iter, "fixed-point iteration cap");
  cmd->add_option("--n-samples", o.n_samples, "waveform sample count");
  cmd->add_option("--width", o.width, "localized-pulse width in (0,1]");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"voltage pulse design and evaluation for exchange-driven SWAP^k gates under 1/f^alpha charge noise"};
  app.require_subcommand(1);

  CliOverrides o;
  auto* autocor = app.add_subcommand("autocor", "auto-correlation kernel curves");
  auto* psd = app.add_subcommand("psd", "power spectral density curves");
  auto* sweep = app.add_subcommand("sweep", "infidelity sweeps over T/alpha/shape/R0/width");
  auto* pulse = app.add_subcommand("pulse", "emit voltage waveforms");
  auto* optimize = app.add_subcommand("optimize", "fixed-point shape refinement");
  auto* validate = app.add_subcommand("validate", "Monte Carlo validation of the analytic infidelity");
  for (auto* cmd : {autocor, psd, sweep, pulse, optimize, validate}) add_common(cmd, o);

  CLI11_PARSE(app, argc, argv);

  try {
    const fracpulse::RunConfig cfg = build_config(o);
    std::vector<std::string> written;
    if (autocor->parsed()) written = fracpulse::cmd_autocor(cfg);
    if (psd->parsed()) written = fracpulse::cmd_psd(cfg);
    if (sweep->parsed()) written = fracpulse::cmd_sweep(cfg);
    if (pulse->parsed()) written = fracpulse::cmd_pulse(cfg);
    if (optimize->parsed()) written = fracpulse::cmd_optimize(cfg);
    if (validate->parsed()) written = fracpulse::cmd_validate(cfg);
    for (const std::string& p : written) std::cout << p << "\n";
  } catch (const fracpulse::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
