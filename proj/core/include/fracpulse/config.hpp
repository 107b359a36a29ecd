#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracpulse/shapes.hpp"

namespace fracpulse {

/// Raised for malformed configuration (CLI exit code 2).
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parse "10ns", "2.5us", "1ms", "3s" into seconds.
double parse_duration(const std::string& text);
/// Parse "0.01ueV", "5neV", "1e-8eV" into eV.
double parse_energy(const std::string& text);
/// Parse "40mV", "0.04V" into volts.
double parse_voltage(const std::string& text);

/// One run of the CLI: a noise model, device, gate, shape selection, a single
/// sweep axis, kernel and quadrature settings, MC settings, output target.
struct RunConfig {
  // noise model
  std::string noise_model = "tlf";  // tlf | fbm
  double alpha = 1.0;
  double f_min = 1e4;   // Hz
  double f_max = 1e10;  // Hz
  double r0 = 1e-6;     // V^2
  double fbm_p0 = 0.0;  // V^2 Hz^{alpha-1}; defaults to the tlf P0 when 0

  DeviceParams device = DeviceParams::paper_preset();
  double gate_k = 1.0;
  double duration = 1e-8;  // s

  std::vector<std::string> shapes = {"square"};
  double sigma = 0.12;
  double h = 10.0;
  std::vector<double> alphas;  // multi-curve autocor/psd output

  // sweep axis: T | alpha | shape | R0 | width | dt | dtau | f
  std::string sweep_axis = "T";
  double sweep_start = 1e-9;
  double sweep_stop = 1e-5;
  int sweep_points = 25;
  bool sweep_log = true;

  std::string kernel = "exact";  // exact | coarse | improved | fbm
  int grid_n = 128;

  std::uint64_t seed = 12345;
  std::size_t n_traj = 100000;
  int n_t = 4096;
  int n_bins = 64;

  int max_iter = 200;
  double fp_tol = 1e-10;

  int n_samples = 1001;
  double j_floor = 1e-8;  // eV
  double width = 1.0;     // fbm localized family

  std::string out_path;
  std::string format = "csv";  // csv | json

  void validate() const;
  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
  /// fig1 | fig2a | fig2b | fig2c | fig3 | validate-perturbative
  static RunConfig preset(const std::string& name);
  static std::vector<std::string> preset_names();
};

/// Build a catalog shape from its tag: square, gaussian, exp_of_gaussian
/// (alias gaussian_voltage), beta_optimal, beta(<alpha>).
ShapeFn make_shape_from_tag(const std::string& tag, double sigma, double h, double alpha);

}  // namespace fracpulse
