#include "fracpulse/config.hpp"

#include <algorithm>
#include <cmath>

namespace fracpulse {

namespace {

double parse_with_units(const std::string& text, const std::vector<std::pair<std::string, double>>& units,
                        const char* what) {
  std::string s = text;
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' '; }), s.end());
  for (const auto& [suffix, factor] : units) {
    if (s.size() > suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0) {
      const std::string num = s.substr(0, s.size() - suffix.size());
      try {
        std::size_t used = 0;
        const double v = std::stod(num, &used);
        if (used != num.size()) break;
        return v * factor;
      } catch (const std::exception&) {
        break;
      }
    }
  }
  // bare number: SI base unit
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw config_error(std::string("cannot parse ") + what + ": '" + text + "'");
}

}  // namespace

double parse_duration(const std::string& text) {
  return parse_with_units(text, {{"ns", 1e-9}, {"us", 1e-6}, {"ms", 1e-3}, {"s", 1.0}}, "duration");
}

double parse_energy(const std::string& text) {
  return parse_with_units(text, {{"neV", 1e-9}, {"ueV", 1e-6}, {"meV", 1e-3}, {"eV", 1.0}}, "energy");
}

double parse_voltage(const std::string& text) {
  return parse_with_units(text, {{"mV", 1e-3}, {"V", 1.0}}, "voltage");
}

void RunConfig::validate() const {
  if (noise_model != "tlf" && noise_model != "fbm")
    throw config_error("noise model must be tlf or fbm");
  if (!(alpha > 0.0) || !(alpha < 2.0)) throw config_error("alpha must be in (0,2)");
  if (!(f_min > 0.0) || !(f_max > f_min)) throw config_error("need 0 < f_min < f_max");
  if (!(r0 > 0.0)) throw config_error("R0 must be positive");
  if (!(gate_k > 0.0)) throw config_error("gate exponent k must be positive");
  if (!(duration > 0.0)) throw config_error("duration must be positive");
  if (shapes.empty()) throw config_error("at least one shape required");
  static const std::vector<std::string> axes = {"T", "alpha", "shape", "R0",
                                                "width", "dt", "dtau", "f"};
  if (std::find(axes.begin(), axes.end(), sweep_axis) == axes.end())
    throw config_error("unknown sweep axis: " + sweep_axis);
  if (sweep_points < 1) throw config_error("sweep needs at least one point");
  if (!(sweep_stop >= sweep_start)) throw config_error("sweep range is empty");
  if (kernel != "exact" && kernel != "coarse" && kernel != "improved" && kernel != "fbm")
    throw config_error("unknown kernel variant: " + kernel);
  if (grid_n < 8) throw config_error("grid_n must be at least 8");
  if (format != "csv" && format != "json") throw config_error("format must be csv or json");
  if (n_t < 2) throw config_error("n_t must be at least 2");
  if (n_bins < 4) throw config_error("n_bins must be at least 4");
  if (!(j_floor > 0.0)) throw config_error("j_floor must be positive");
  try {
    device.validate();
  } catch (const std::exception& e) {
    throw config_error(e.what());
  }
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["schema"] = "fracpulse-config/1";
  j["noise"] = {{"model", noise_model}, {"alpha", alpha},     {"f_min_hz", f_min},
                {"f_max_hz", f_max},    {"r0_v2", r0},        {"fbm_p0", fbm_p0},
                {"alphas", alphas}};
  j["device"] = {{"v0_volts", device.v0},
                 {"j0_ev", device.j0},
                 {"kappa_per_volt", device.kappa},
                 {"j_ceiling_ev", device.j_ceiling}};
  j["gate"] = {{"k", gate_k}, {"duration_s", duration}};
  j["shapes"] = shapes;
  j["shape_params"] = {{"sigma", sigma}, {"h", h}};
  j["sweep"] = {{"axis", sweep_axis},
                {"start", sweep_start},
                {"stop", sweep_stop},
                {"points", sweep_points},
                {"log", sweep_log}};
  j["kernel"] = kernel;
  j["quadrature"] = {{"grid_n", grid_n}};
  j["mc"] = {{"n_traj", n_traj}, {"n_t", n_t}, {"n_bins", n_bins}, {"seed", seed}};
  j["optimize"] = {{"max_iter", max_iter}, {"tol", fp_tol}};
  j["pulse"] = {{"n_samples", n_samples}, {"j_floor_ev", j_floor}, {"width", width}};
  j["output"] = {{"path", out_path}, {"format", format}};
  return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig c;
  try {
    if (j.contains("noise")) {
      const auto& n = j["noise"];
      c.noise_model = n.value("model", c.noise_model);
      c.alpha = n.value("alpha", c.alpha);
      c.f_min = n.value("f_min_hz", c.f_min);
      c.f_max = n.value("f_max_hz", c.f_max);
      c.r0 = n.value("r0_v2", c.r0);
      c.fbm_p0 = n.value("fbm_p0", c.fbm_p0);
      c.alphas = n.value("alphas", c.alphas);
    }
    if (j.contains("device")) {
      const auto& d = j["device"];
      c.device.v0 = d.value("v0_volts", c.device.v0);
      c.device.j0 = d.value("j0_ev", c.device.j0);
      c.device.kappa = d.value("kappa_per_volt", c.device.kappa);
      c.device.j_ceiling = d.value("j_ceiling_ev", c.device.j_ceiling);
    }
    if (j.contains("gate")) {
      c.gate_k = j["gate"].value("k", c.gate_k);
      c.duration = j["gate"].value("duration_s", c.duration);
    }
    if (j.contains("shapes")) c.shapes = j["shapes"].get<std::vector<std::string>>();
    if (j.contains("shape_params")) {
      c.sigma = j["shape_params"].value("sigma", c.sigma);
      c.h = j["shape_params"].value("h", c.h);
    }
    if (j.contains("sweep")) {
      const auto& s = j["sweep"];
      c.sweep_axis = s.value("axis", c.sweep_axis);
      c.sweep_start = s.value("start", c.sweep_start);
      c.sweep_stop = s.value("stop", c.sweep_stop);
      c.sweep_points = s.value("points", c.sweep_points);
      c.sweep_log = s.value("log", c.sweep_log);
    }
    c.kernel = j.value("kernel", c.kernel);
    if (j.contains("quadrature")) c.grid_n = j["quadrature"].value("grid_n", c.grid_n);
    if (j.contains("mc")) {
      const auto& m = j["mc"];
      c.n_traj = m.value("n_traj", c.n_traj);
      c.n_t = m.value("n_t", c.n_t);
      c.n_bins = m.value("n_bins", c.n_bins);
      c.seed = m.value("seed", c.seed);
    }
    if (j.contains("optimize")) {
      c.max_iter = j["optimize"].value("max_iter", c.max_iter);
      c.fp_tol = j["optimize"].value("tol", c.fp_tol);
    }
    if (j.contains("pulse")) {
      const auto& p = j["pulse"];
      c.n_samples = p.value("n_samples", c.n_samples);
      c.j_floor = p.value("j_floor_ev", c.j_floor);
      c.width = p.value("width", c.width);
    }
    if (j.contains("output")) {
      c.out_path = j["output"].value("path", c.out_path);
      c.format = j["output"].value("format", c.format);
    }
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("malformed config JSON: ") + e.what());
  }
  return c;
}

RunConfig RunConfig::preset(const std::string& name) {
  RunConfig c;
  if (name == "fig1") {
    // normalized auto-correlation and PSD curves, f_max/f_min = 1e6
    c.alphas = {0.5, 1.0, 1.5};
    c.sweep_axis = "dt";
    c.sweep_start = 1e-12;
    c.sweep_stop = 1e-3;
    c.sweep_points = 181;
  } else if (name == "fig2a") {
    // the four pulse shapes at T = 10 ns, optimal one at alpha = 1.4
    c.alpha = 1.4;
    c.duration = 1e-8;
    c.shapes = {"square", "gaussian", "exp_of_gaussian", "beta_optimal"};
    c.sweep_axis = "shape";
    c.sweep_points = 1;
    c.sweep_start = c.sweep_stop = 0.0;
  } else if (name == "fig2b") {
    c.sweep_axis = "T";
    c.sweep_start = 1e-9;
    c.sweep_stop = 1e-6;
    c.sweep_points = 25;
    c.alpha = 0.5;  // rerun with --alpha 1.4 for the second panel curve set
    c.shapes = {"square", "gaussian", "exp_of_gaussian", "beta_optimal"};
  } else if (name == "fig2c") {
    c.sweep_axis = "alpha";
    c.sweep_start = 0.25;
    c.sweep_stop = 1.75;
    c.sweep_points = 16;
    c.sweep_log = false;
    c.duration = 1e-8;  // rerun with --T 1us for the second pulse length
    c.shapes = {"square", "gaussian", "exp_of_gaussian", "beta_optimal"};
  } else if (name == "fig3") {
    // kernel comparison where the coarse approximation degrades: theta = 0.5
    c.alpha = 1.4;
    c.duration = 0.5 / (2.0 * M_PI * 1e4);
    c.sweep_axis = "dtau";
    c.sweep_start = 1e-4;
    c.sweep_stop = 1.0;
    c.sweep_points = 121;
  } else if (name == "validate-perturbative") {
    c.alpha = 1.0;
    c.r0 = 1e-10;
    c.duration = 1e-8;
    c.shapes = {"square", "gaussian", "beta_optimal"};
    c.n_traj = 100000;
    c.format = "json";
  } else {
    throw config_error("unknown preset: " + name);
  }
  return c;
}

std::vector<std::string> RunConfig::preset_names() {
  return {"fig1", "fig2a", "fig2b", "fig2c", "fig3", "validate-perturbative"};
}

ShapeFn make_shape_from_tag(const std::string& tag, double sigma, double h, double alpha) {
  if (tag == "square") return ShapeFn::square();
  if (tag == "gaussian") return ShapeFn::gaussian(sigma);
  if (tag == "exp_of_gaussian" || tag == "gaussian_voltage") return ShapeFn::exp_of_gaussian(sigma, h);
  if (tag == "beta_optimal") return ShapeFn::beta(alpha);
  if (tag.rfind("beta(", 0) == 0 && tag.back() == ')') {
    try {
      return ShapeFn::beta(std::stod(tag.substr(5, tag.size() - 6)));
    } catch (const std::exception&) {
      throw config_error("cannot parse beta shape tag: " + tag);
    }
  }
  throw config_error("unknown shape tag: " + tag);
}

}  // namespace fracpulse
