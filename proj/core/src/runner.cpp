#include "fracpulse/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "fracpulse/infidelity.hpp"
#include "fracpulse/montecarlo.hpp"
#include "fracpulse/noise.hpp"

namespace fracpulse {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string default_path(const RunConfig& cfg, const std::string& stem, const std::string& ext) {
  if (!cfg.out_path.empty()) return cfg.out_path;
  return stem + "." + ext;
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

std::vector<double> sweep_values(const RunConfig& cfg) {
  std::vector<double> v;
  const int n = cfg.sweep_points;
  if (n == 1) {
    v.push_back(cfg.sweep_start);
    return v;
  }
  for (int i = 0; i < n; ++i) {
    const double f = static_cast<double>(i) / (n - 1);
    if (cfg.sweep_log) {
      if (!(cfg.sweep_start > 0.0)) throw config_error("log sweep needs positive start");
      v.push_back(cfg.sweep_start * std::pow(cfg.sweep_stop / cfg.sweep_start, f));
    } else {
      v.push_back(cfg.sweep_start + (cfg.sweep_stop - cfg.sweep_start) * f);
    }
  }
  return v;
}

AutocorKernel kernel_for(const RunConfig& cfg, const TlfEnsembleModel& m, double T) {
  if (cfg.kernel == "exact") return exact_kernel(m, T);
  if (cfg.kernel == "coarse") return coarse_kernel(m, T);
  if (cfg.kernel == "improved") return improved_kernel(m, T);
  if (cfg.kernel == "fbm") {
    if (!(m.alpha > 1.0)) throw config_error("fbm kernel requires alpha in (1,2)");
    const double p0 = cfg.fbm_p0 > 0.0 ? cfg.fbm_p0 : p0_from_r0(m);
    FbmModel fm{p0, m.alpha, T};
    return fbm_kernel(fm);
  }
  throw config_error("unknown kernel variant: " + cfg.kernel);
}

TlfEnsembleModel model_for(const RunConfig& cfg, double alpha, double r0) {
  TlfEnsembleModel m{r0, cfg.f_min, cfg.f_max, alpha};
  m.validate();
  return m;
}

}  // namespace

std::vector<std::string> cmd_autocor(const RunConfig& cfg) {
  cfg.validate();
  const std::string path = default_path(cfg, "autocor", "csv");
  std::ofstream out = open_out(path);
  out << "# fracpulse-csv/1 autocor\n";
  const std::vector<double> xs = sweep_values(cfg);
  if (xs.empty()) throw config_error("autocor: empty sweep range");
  if (cfg.sweep_axis == "dt") {
    // normalized exact curves per alpha vs physical lag
    const std::vector<double> alphas = cfg.alphas.empty() ? std::vector<double>{cfg.alpha}
                                                          : cfg.alphas;
    out << "dt_s,value,variant\n";
    for (double a : alphas) {
      const TlfEnsembleModel m = model_for(cfg, a, cfg.r0);
      for (double dt : xs)
        out << fmt(dt) << "," << fmt(autocor_exact(m, dt) / m.r0) << ",alpha=" << fmt(a) << "\n";
    }
  } else if (cfg.sweep_axis == "dtau") {
    // exact/coarse/improved comparison at fixed alpha, T
    const TlfEnsembleModel m = model_for(cfg, cfg.alpha, cfg.r0);
    out << "dtau,value,variant\n";
    for (double d : xs)
      out << fmt(d) << "," << fmt(autocor_exact(m, d * cfg.duration)) << ",exact\n";
    for (double d : xs)
      out << fmt(d) << "," << fmt(autocor_coarse(m, cfg.duration, d, 0.0)) << ",coarse\n";
    for (double d : xs)
      out << fmt(d) << "," << fmt(autocor_improved(m, cfg.duration, d, 0.0)) << ",improved\n";
  } else {
    throw config_error("autocor expects sweep axis dt or dtau");
  }
  return {path};
}

std::vector<std::string> cmd_psd(const RunConfig& cfg) {
  cfg.validate();
  const std::string path = default_path(cfg, "psd", "csv");
  std::ofstream out = open_out(path);
  out << "# fracpulse-csv/1 psd\n";
  out << "f_hz,value,variant\n";
  std::vector<double> fs;
  if (cfg.sweep_axis == "f") {
    fs = sweep_values(cfg);
  } else {
    RunConfig fcfg = cfg;
    fcfg.sweep_axis = "f";
    fcfg.sweep_start = cfg.f_min * 1e-2;
    fcfg.sweep_stop = cfg.f_max * 1e2;
    fcfg.sweep_points = 181;
    fcfg.sweep_log = true;
    fs = sweep_values(fcfg);
  }
  const std::vector<double> alphas = cfg.alphas.empty() ? std::vector<double>{cfg.alpha} : cfg.alphas;
  for (double a : alphas) {
    const TlfEnsembleModel m = model_for(cfg, a, cfg.r0);
    for (double f : fs) out << fmt(f) << "," << fmt(psd(m, f)) << ",alpha=" << fmt(a) << "\n";
  }
  return {path};
}

std::vector<std::string> cmd_sweep(const RunConfig& cfg) {
  cfg.validate();
  const std::string path = default_path(cfg, "sweep", "csv");
  std::ofstream out = open_out(path);
  out << "# fracpulse-csv/1 sweep\n";
  out << "axis_value,shape,kernel,quad_form_v2,infidelity,quad_error\n";
  const std::vector<double> xs = sweep_values(cfg);
  const GateSpec gate{cfg.gate_k, cfg.duration};

  if (cfg.sweep_axis == "width") {
    // localized square family against the fbm kernel
    const TlfEnsembleModel m = model_for(cfg, cfg.alpha, cfg.r0);
    const double p0 = cfg.fbm_p0 > 0.0 ? cfg.fbm_p0 : p0_from_r0(m);
    const FbmModel fm{p0, cfg.alpha, cfg.duration};
    for (double w : xs) {
      const double q = fbm_localized_family(fm, w);
      const double infid =
          3.0 * M_PI * M_PI / 32.0 * gate.k * gate.k * cfg.device.kappa * cfg.device.kappa * q;
      out << fmt(w) << ",localized_square,fbm," << fmt(q) << "," << fmt(infid) << ",0\n";
    }
    return {path};
  }

  struct ShapeEntry {
    std::string tag;
    ShapeFn fn;
    LagProfile profile;
    bool alpha_dependent;
  };
  std::vector<ShapeEntry> entries;
  for (const std::string& tag : cfg.shapes) {
    const bool adep = (tag == "beta_optimal") && cfg.sweep_axis == "alpha";
    ShapeFn fn = make_shape_from_tag(tag, cfg.sigma, cfg.h, cfg.alpha);
    LagProfile pr = adep ? LagProfile{} : build_lag_profile(fn, fn);
    entries.push_back({tag, std::move(fn), std::move(pr), adep});
  }

  for (double x : xs) {
    const double alpha = (cfg.sweep_axis == "alpha") ? x : cfg.alpha;
    const double r0 = (cfg.sweep_axis == "R0") ? x : cfg.r0;
    const double T = (cfg.sweep_axis == "T") ? x : cfg.duration;
    const TlfEnsembleModel m = model_for(cfg, alpha, r0);
    const AutocorKernel kern = kernel_for(cfg, m, T);
    const GateSpec g{cfg.gate_k, T};
    for (auto& e : entries) {
      QuadFormResult q;
      if (e.alpha_dependent) {
        const ShapeFn fn = ShapeFn::beta(alpha);
        q = quadratic_form(fn, kern);
      } else {
        q = quadratic_form_from_profile(e.profile, kern);
      }
      const double infid =
          3.0 * M_PI * M_PI / 32.0 * g.k * g.k * cfg.device.kappa * cfg.device.kappa * q.value;
      out << fmt(x) << "," << e.tag << "," << cfg.kernel << "," << fmt(q.value) << ","
          << fmt(infid) << "," << fmt(q.error_estimate) << "\n";
    }
  }
  return {path};
}

nlohmann::json waveform_to_json(const VoltageWaveform& wf) {
  nlohmann::json j;
  j["schema"] = "fracpulse-waveform/1";
  j["shape"] = wf.shape_tag;
  j["gate_k"] = wf.gate_k;
  j["duration_s"] = wf.duration;
  j["j_floor_ev"] = wf.j_floor;
  j["clipped_samples"] = wf.clipped_samples;
  j["device"] = {{"v0_volts", wf.device.v0},
                 {"j0_ev", wf.device.j0},
                 {"kappa_per_volt", wf.device.kappa}};
  j["t_s"] = wf.t;
  j["v_volts"] = wf.v;
  j["j_ev"] = wf.j;
  return j;
}

std::vector<std::string> cmd_pulse(const RunConfig& cfg) {
  cfg.validate();
  const GateSpec gate{cfg.gate_k, cfg.duration};
  std::vector<std::string> written;
  const std::string stem = cfg.out_path.empty() ? "pulse" : cfg.out_path;
  for (const std::string& tag : cfg.shapes) {
    VoltageWaveform wf;
    if (tag == "beta_optimal") {
      wf = optimal_voltage_pulse(gate, cfg.device, cfg.alpha, cfg.n_samples, cfg.j_floor);
    } else {
      const ShapeFn fn = make_shape_from_tag(tag, cfg.sigma, cfg.h, cfg.alpha);
      wf = emit_waveform(fn, gate, cfg.device, cfg.n_samples, cfg.j_floor);
    }
    const std::string csv_path = stem + "_" + tag + ".csv";
    std::ofstream out = open_out(csv_path);
    out << "# fracpulse-csv/1 waveform\n";
    out << "t_s,v_volts,j_ev\n";
    for (std::size_t i = 0; i < wf.t.size(); ++i)
      out << fmt(wf.t[i]) << "," << fmt(wf.v[i]) << "," << fmt(wf.j[i]) << "\n";
    written.push_back(csv_path);
    const std::string json_path = stem + "_" + tag + ".json";
    std::ofstream jout = open_out(json_path);
    jout << waveform_to_json(wf).dump(2) << "\n";
    written.push_back(json_path);
  }
  return written;
}

nlohmann::json shape_to_json(const ShapeFn& shape) {
  const QuadratureGrid* g = shape.sample_grid();
  if (!g) throw std::invalid_argument("shape_to_json: only sampled shapes serialize");
  nlohmann::json j;
  j["schema"] = "fracpulse-shape/1";
  j["endpoint_exponent"] = shape.endpoint_exponent();
  j["grid"] = {{"scheme", g->scheme_tag()},
               {"p", g->p},
               {"q", g->q},
               {"n", g->size()},
               {"nodes", g->nodes},
               {"weights", g->weights}};
  j["values"] = shape.sample_values();
  return j;
}

ShapeFn shape_from_json(const nlohmann::json& j) {
  QuadratureGrid g;
  const auto& jg = j.at("grid");
  const std::string scheme = jg.at("scheme").get<std::string>();
  g.scheme = scheme.rfind("jacobi", 0) == 0 ? GridScheme::jacobi
             : scheme == "uniform"          ? GridScheme::uniform
                                            : GridScheme::legendre;
  g.p = jg.value("p", 0.0);
  g.q = jg.value("q", 0.0);
  g.nodes = jg.at("nodes").get<std::vector<double>>();
  g.weights = jg.at("weights").get<std::vector<double>>();
  return ShapeFn::sampled(std::move(g), j.at("values").get<std::vector<double>>(),
                          j.value("endpoint_exponent", 0.0));
}

std::vector<std::string> cmd_optimize(const RunConfig& cfg) {
  cfg.validate();
  if (!(cfg.alpha > 0.0) || !(cfg.alpha < 1.0))
    throw config_error("optimize: fixed-point refinement supports alpha in (0,1) only");
  const TlfEnsembleModel m = model_for(cfg, cfg.alpha, cfg.r0);
  const GateSpec gate{cfg.gate_k, cfg.duration};
  const QuadratureGrid grid =
      make_grid(GridScheme::jacobi, cfg.grid_n, -cfg.alpha / 2.0, -cfg.alpha / 2.0);
  const OptimizationResult res =
      fixed_point_refine(m, gate, grid, cfg.max_iter, cfg.fp_tol);

  const std::string stem = cfg.out_path.empty() ? "optimize" : cfg.out_path;
  const std::string shape_path = stem + "_shape.json";
  const std::string report_path = stem + "_report.json";
  {
    std::ofstream out = open_out(shape_path);
    out << shape_to_json(res.shape).dump(2) << "\n";
  }
  nlohmann::json rep;
  rep["schema"] = "fracpulse-optimize/1";
  rep["generated_at"] = timestamp();
  rep["config"] = cfg.to_json();
  rep["iterations"] = res.iterations;
  rep["converged"] = res.converged;
  rep["residual_l1"] =
      std::isnan(res.residual) ? nlohmann::json() : nlohmann::json(res.residual);
  rep["lambda_trace"] = res.lambda_trace;
  rep["l1_distance_to_beta"] = res.l1_distance_to_beta;
  rep["infidelity_ratio_vs_beta"] = res.infidelity_ratio_vs_beta;
  rep["warning"] = res.warning;
  {
    std::ofstream out = open_out(report_path);
    out << rep.dump(2) << "\n";
  }
  if (!res.converged && cfg.max_iter > 0)
    throw std::runtime_error("optimize: fixed-point iteration did not converge (report written)");
  return {shape_path, report_path};
}

std::vector<std::string> cmd_validate(const RunConfig& cfg) {
  cfg.validate();
  const TlfEnsembleModel m = model_for(cfg, cfg.alpha, cfg.r0);
  const GateSpec gate{cfg.gate_k, cfg.duration};
  const AutocorKernel kern = exact_kernel(m, cfg.duration);

  nlohmann::json rep;
  rep["schema"] = "fracpulse-validate/1";
  rep["generated_at"] = timestamp();
  rep["config"] = cfg.to_json();
  rep["results"] = nlohmann::json::array();

  McOptions mo;
  mo.n_t = cfg.n_t;
  mo.n_bins = cfg.n_bins;
  mo.j_floor = cfg.j_floor;

  std::string table = "shape,mc_mean,mc_stderr,analytic,ratio\n";
  for (const std::string& tag : cfg.shapes) {
    const ShapeFn fn = make_shape_from_tag(tag, cfg.sigma, cfg.h, cfg.alpha);
    const McEstimate est =
        estimate_infidelity(m, fn, gate, cfg.device.kappa, cfg.n_traj, cfg.seed, mo);
    const InfidelityReport ana = average_infidelity(fn, gate, cfg.device.kappa, kern);
    nlohmann::json r;
    r["shape"] = tag;
    r["n_traj"] = est.n_traj;
    r["seed"] = est.seed;
    r["mc_mean"] = est.mean;
    r["mc_stderr"] = est.std_error;
    r["dtheta_variance"] = est.dtheta_variance;
    r["dtheta_kurtosis"] = est.dtheta_kurtosis;
    r["analytic_infidelity"] = ana.infidelity;
    if (cfg.n_traj >= 1000) {
      r["ratio_mc_over_analytic"] = est.mean / ana.infidelity;
    } else {
      r["ratio_mc_over_analytic"] = nullptr;  // below reporting threshold
    }
    r["warning"] = est.warning;
    rep["results"].push_back(r);
    table += tag + "," + fmt(est.mean) + "," + fmt(est.std_error) + "," + fmt(ana.infidelity) +
             "," + (cfg.n_traj >= 1000 ? fmt(est.mean / ana.infidelity) : "n/a") + "\n";
  }
  const std::string path = default_path(cfg, "validate", "json");
  std::ofstream out = open_out(path);
  out << rep.dump(2) << "\n";
  std::vector<std::string> written{path};
  if (cfg.format == "csv") {
    const std::string tpath = path + ".table.csv";
    std::ofstream tout = open_out(tpath);
    tout << "# fracpulse-csv/1 validate\n" << table;
    written.push_back(tpath);
  }
  return written;
}

}  // namespace fracpulse
