#include "fracpulse/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fracpulse/special.hpp"

namespace fracpulse {

namespace {

double gaussian_profile(double tau, double sigma) {
  const double x = (tau - 0.5) / sigma;
  return std::exp(-0.5 * x * x);
}

}  // namespace

ShapeFn ShapeFn::square() {
  ShapeFn s;
  s.variant_ = ShapeVariant::square;
  s.tag_ = "square";
  return s;
}

ShapeFn ShapeFn::gaussian(double sigma) {
  if (!(sigma > 0.0)) throw std::domain_error("ShapeFn::gaussian: sigma must be positive");
  ShapeFn s;
  s.variant_ = ShapeVariant::gaussian;
  s.tag_ = "gaussian";
  s.sigma_ = sigma;
  // int exp(-(tau-1/2)^2 / 2 sigma^2) dtau = sigma sqrt(2 pi) erf(1/(2 sqrt2 sigma))
  s.norm_ = sigma * std::sqrt(2.0 * M_PI) * std::erf(1.0 / (2.0 * std::sqrt(2.0) * sigma));
  return s;
}

ShapeFn ShapeFn::exp_of_gaussian(double sigma, double h) {
  if (!(sigma > 0.0)) throw std::domain_error("ShapeFn::exp_of_gaussian: sigma must be positive");
  ShapeFn s;
  s.variant_ = ShapeVariant::exp_of_gaussian;
  s.tag_ = "exp_of_gaussian";
  s.sigma_ = sigma;
  s.h_ = h;
  // proportional normalization of the raw exponential, no baseline subtraction
  std::vector<double> xn, xw;
  gauss_legendre_01(512, xn, xw);
  double z = 0.0;
  for (std::size_t i = 0; i < xn.size(); ++i)
    z += xw[i] * std::exp(h * gaussian_profile(xn[i], sigma));
  s.norm_ = z;
  return s;
}

ShapeFn ShapeFn::beta(double alpha) {
  if (alpha < 0.0 || alpha >= 2.0) throw std::domain_error("ShapeFn::beta: alpha must be in [0,2)");
  ShapeFn s;
  s.variant_ = ShapeVariant::beta;
  s.tag_ = "beta(" + std::to_string(alpha) + ")";
  s.alpha_ = alpha;
  s.endpoint_exp_ = -alpha / 2.0;
  s.norm_ = beta_fn(1.0 - alpha / 2.0, 1.0 - alpha / 2.0);
  return s;
}

ShapeFn ShapeFn::sampled(QuadratureGrid grid, std::vector<double> values,
                         double endpoint_exponent) {
  if (grid.size() != values.size())
    throw std::invalid_argument("ShapeFn::sampled: grid/value size mismatch");
  if (endpoint_exponent <= -1.0)
    throw std::domain_error("ShapeFn::sampled: endpoint exponent must be > -1");
  ShapeFn s;
  s.variant_ = ShapeVariant::sampled;
  s.tag_ = "sampled";
  s.endpoint_exp_ = endpoint_exponent;
  s.grid_ = std::make_shared<QuadratureGrid>(std::move(grid));
  s.values_ = std::move(values);
  // renormalize so the grid quadrature of the samples is exactly 1
  const std::vector<double> pw = s.grid_->plain_weights();
  double total = 0.0;
  for (std::size_t i = 0; i < pw.size(); ++i) total += pw[i] * s.values_[i];
  if (!(total > 0.0)) throw std::domain_error("ShapeFn::sampled: samples do not integrate to > 0");
  for (double& v : s.values_) v /= total;
  s.regular_.resize(s.values_.size());
  for (std::size_t i = 0; i < s.values_.size(); ++i) {
    const double tau = s.grid_->nodes[i];
    s.regular_[i] = s.values_[i] * std::pow(tau * (1.0 - tau), -endpoint_exponent);
  }
  s.bary_ = barycentric_weights(s.grid_->nodes);
  return s;
}

double ShapeFn::regular_part(double tau) const {
  switch (variant_) {
    case ShapeVariant::square:
      return 1.0;
    case ShapeVariant::gaussian:
      return gaussian_profile(tau, sigma_) / norm_;
    case ShapeVariant::exp_of_gaussian:
      return std::exp(h_ * gaussian_profile(tau, sigma_)) / norm_;
    case ShapeVariant::beta:
      return 1.0 / norm_;
    case ShapeVariant::sampled:
      return barycentric_interpolate(grid_->nodes, bary_, regular_, tau);
  }
  return 0.0;
}

double ShapeFn::operator()(double tau) const {
  if (tau < 0.0 || tau > 1.0) throw std::domain_error("ShapeFn: tau must lie in [0,1]");
  if (endpoint_exp_ == 0.0) return regular_part(tau);
  const double edge = tau * (1.0 - tau);
  if (edge == 0.0) return std::numeric_limits<double>::infinity();
  return regular_part(tau) * std::pow(edge, endpoint_exp_);
}

double ShapeFn::max_value() const {
  switch (variant_) {
    case ShapeVariant::square:
      return 1.0;
    case ShapeVariant::gaussian:
      return 1.0 / norm_;
    case ShapeVariant::exp_of_gaussian:
      return std::exp(h_) / norm_;
    case ShapeVariant::beta:
      return alpha_ == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    case ShapeVariant::sampled: {
      if (endpoint_exp_ < 0.0) return std::numeric_limits<double>::infinity();
      return *std::max_element(values_.begin(), values_.end());
    }
  }
  return 1.0;
}

void DeviceParams::validate() const {
  if (!(j0 > 0.0)) throw std::domain_error("DeviceParams: J(V0) must be positive");
  if (!(kappa > 0.0)) throw std::domain_error("DeviceParams: kappa must be positive");
}

DeviceParams DeviceParams::paper_preset() { return DeviceParams{0.04, 1e-8, 80.0}; }

void GateSpec::validate() const {
  if (!(k > 0.0)) throw std::domain_error("GateSpec: k must be positive");
  if (!(T > 0.0)) throw std::domain_error("GateSpec: T must be positive");
}

double exchange_from_voltage(const DeviceParams& d, double v) {
  d.validate();
  return d.j0 * std::exp(d.kappa * (v - d.v0));
}

double voltage_from_exchange(const DeviceParams& d, double j) {
  d.validate();
  if (!(j > 0.0)) throw std::domain_error("voltage_from_exchange: J must be positive");
  return d.v0 + std::log(j / d.j0) / d.kappa;
}

VoltageWaveform waveform_from_exchange_samples(std::vector<double> j_raw, const GateSpec& gate,
                                               const DeviceParams& device, double j_floor,
                                               std::string shape_tag) {
  gate.validate();
  device.validate();
  const int n = static_cast<int>(j_raw.size());
  if (n < 8) throw std::invalid_argument("waveform: need at least 8 samples");
  if (!(j_floor > 0.0)) throw std::invalid_argument("waveform: j_floor must be positive");

  VoltageWaveform wf;
  wf.device = device;
  wf.gate_k = gate.k;
  wf.duration = gate.T;
  wf.shape_tag = std::move(shape_tag);
  wf.j_floor = j_floor;
  wf.j = std::move(j_raw);
  wf.t.resize(n);

  std::vector<bool> clipped(n, false);
  const double h = gate.T / (n - 1);
  for (int i = 0; i < n; ++i) {
    wf.t[i] = i * h;
    if (!std::isfinite(wf.j[i]) || wf.j[i] < j_floor) {
      wf.j[i] = j_floor;
      clipped[i] = true;
      ++wf.clipped_samples;
    }
  }

  // rescale the unclipped interior so the trapezoid area recovers pi k hbar
  const double area = M_PI * gate.k * hbar_ev_s;
  double area_clip = 0.0, area_free = 0.0;
  for (int i = 0; i < n; ++i) {
    const double tw = (i == 0 || i == n - 1) ? 0.5 * h : h;
    (clipped[i] ? area_clip : area_free) += tw * wf.j[i];
  }
  if (!(area_free > 0.0) || area <= area_clip)
    throw std::invalid_argument("waveform: clipping leaves no pulse area to renormalize");
  const double scale = (area - area_clip) / area_free;
  for (int i = 0; i < n; ++i)
    if (!clipped[i]) wf.j[i] *= scale;

  const double peak_after = *std::max_element(wf.j.begin(), wf.j.end());
  if (peak_after > device.j_ceiling)
    throw std::invalid_argument("waveform: peak exchange exceeds device ceiling");

  wf.v.resize(n);
  for (int i = 0; i < n; ++i) wf.v[i] = voltage_from_exchange(device, wf.j[i]);
  return wf;
}

VoltageWaveform emit_waveform(const ShapeFn& shape, const GateSpec& gate,
                              const DeviceParams& device, int n_samples, double j_floor) {
  gate.validate();
  device.validate();
  if (n_samples < 8) throw std::invalid_argument("emit_waveform: need at least 8 samples");
  if (!(j_floor > 0.0)) throw std::invalid_argument("emit_waveform: j_floor must be positive");

  const double j_scale = M_PI * gate.k * hbar_ev_s / gate.T;  // J(t) = j_scale * S(tau)
  const double peak = j_scale * shape.max_value();
  if (j_floor >= peak) throw std::invalid_argument("emit_waveform: j_floor at or above peak exchange");

  std::vector<double> j(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    const double s = shape(static_cast<double>(i) / (n_samples - 1));
    j[i] = std::isfinite(s) ? j_scale * s : std::numeric_limits<double>::infinity();
  }
  return waveform_from_exchange_samples(std::move(j), gate, device, j_floor, shape.tag());
}

}  // namespace fracpulse
