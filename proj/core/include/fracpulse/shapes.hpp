#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fracpulse/quadrature.hpp"

namespace fracpulse {

/// hbar in eV*s.
inline constexpr double hbar_ev_s = 6.582119569e-16;

enum class ShapeVariant { square, gaussian, exp_of_gaussian, beta, sampled };

/// Normalized dimensionless pulse shape S(tau) on [0,1]: int S = 1, S >= 0.
/// Beta-type shapes diverge at the endpoints like [tau(1-tau)]^e with
/// e = -alpha/2 < 0; endpoint_exponent() exposes that so quadratures can
/// factor the singularity out. Immutable.
class ShapeFn {
 public:
  ShapeFn() = default;  // the square shape

  static ShapeFn square();
  static ShapeFn gaussian(double sigma);
  static ShapeFn exp_of_gaussian(double sigma, double h);
  /// tau^{-a/2} (1-tau)^{-a/2} / B(1-a/2, 1-a/2); alpha in [0,2).
  static ShapeFn beta(double alpha);
  /// Sampled on a grid, renormalized on construction. endpoint_exponent tags
  /// [tau(1-tau)]^e behavior; samples are the shape values themselves.
  static ShapeFn sampled(QuadratureGrid grid, std::vector<double> values,
                         double endpoint_exponent = 0.0);

  double operator()(double tau) const;
  /// S(tau) * [tau(1-tau)]^{-endpoint_exponent}: finite at the endpoints.
  double regular_part(double tau) const;

  double endpoint_exponent() const { return endpoint_exp_; }
  ShapeVariant variant() const { return variant_; }
  const std::string& tag() const { return tag_; }
  /// Peak of S over [0,1]; +inf for endpoint-singular shapes.
  double max_value() const;
  bool singular_endpoints() const { return endpoint_exp_ < 0.0; }

  const QuadratureGrid* sample_grid() const { return grid_ ? grid_.get() : nullptr; }
  const std::vector<double>& sample_values() const { return values_; }

 private:
  ShapeVariant variant_ = ShapeVariant::square;
  std::string tag_ = "square";
  double sigma_ = 0.0, h_ = 0.0, alpha_ = 0.0;
  double norm_ = 1.0;  // divides the raw profile
  double endpoint_exp_ = 0.0;
  std::shared_ptr<QuadratureGrid> grid_;
  std::vector<double> values_;   // shape values at grid nodes
  std::vector<double> regular_;  // values * [tau(1-tau)]^{-e}
  std::vector<double> bary_;
};

/// Exponential voltage-to-exchange map J(V) = J0 exp[kappa (V - V0)].
struct DeviceParams {
  double v0;     // reference voltage (V)
  double j0;     // J(V0) (eV)
  double kappa;  // exponential sensitivity (1/V)
  double j_ceiling = 1e300;  // optional device limit on peak exchange (eV)

  void validate() const;
  /// V0 = 0.04 V, J(V0) = 0.01 ueV, kappa = 80 1/V.
  static DeviceParams paper_preset();
};

/// SWAP^k gate: k = 1 full SWAP, 1/2 sqrt(SWAP); pulse area int J dt = pi k hbar.
struct GateSpec {
  double k;
  double T;  // seconds

  void validate() const;
};

double exchange_from_voltage(const DeviceParams& d, double v);
double voltage_from_exchange(const DeviceParams& d, double j);

/// Uniformly sampled voltage pulse with clipping metadata.
struct VoltageWaveform {
  std::vector<double> t;  // seconds
  std::vector<double> v;  // volts
  std::vector<double> j;  // eV, after clipping and renormalization
  DeviceParams device;
  double gate_k = 1.0;
  double duration = 0.0;
  std::string shape_tag;
  double j_floor = 0.0;
  int clipped_samples = 0;
};

/// Sample V(t) on n_samples uniform points over [0,T]. Samples whose exchange
/// falls below j_floor (and the singular endpoints of beta-type shapes) are
/// clamped to voltage_from_exchange(j_floor); the unclipped interior is then
/// rescaled so the trapezoid pulse area recovers pi k hbar.
VoltageWaveform emit_waveform(const ShapeFn& shape, const GateSpec& gate,
                              const DeviceParams& device, int n_samples, double j_floor);

/// Clip/renormalize raw uniformly-sampled exchange values (+inf marks
/// singular samples) into a waveform. Shared by emit_waveform and the
/// closed-form optimal-pulse path so both apply identical conventions.
VoltageWaveform waveform_from_exchange_samples(std::vector<double> j_raw, const GateSpec& gate,
                                               const DeviceParams& device, double j_floor,
                                               std::string shape_tag);

}  // namespace fracpulse
