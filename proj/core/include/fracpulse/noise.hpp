#pragma once

#include <functional>
#include <string>
#include <vector>

namespace fracpulse {

/// Stationary ensemble of two-level fluctuators with energy density
/// dE/dgamma = N(alpha)^{-1} R0 gamma^{-alpha} on [gamma_min, gamma_max].
/// Units: r0 in V^2, cutoffs in Hz, gamma = pi f in 1/s.
struct TlfEnsembleModel {
  double r0;
  double f_min;
  double f_max;
  double alpha;

  double gamma_min() const;
  double gamma_max() const;
  /// N(alpha) = int gamma^{-alpha} dgamma over the band.
  double normalization() const;
  /// Spectral level P0 from R0 (logarithmic branch within |alpha-1| < 1e-8).
  double p0() const;

  void validate() const;

  /// f_min = 10 kHz, f_max = 10 GHz, R0 = 1 mV^2.
  static TlfEnsembleModel paper_preset(double alpha, double r0 = 1e-6);
};

/// Subdiffusive fractional Brownian motion: spectral level p0 (V^2 Hz^{alpha-1}),
/// alpha strictly inside (1,2), pulse duration T (s).
struct FbmModel {
  double p0;
  double alpha;
  double T;

  void validate() const;
};

/// Single two-level fluctuator: E * exp(-2 gamma |dt|).
double tlf_autocorrelation(double energy, double gamma, double dt);

/// Energy density dE/dgamma of the ensemble at switching rate gamma (V^2 s).
double energy_density(const TlfEnsembleModel& m, double gamma);

double p0_from_r0(const TlfEnsembleModel& m);

/// Exact auto-correlation of the ensemble at physical lag dt >= 0, through
/// generalized exponential integrals; R(0) = R0.
double autocor_exact(const TlfEnsembleModel& m, double dt);

/// Dominant small-theta approximation in normalized time, theta = 2 pi f_min T.
/// Singular on the diagonal for alpha <= 1 (power law, logarithmic at alpha = 1).
double autocor_coarse(const TlfEnsembleModel& m, double T, double tau1, double tau2);

/// Coarse kernel plus the exponential remainder correction
/// A (1 - e^{-theta zeta |dtau|}), A = (3-alpha)/(2-alpha)^2, zeta = (2-alpha)/(3-alpha).
double autocor_improved(const TlfEnsembleModel& m, double T, double tau1, double tau2);

/// Power spectral density at f > 0 (V^2/Hz), cosine transform over positive
/// lags of the exponential auto-correlations, by log-gamma quadrature:
///   P(f) = 1/2 int dgamma (dE/dgamma) gamma / (gamma^2 + pi^2 f^2).
/// In the bulk f_min << f << f_max this approaches P0 / f^alpha.
double psd(const TlfEnsembleModel& m, double f);

/// Eq.-15-type fBm auto-correlation in normalized time, tau in [0,1].
double fbm_autocorrelation(const FbmModel& m, double tau1, double tau2);

/// Auto-correlation kernel in normalized time over [0,1]^2 (values in V^2),
/// bundled with the structure the quadratic-form integrator needs.
struct AutocorKernel {
  std::string variant;  // exact | coarse | improved | fbm | mixture
  double alpha = 0.0;
  double theta = 0.0;  // 2 pi f_min T for stationary TLF kernels
  bool stationary = true;

  /// R as a function of the lag u = |tau1 - tau2|, u > 0 (stationary only).
  std::function<double(double)> lag;
  /// Full R(tau1, tau2); for stationary kernels forwards to lag().
  std::function<double(double, double)> full;

  /// Diagonal structure of lag(u) as u -> 0:
  ///   lag(u) = sing_coeff * u^{alpha-1} + smooth_at_zero + o(1)   (power)
  ///   lag(u) = sing_coeff * (-ln u)     + smooth_at_zero + o(1)   (log)
  /// none: lag(0+) = smooth_at_zero finite.
  enum class Diag { none, power, log };
  Diag diag = Diag::none;
  double sing_coeff = 0.0;
  double smooth_at_zero = 0.0;

  /// fbm decomposition R = fbm_coeff * (tau1^{a-1} + tau2^{a-1} - |dtau|^{a-1}).
  double fbm_coeff = 0.0;

  std::string warning;

  double operator()(double tau1, double tau2) const { return full(tau1, tau2); }
};

AutocorKernel exact_kernel(const TlfEnsembleModel& m, double T);
AutocorKernel coarse_kernel(const TlfEnsembleModel& m, double T);
AutocorKernel improved_kernel(const TlfEnsembleModel& m, double T);
AutocorKernel fbm_kernel(const FbmModel& m);

/// Generic stationary mixture of discrete fluctuators {rate, energy}; the
/// hook for arbitrary nonnegative energy densities.
AutocorKernel mixture_kernel(const std::vector<double>& rates,
                             const std::vector<double>& energies, double T);

}  // namespace fracpulse
