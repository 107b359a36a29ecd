#pragma once

#include <string>
#include <vector>

#include "fracpulse/noise.hpp"
#include "fracpulse/shapes.hpp"

namespace fracpulse {

struct QuadratureOptions {
  int u_panels = 60;        // geometric lag panels over [u_min, 1]
  int panel_nodes = 12;     // Gauss nodes per panel
  int panel_nodes_low = 6;  // embedded coarse rule for the error estimate
  double u_min = 1e-12;
  double inner_rel_tol = 1e-11;  // tanh-sinh tolerance for lag overlaps
  int tanh_sinh_levels = 12;
};

/// Lag-overlap profile of a shape pair:
///   G(u) = int_0^{1-u} [Sa(t) Sb(t+u) + Sb(t) Sa(t+u)] dt,
/// so that int int Sa(t1) Sb(t2) R(|t1-t2|) = int_0^1 R(u) G(u) du for any
/// stationary kernel. Built once per pair, reused across kernels and sweeps.
struct LagProfile {
  ShapeFn a, b;
  std::vector<double> u_hi, w_hi, g_hi;
  std::vector<double> u_lo, w_lo, g_lo;
  double u_min = 0.0;
  double g_at_zero = 0.0;  // int Sa Sb, when finite
  bool g_at_zero_finite = false;
  double fit_coeff = 0.0, fit_exponent = 0.0;              // G ~ c u^g near u = 0
  double fit_coeff_right = 0.0, fit_exponent_right = 0.0;  // G ~ c (1-u)^g near u = 1
};

LagProfile build_lag_profile(const ShapeFn& a, const ShapeFn& b,
                             const QuadratureOptions& opts = {});

struct QuadFormResult {
  double value = 0.0;           // V^2
  double error_estimate = 0.0;  // relative
  std::string warning;
};

/// Q = int int Sa(t1) Sb(t2) R(t1,t2) dt1 dt2 over [0,1]^2.
QuadFormResult bilinear_form(const ShapeFn& a, const ShapeFn& b, const AutocorKernel& kernel,
                             const QuadratureOptions& opts = {});
QuadFormResult quadratic_form(const ShapeFn& s, const AutocorKernel& kernel,
                              const QuadratureOptions& opts = {});
/// Same, reusing a prebuilt lag profile (sweeps over T or alpha).
QuadFormResult quadratic_form_from_profile(const LagProfile& profile, const AutocorKernel& kernel);

struct InfidelityReport {
  double quad_form = 0.0;   // V^2
  double infidelity = 0.0;  // (3 pi^2/32) k^2 kappa^2 * quad_form
  std::string kernel_variant;
  std::string shape_tag;
  double quad_error = 0.0;  // relative estimate
  std::string warning;
};

InfidelityReport average_infidelity(const ShapeFn& shape, const GateSpec& gate, double kappa,
                                    const AutocorKernel& kernel, const QuadratureOptions& opts = {});

/// Overlap fidelity of ideal vs perturbed SWAP^k evolution for phase error
/// dtheta: |3 e^{i dtheta} + e^{-i dtheta}|/4 = sqrt(1 - (3/4) sin^2 dtheta).
double exact_overlap_fidelity(double dtheta);

/// Shifted-Chebyshev moments Phi_n = int T~_n(tau) S(tau) dtau, n = 0..n_max.
std::vector<double> chebyshev_coeffs(const ShapeFn& s, int n_max);

struct ChebInfidelityResult {
  double value = 0.0;  // (S, R S) in V^2
  double tail_estimate = 0.0;
  std::string warning;
};

/// Closed-form alpha = 1 quadratic form
///   4 P0 [ -C - ln(pi f_min T / 2) + 2 sum_{n>=1} Phi_n^2 / n ].
ChebInfidelityResult chebyshev_infidelity_alpha1(const std::vector<double>& phi,
                                                 const TlfEnsembleModel& m, double T);

}  // namespace fracpulse
