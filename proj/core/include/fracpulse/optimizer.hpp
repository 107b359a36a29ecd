#pragma once

#include <string>
#include <vector>

#include "fracpulse/infidelity.hpp"
#include "fracpulse/noise.hpp"
#include "fracpulse/quadrature.hpp"
#include "fracpulse/shapes.hpp"

namespace fracpulse {

/// Closed-form optimal shape for stationary 1/f^alpha noise: the symmetric
/// beta distribution with parameter 1 - alpha/2. alpha strictly in (0,2).
ShapeFn optimal_shape_closed_form(double alpha);

/// Closed-form optimal voltage pulse,
///   V(t) = V0 - ln[J0 T B(1-a/2,1-a/2) / (pi k hbar)]/kappa
///          - (a/2 kappa) ln[(t/T)(1 - t/T)],
/// sampled and clipped with the same conventions as emit_waveform; the two
/// construction routes agree to rounding.
VoltageWaveform optimal_voltage_pulse(const GateSpec& gate, const DeviceParams& device,
                                      double alpha, int n_samples, double j_floor);

struct FixedPointOptions {
  double damping = 0.5;       // S <- (1-d) S_prev + d S_next
  double lambda_reg = -1.0;   // regularization of (K K*)^{-1}; <0 selects default
  double init_perturbation = 0.0;  // relative jitter on the initial iterate
  unsigned init_seed = 0;
  bool compute_comparison = true;  // L1 distance + infidelity ratio vs beta shape
};

struct OptimizationResult {
  ShapeFn shape;                     // sampled on the solver grid
  std::vector<double> lambda_trace;    // multiplier per iteration
  std::vector<double> residual_trace;  // L1 change per iteration
  int iterations = 0;
  double residual = 0.0;  // L1 change of the last step
  bool converged = false;
  double l1_distance_to_beta = 0.0;
  double infidelity_ratio_vs_beta = 0.0;  // improved-kernel quadratic forms
  std::string warning;
};

/// Fixed-point refinement of the optimal shape for the improved kernel:
///   S = lambda [tau(1-tau)]^{-a/2}
///       + (A sin(pi a/2)/pi) (e^{-theta zeta tau}, S) (K K*)^{-1} e^{-theta zeta tau}
///       + 2 A btilde^2 zeta theta (sin(pi a/2)/pi) (K K*)^{-1} 0I^{btilde} I_1^{btilde} S,
/// lambda rescaled every step so (1,S) = 1. Derived for alpha in (0,1).
OptimizationResult fixed_point_refine(const TlfEnsembleModel& model, const GateSpec& gate,
                                      const QuadratureGrid& grid, int max_iter, double tol,
                                      const FixedPointOptions& opts = {});

/// Quadratic form (S_w, R_fbm S_w) of the localized square family
/// S_w = (1/w) 1_{[0,w]}; strictly increasing in w, scaling like T^{alpha-1}.
double fbm_localized_family(const FbmModel& model, double w, int n_quad = 64);

}  // namespace fracpulse
