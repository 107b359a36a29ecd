#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fracpulse/noise.hpp"
#include "fracpulse/shapes.hpp"

namespace fracpulse {

/// Log-uniform rate-binned TLF ensemble: per-bin energy is the closed-form
/// integral of the power-law density, representative rate the log-midpoint.
struct DiscretizedEnsemble {
  std::vector<double> rate;       // 1/s
  std::vector<double> amplitude;  // sqrt(E_j), V
  double r0 = 0.0;
  int n_bins = 0;

  /// Sum of E_j e^{-2 gamma_j dt}: the ensemble's own auto-correlation.
  double autocorrelation(double dt) const;
};

DiscretizedEnsemble discretize_ensemble(const TlfEnsembleModel& m, int n_bins = 64);

/// Random-telegraph sum sampled on n_t uniform points over [0,T].
struct NoiseTrajectory {
  double T = 0.0;
  std::vector<double> values;  // volts
};

/// Fluctuators start in +-amplitude with probability 1/2 and flip at
/// Poisson(rate) event times; fluctuators with rate*T < 1e-3 are drawn once
/// and held fixed. Deterministic given the engine state.
NoiseTrajectory sample_trajectory(const DiscretizedEnsemble& ens, double T, int n_t,
                                  std::uint64_t stream_seed);

/// Phase error of one noisy SWAP^k pulse through the full exponential map:
///   dtheta = (pi k / 2) (1/T) int S(t/T) (e^{kappa v(t)} - 1) dt
/// (trapezoid on the trajectory grid), returning 1 - exact_overlap_fidelity.
/// Endpoint-singular shapes are clipped at j_floor and renormalized, matching
/// the emitted-waveform convention. Throws if kappa * max|v| > 50.
double trajectory_infidelity(const NoiseTrajectory& traj, const ShapeFn& shape,
                             const GateSpec& gate, double kappa, double j_floor);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_traj = 0;
  std::uint64_t seed = 0;
  double dtheta_variance = 0.0;
  double dtheta_kurtosis = 0.0;
  std::string warning;
};

struct McOptions {
  int n_t = 4096;
  int n_bins = 64;
  int n_threads = 0;  // 0: hardware concurrency
  double j_floor = 1e-8;
};

/// Mean and standard error of trajectory_infidelity over n_traj independent
/// trajectories. Per-trajectory substreams are keyed by (seed, index) via a
/// splitmix64 hash, so results are bit-identical for any thread count.
McEstimate estimate_infidelity(const TlfEnsembleModel& model, const ShapeFn& shape,
                               const GateSpec& gate, double kappa, std::size_t n_traj,
                               std::uint64_t seed, const McOptions& opts = {});

/// splitmix64 step, the substream key for trajectory index i under seed s.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace fracpulse
