#include "fracpulse/montecarlo.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

#include "fracpulse/infidelity.hpp"

namespace fracpulse {

namespace {

// Uniform trapezoid weights normalized to sum 1 (the 1/T factor).
std::vector<double> trapezoid_weights(int n) {
  std::vector<double> w(n, 1.0 / (n - 1));
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

// Shape samples on the uniform trajectory grid, clipped at the floor value
// and renormalized so the trapezoid mean is exactly 1 (the emitted-waveform
// convention for singular endpoints).
std::vector<double> clipped_shape_samples(const ShapeFn& shape, const GateSpec& gate,
                                          double j_floor, int n_t) {
  const double s_floor = j_floor * gate.T / (M_PI * gate.k * hbar_ev_s);
  std::vector<double> s(n_t);
  for (int i = 0; i < n_t; ++i) {
    const double v = shape(static_cast<double>(i) / (n_t - 1));
    s[i] = std::isfinite(v) ? std::max(v, s_floor) : s_floor;
  }
  const std::vector<double> w = trapezoid_weights(n_t);
  double mean = 0.0;
  for (int i = 0; i < n_t; ++i) mean += w[i] * s[i];
  for (double& v : s) v /= mean;
  return s;
}

double dtheta_from_noise(const std::vector<double>& shape_samples,
                         const std::vector<double>& trap_w, const std::vector<double>& noise,
                         double k, double kappa) {
  double acc = 0.0;
  for (std::size_t i = 0; i < noise.size(); ++i)
    acc += trap_w[i] * shape_samples[i] * std::expm1(kappa * noise[i]);
  return 0.5 * M_PI * k * acc;
}

}  // namespace

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double DiscretizedEnsemble::autocorrelation(double dt) const {
  double acc = 0.0;
  for (std::size_t j = 0; j < rate.size(); ++j)
    acc += amplitude[j] * amplitude[j] * std::exp(-2.0 * rate[j] * std::abs(dt));
  return acc;
}

DiscretizedEnsemble discretize_ensemble(const TlfEnsembleModel& m, int n_bins) {
  m.validate();
  if (n_bins < 4) throw std::invalid_argument("discretize_ensemble: need at least 4 bins");
  DiscretizedEnsemble ens;
  ens.n_bins = n_bins;
  ens.r0 = m.r0;
  ens.rate.resize(n_bins);
  ens.amplitude.resize(n_bins);
  const double lmin = std::log(m.gamma_min()), lmax = std::log(m.gamma_max());
  const double norm = m.normalization();
  for (int j = 0; j < n_bins; ++j) {
    const double la = lmin + (lmax - lmin) * j / n_bins;
    const double lb = lmin + (lmax - lmin) * (j + 1) / n_bins;
    const double ga = std::exp(la), gb = std::exp(lb);
    double e;
    if (std::abs(m.alpha - 1.0) < 1e-8) {
      e = m.r0 * (lb - la) / norm;
    } else {
      e = m.r0 * (std::pow(gb, 1.0 - m.alpha) - std::pow(ga, 1.0 - m.alpha)) /
          ((1.0 - m.alpha) * norm);
    }
    ens.rate[j] = std::exp(0.5 * (la + lb));
    ens.amplitude[j] = std::sqrt(e);
  }
  return ens;
}

NoiseTrajectory sample_trajectory(const DiscretizedEnsemble& ens, double T, int n_t,
                                  std::uint64_t stream_seed) {
  if (n_t < 2) throw std::invalid_argument("sample_trajectory: need at least 2 samples");
  if (!(T > 0.0)) throw std::invalid_argument("sample_trajectory: T must be positive");
  std::mt19937_64 rng(stream_seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  NoiseTrajectory traj;
  traj.T = T;
  traj.values.assign(n_t, 0.0);
  std::vector<double> delta(n_t + 1, 0.0);
  double static_sum = 0.0;
  const double dt = T / (n_t - 1);

  for (std::size_t j = 0; j < ens.rate.size(); ++j) {
    const double gamma = ens.rate[j];
    const double a = ens.amplitude[j];
    double state = (uni(rng) < 0.5) ? a : -a;
    if (gamma * T < 1e-3) {
      // effectively static over the pulse: flip probability O(gamma T)
      static_sum += state;
      continue;
    }
    double t = 0.0;
    int idx = 0;
    while (true) {
      t += -std::log(uni(rng)) / gamma;
      if (t >= T) {
        delta[idx] += state;
        delta[n_t] -= state;
        break;
      }
      const int end = static_cast<int>(std::ceil(t / dt - 1e-12));
      if (end > idx) {
        delta[idx] += state;
        delta[end] -= state;
        idx = end;
      }
      state = -state;
      if (idx >= n_t) break;
    }
  }
  double run = 0.0;
  for (int i = 0; i < n_t; ++i) {
    run += delta[i];
    traj.values[i] = static_sum + run;
  }
  return traj;
}

double trajectory_infidelity(const NoiseTrajectory& traj, const ShapeFn& shape,
                             const GateSpec& gate, double kappa, double j_floor) {
  gate.validate();
  if (!(kappa > 0.0)) throw std::domain_error("trajectory_infidelity: kappa must be positive");
  const int n_t = static_cast<int>(traj.values.size());
  const std::vector<double> s = clipped_shape_samples(shape, gate, j_floor, n_t);
  const std::vector<double> w = trapezoid_weights(n_t);
  double vmax = 0.0;
  for (double v : traj.values) vmax = std::max(vmax, std::abs(v));
  if (kappa * vmax > 50.0)
    throw std::runtime_error("trajectory_infidelity: kappa*|v| overflow guard tripped (" +
                             std::to_string(kappa * vmax) + " > 50)");
  const double dtheta = dtheta_from_noise(s, w, traj.values, gate.k, kappa);
  return 1.0 - exact_overlap_fidelity(dtheta);
}

McEstimate estimate_infidelity(const TlfEnsembleModel& model, const ShapeFn& shape,
                               const GateSpec& gate, double kappa, std::size_t n_traj,
                               std::uint64_t seed, const McOptions& opts) {
  gate.validate();
  if (n_traj == 0) throw std::invalid_argument("estimate_infidelity: n_traj must be positive");
  const DiscretizedEnsemble ens = discretize_ensemble(model, opts.n_bins);
  const int n_t = opts.n_t;
  const std::vector<double> s = clipped_shape_samples(shape, gate, opts.j_floor, n_t);
  const std::vector<double> w = trapezoid_weights(n_t);

  McEstimate est;
  est.n_traj = n_traj;
  est.seed = seed;
  if (n_traj < 1000) est.warning = "n_traj below reporting threshold (1000)";
  // events per sample interval for the fastest bin
  const double ev_per_dt = 2.0 * ens.rate.back() * gate.T / (n_t - 1);
  if (ev_per_dt > 0.5) {
    if (!est.warning.empty()) est.warning += "; ";
    est.warning += "n_t does not statistically resolve the fastest fluctuator";
  }

  std::vector<double> dthetas(n_traj);
  int n_threads = opts.n_threads > 0 ? opts.n_threads
                                     : static_cast<int>(std::thread::hardware_concurrency());
  if (n_threads < 1) n_threads = 1;
  auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      NoiseTrajectory traj = sample_trajectory(ens, gate.T, n_t, substream_seed(seed, i));
      double vmax = 0.0;
      for (double v : traj.values) vmax = std::max(vmax, std::abs(v));
      if (kappa * vmax > 50.0)
        throw std::runtime_error("estimate_infidelity: kappa*|v| overflow guard tripped");
      dthetas[i] = dtheta_from_noise(s, w, traj.values, gate.k, kappa);
    }
  };
  if (n_threads == 1) {
    worker(0, n_traj);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n_traj + n_threads - 1) / n_threads;
    for (int t = 0; t < n_threads; ++t) {
      const std::size_t b = t * chunk, e = std::min(n_traj, b + chunk);
      if (b >= e) break;
      pool.emplace_back(worker, b, e);
    }
    for (auto& th : pool) th.join();
  }

  // fixed-order compensated reduction: identical result for any thread count
  double sum = 0.0, comp = 0.0, sum2 = 0.0;
  double dsum = 0.0, dsum2 = 0.0, dsum4 = 0.0;
  for (std::size_t i = 0; i < n_traj; ++i) {
    const double f = 1.0 - exact_overlap_fidelity(dthetas[i]);
    const double y = f - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    sum2 += f * f;
    dsum += dthetas[i];
    dsum2 += dthetas[i] * dthetas[i];
  }
  const double n = static_cast<double>(n_traj);
  est.mean = sum / n;
  const double var = std::max(0.0, sum2 / n - est.mean * est.mean);
  est.std_error = std::sqrt(var / n);
  const double dmean = dsum / n;
  est.dtheta_variance = std::max(0.0, dsum2 / n - dmean * dmean);
  for (std::size_t i = 0; i < n_traj; ++i) {
    const double c = dthetas[i] - dmean;
    dsum4 += c * c * c * c;
  }
  est.dtheta_kurtosis =
      est.dtheta_variance > 0.0 ? dsum4 / n / (est.dtheta_variance * est.dtheta_variance) : 0.0;
  return est;
}

}  // namespace fracpulse
