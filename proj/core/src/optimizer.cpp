#include "fracpulse/optimizer.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "fracpulse/operators.hpp"
#include "fracpulse/special.hpp"

namespace fracpulse {

ShapeFn optimal_shape_closed_form(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 2.0))
    throw std::domain_error("optimal_shape_closed_form: alpha must be strictly inside (0,2)");
  return ShapeFn::beta(alpha);
}

VoltageWaveform optimal_voltage_pulse(const GateSpec& gate, const DeviceParams& device,
                                      double alpha, int n_samples, double j_floor) {
  if (!(alpha > 0.0) || !(alpha < 2.0))
    throw std::domain_error("optimal_voltage_pulse: alpha must be strictly inside (0,2)");
  gate.validate();
  device.validate();
  if (n_samples < 8) throw std::invalid_argument("optimal_voltage_pulse: need at least 8 samples");
  const double b = beta_fn(1.0 - alpha / 2.0, 1.0 - alpha / 2.0);
  const double v_level =
      device.v0 - std::log(device.j0 * gate.T * b / (M_PI * gate.k * hbar_ev_s)) / device.kappa;
  std::vector<double> j(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    const double tau = static_cast<double>(i) / (n_samples - 1);
    const double edge = tau * (1.0 - tau);
    if (edge == 0.0) {
      j[i] = std::numeric_limits<double>::infinity();
      continue;
    }
    const double v = v_level - alpha / (2.0 * device.kappa) * std::log(edge);
    j[i] = exchange_from_voltage(device, v);
  }
  return waveform_from_exchange_samples(std::move(j), gate, device, j_floor,
                                        "beta(" + std::to_string(alpha) + ")");
}

OptimizationResult fixed_point_refine(const TlfEnsembleModel& model, const GateSpec& gate,
                                      const QuadratureGrid& grid, int max_iter, double tol,
                                      const FixedPointOptions& opts) {
  model.validate();
  gate.validate();
  const double alpha = model.alpha;
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::domain_error(
        "fixed_point_refine: refinement is derived for alpha in (0,1) only");
  const double theta = 2.0 * M_PI * model.f_min * gate.T;

  OptimizationResult res;
  if (theta > 1.0) res.warning = "theta = 2 pi f_min T exceeds 1; refinement outside its regime";

  const int n = static_cast<int>(grid.size());

  const double a_rem = (3.0 - alpha) / ((2.0 - alpha) * (2.0 - alpha));
  const double zeta = (2.0 - alpha) / (3.0 - alpha);
  const double btilde = 1.0 / (zeta * theta + 1.0);
  const double sin_fac = std::sin(M_PI * alpha / 2.0) / M_PI;
  const double c2 = a_rem * sin_fac;
  const double c3 = 2.0 * a_rem * btilde * btilde * zeta * theta * sin_fac;

  // The iteration runs on the regular part s~ with S = [tau(1-tau)]^{-a/2} s~.
  // Integration weights for int w(tau) f(tau) dtau reduce to the grid's
  // jacobi weights when the grid matches the exponent.
  Eigen::VectorXd wq(n), expv(n), singular_w(n);
  {
    const std::vector<double> pw = grid.plain_weights();
    for (int i = 0; i < n; ++i) {
      const double tau = grid.nodes[i];
      singular_w[i] = std::pow(tau * (1.0 - tau), -alpha / 2.0);
      wq[i] = pw[i] * singular_w[i];
      expv[i] = std::exp(-theta * zeta * tau);
    }
  }
  const double b_norm = beta_fn(1.0 - alpha / 2.0, 1.0 - alpha / 2.0);
  const double one_w = wq.sum();  // int [tau(1-tau)]^{-a/2} dtau

  GridOperator kkw = kernel_KKstar_weighted(alpha, grid);
  GridOperator cinv = regularized_inverse(kkw, opts.lambda_reg);
  // (K K*)^{-1} e = w * (kkw^{-1} e) with smooth kkw^{-1} e
  const Eigen::VectorXd h_exp = cinv.apply(expv);
  const Eigen::MatrixXd smooth_op =
      cinv.matrix() * cf_integral(btilde, Side::left, grid).matrix() *
      cf_integral_weighted(btilde, Side::right, grid, -alpha / 2.0, -alpha / 2.0).matrix();

  Eigen::VectorXd st = Eigen::VectorXd::Constant(n, 1.0 / b_norm);  // s~ of the beta shape
  if (opts.init_perturbation > 0.0) {
    std::mt19937_64 rng(opts.init_seed);
    std::uniform_real_distribution<double> jitter(-opts.init_perturbation, opts.init_perturbation);
    for (int i = 0; i < n; ++i) st[i] *= 1.0 + jitter(rng);
    st /= (wq.array() * st.array()).sum();
  }

  res.residual = std::numeric_limits<double>::quiet_NaN();
  int it = 0;
  for (; it < max_iter; ++it) {
    const double exp_inner = (wq.array() * expv.array() * st.array()).sum();  // (e, S)
    Eigen::VectorXd ft = c2 * exp_inner * h_exp + c3 * (smooth_op * st);
    const double lambda = (1.0 - (wq.array() * ft.array()).sum()) / one_w;
    res.lambda_trace.push_back(lambda);
    Eigen::VectorXd st_next = Eigen::VectorXd::Constant(n, lambda) + ft;
    st_next = (1.0 - opts.damping) * st + opts.damping * st_next;

    const double neg = st_next.minCoeff();
    if (neg < -1e-6)
      throw std::runtime_error("fixed_point_refine: iterate negative beyond tolerance (" +
                               std::to_string(neg) + "), aborting");
    if (neg < 0.0) {
      st_next = st_next.cwiseMax(0.0);
      st_next /= (wq.array() * st_next.array()).sum();
      if (res.warning.empty()) res.warning = "negative excursions clipped and renormalized";
    }

    const double change = (wq.array() * (st_next - st).array().abs()).sum();
    st = st_next;
    res.residual = change;
    res.residual_trace.push_back(change);
    if (change < tol) {
      ++it;
      res.converged = true;
      break;
    }
  }
  res.iterations = it;
  if (!res.converged && max_iter > 0 && res.warning.empty())
    res.warning = "not converged after max_iter; returning best iterate";

  std::vector<double> samples(n);
  for (int i = 0; i < n; ++i) samples[i] = singular_w[i] * st[i];
  res.shape = ShapeFn::sampled(grid, samples, -alpha / 2.0);

  if (opts.compute_comparison) {
    const ShapeFn beta_shape = ShapeFn::beta(alpha);
    double l1 = 0.0;
    for (int i = 0; i < n; ++i) l1 += wq[i] * std::abs(st[i] - 1.0 / b_norm);
    res.l1_distance_to_beta = l1;
    const AutocorKernel kern = improved_kernel(model, gate.T);
    const double q_refined = quadratic_form(res.shape, kern).value;
    const double q_beta = quadratic_form(beta_shape, kern).value;
    res.infidelity_ratio_vs_beta = q_refined / q_beta;
  }
  return res;
}

double fbm_localized_family(const FbmModel& model, double w, int n_quad) {
  model.validate();
  if (!(w > 0.0) || w > 1.0) throw std::domain_error("fbm_localized_family: width must be in (0,1]");
  const double a = model.alpha - 1.0;
  const double coeff = 2.0 * model.p0 * std::pow(2.0 * M_PI * model.T, a) *
                       std::abs(std::tgamma(-a) * std::sin(M_PI * model.alpha / 2.0));
  // Q(w) = coeff/w^2 [ 2 w int_0^w tau^a dtau - 2 int_0^w (w-u) u^a du ]
  //      = coeff * 2 w^a [ J1 - J2 ],  J1 = int_0^1 x^a dx, J2 = int_0^1 (1-x) x^a dx
  std::vector<double> xn, xw;
  gauss_jacobi_01(n_quad, a, 0.0, xn, xw);
  double j1 = 0.0, j2 = 0.0;
  for (int m = 0; m < n_quad; ++m) {
    j1 += xw[m];
    j2 += xw[m] * (1.0 - xn[m]);
  }
  return coeff * 2.0 * std::pow(w, a) * (j1 - j2);
}

}  // namespace fracpulse
