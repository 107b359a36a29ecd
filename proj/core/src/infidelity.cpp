#include "fracpulse/infidelity.hpp"

#include <cmath>
#include <stdexcept>

#include "fracpulse/quadrature.hpp"
#include "fracpulse/special.hpp"

namespace fracpulse {

namespace {

// int_0^{1-u} Sa(t) Sb(t+u) dt, with the shapes' endpoint powers handed to
// the weighted tanh-sinh rule so singular tails survive rounding.
double lag_overlap_ordered(const ShapeFn& a, const ShapeFn& b, double u,
                           const QuadratureOptions& opts) {
  const double ea = a.endpoint_exponent(), eb = b.endpoint_exponent();
  auto g = [&](double t) {
    const double y = t + u;
    return std::pow(1.0 - t, ea) * a.regular_part(t) * std::pow(y, eb) * b.regular_part(y);
  };
  return tanh_sinh_weighted(g, 0.0, 1.0 - u, ea, eb, opts.inner_rel_tol, opts.tanh_sinh_levels);
}

double lag_overlap(const ShapeFn& a, const ShapeFn& b, double u, const QuadratureOptions& opts) {
  if (u >= 1.0) return 0.0;
  return lag_overlap_ordered(a, b, u, opts) + lag_overlap_ordered(b, a, u, opts);
}

// Geometric panels graded toward both u = 0 (kernel diagonal singularity)
// and u = 1 (the lag overlap of doubly-singular shapes diverges there too).
void panel_rule(const QuadratureOptions& opts, int nodes_per_panel, std::vector<double>& u,
                std::vector<double>& w) {
  std::vector<double> xn, xw;
  gauss_legendre_01(nodes_per_panel, xn, xw);
  const int half = std::max(opts.u_panels / 2, 4);
  const double ratio = std::pow(0.5 / opts.u_min, 1.0 / half);
  u.clear();
  w.clear();
  auto add_panel = [&](double lo, double hi) {
    for (int k = 0; k < nodes_per_panel; ++k) {
      u.push_back(lo + (hi - lo) * xn[k]);
      w.push_back((hi - lo) * xw[k]);
    }
  };
  double lo = opts.u_min;
  for (int p = 0; p < half; ++p) {
    const double hi = (p == half - 1) ? 0.5 : lo * ratio;
    add_panel(lo, hi);
    lo = hi;
  }
  double hi_v = 0.5;  // mirrored half in v = 1 - u, descending toward u = 1
  for (int p = 0; p < half; ++p) {
    const double lo_v = (p == half - 1) ? opts.u_min : hi_v / ratio;
    add_panel(1.0 - hi_v, 1.0 - lo_v);
    hi_v = lo_v;
  }
}

// Truncated ends: int_0^{u_min} R G du with the kernel's diagonal structure,
// plus int_{1-u_min}^1 R G du where R is regular.
double tail_term(const LagProfile& pr, const AutocorKernel& k) {
  const double u0 = pr.u_min;
  double g0, gexp;
  if (pr.g_at_zero_finite) {
    g0 = pr.g_at_zero;
    gexp = 0.0;
  } else {
    g0 = pr.fit_coeff * std::pow(u0, pr.fit_exponent);
    gexp = pr.fit_exponent;
  }
  double tail = k.smooth_at_zero * g0 * u0 / (1.0 + gexp);
  switch (k.diag) {
    case AutocorKernel::Diag::none:
      break;
    case AutocorKernel::Diag::power: {
      const double e = k.alpha - 1.0 + gexp;
      if (e <= -1.0) throw std::domain_error("quadratic_form: non-integrable diagonal singularity");
      tail += k.sing_coeff * g0 * std::pow(u0, k.alpha - 1.0) * u0 / (e + 1.0);
      break;
    }
    case AutocorKernel::Diag::log:
      tail += k.sing_coeff * g0 * u0 * (1.0 - std::log(u0)) / (1.0 + gexp);
      break;
  }
  if (pr.fit_coeff_right != 0.0) {
    const double g1 = pr.fit_coeff_right * std::pow(u0, pr.fit_exponent_right);
    tail += k.lag(1.0 - u0) * g1 * u0 / (1.0 + pr.fit_exponent_right);
  }
  return tail;
}

}  // namespace

LagProfile build_lag_profile(const ShapeFn& a, const ShapeFn& b, const QuadratureOptions& opts) {
  LagProfile pr;
  pr.a = a;
  pr.b = b;
  pr.u_min = opts.u_min;
  panel_rule(opts, opts.panel_nodes, pr.u_hi, pr.w_hi);
  panel_rule(opts, opts.panel_nodes_low, pr.u_lo, pr.w_lo);
  pr.g_hi.resize(pr.u_hi.size());
  pr.g_lo.resize(pr.u_lo.size());
  for (std::size_t i = 0; i < pr.u_hi.size(); ++i)
    pr.g_hi[i] = lag_overlap(a, b, pr.u_hi[i], opts);
  for (std::size_t i = 0; i < pr.u_lo.size(); ++i)
    pr.g_lo[i] = lag_overlap(a, b, pr.u_lo[i], opts);

  const double e_sum = a.endpoint_exponent() + b.endpoint_exponent();
  if (e_sum > -1.0 + 1e-9) {
    pr.g_at_zero_finite = true;
    pr.g_at_zero = tanh_sinh_weighted(
        [&](double t) { return 2.0 * a.regular_part(t) * b.regular_part(t); }, 0.0, 1.0, e_sum,
        e_sum, opts.inner_rel_tol, opts.tanh_sinh_levels);
  } else {
    // fit G ~ c u^g on the two smallest quadrature lags
    const double u1 = pr.u_hi[0], u2 = pr.u_hi[1];
    const double g1 = std::max(pr.g_hi[0], 1e-300), g2 = std::max(pr.g_hi[1], 1e-300);
    pr.fit_exponent = std::log(g2 / g1) / std::log(u2 / u1);
    pr.fit_coeff = g1 / std::pow(u1, pr.fit_exponent);
  }
  {
    // fit G ~ c (1-u)^g at the right end (G vanishes or diverges algebraically)
    const std::size_t n = pr.u_hi.size();
    const double v1 = 1.0 - pr.u_hi[n - 1], v2 = 1.0 - pr.u_hi[n - 2];
    const double g1 = std::max(pr.g_hi[n - 1], 1e-300), g2 = std::max(pr.g_hi[n - 2], 1e-300);
    pr.fit_exponent_right = std::log(g2 / g1) / std::log(v2 / v1);
    pr.fit_coeff_right = g1 / std::pow(v1, pr.fit_exponent_right);
  }
  return pr;
}

QuadFormResult quadratic_form_from_profile(const LagProfile& pr, const AutocorKernel& k) {
  QuadFormResult out;
  out.warning = k.warning;

  if (!k.stationary) {
    // fbm decomposition: Q = (Sa, t^{a-1}) + (Sb, t^{a-1}) - int u^{a-1} G(u) du,
    // all scaled by fbm_coeff.
    const double a = k.alpha - 1.0;
    auto first_moment = [&](const ShapeFn& s) {
      const double e = s.endpoint_exponent();
      return tanh_sinh_weighted([&](double t) { return s.regular_part(t); }, 0.0, 1.0, e + a, e,
                                1e-11, 12);
    };
    const double m1 = first_moment(pr.a) + first_moment(pr.b);
    double hi = 0.0, lo = 0.0;
    for (std::size_t i = 0; i < pr.u_hi.size(); ++i)
      hi += pr.w_hi[i] * std::pow(pr.u_hi[i], a) * pr.g_hi[i];
    for (std::size_t i = 0; i < pr.u_lo.size(); ++i)
      lo += pr.w_lo[i] * std::pow(pr.u_lo[i], a) * pr.g_lo[i];
    const double v_hi = k.fbm_coeff * (m1 - hi);
    const double v_lo = k.fbm_coeff * (m1 - lo);
    out.value = v_hi;
    out.error_estimate = std::abs(v_hi - v_lo) / (std::abs(v_hi) + 1e-300);
    if (out.error_estimate > 1e-3) out.warning = "quadrature refinement above 1e-3 relative";
    return out;
  }

  double hi = 0.0, lo = 0.0;
  for (std::size_t i = 0; i < pr.u_hi.size(); ++i) hi += pr.w_hi[i] * k.lag(pr.u_hi[i]) * pr.g_hi[i];
  for (std::size_t i = 0; i < pr.u_lo.size(); ++i) lo += pr.w_lo[i] * k.lag(pr.u_lo[i]) * pr.g_lo[i];
  const double tail = tail_term(pr, k);
  const double v_hi = hi + tail;
  const double v_lo = lo + tail;
  out.value = v_hi;
  out.error_estimate = std::abs(v_hi - v_lo) / (std::abs(v_hi) + 1e-300);
  if (out.error_estimate > 1e-3)
    out.warning = "quadrature refinement above 1e-3 relative";
  return out;
}

QuadFormResult bilinear_form(const ShapeFn& a, const ShapeFn& b, const AutocorKernel& kernel,
                             const QuadratureOptions& opts) {
  return quadratic_form_from_profile(build_lag_profile(a, b, opts), kernel);
}

QuadFormResult quadratic_form(const ShapeFn& s, const AutocorKernel& kernel,
                              const QuadratureOptions& opts) {
  return bilinear_form(s, s, kernel, opts);
}

InfidelityReport average_infidelity(const ShapeFn& shape, const GateSpec& gate, double kappa,
                                    const AutocorKernel& kernel, const QuadratureOptions& opts) {
  gate.validate();
  if (!(kappa > 0.0)) throw std::domain_error("average_infidelity: kappa must be positive");
  QuadFormResult q = quadratic_form(shape, kernel, opts);
  InfidelityReport rep;
  rep.quad_form = q.value;
  rep.infidelity = 3.0 * M_PI * M_PI / 32.0 * gate.k * gate.k * kappa * kappa * q.value;
  rep.kernel_variant = kernel.variant;
  rep.shape_tag = shape.tag();
  rep.quad_error = q.error_estimate;
  rep.warning = q.warning;
  return rep;
}

double exact_overlap_fidelity(double dtheta) {
  const double s = std::sin(dtheta);
  return std::sqrt(1.0 - 0.75 * s * s);
}

std::vector<double> chebyshev_coeffs(const ShapeFn& s, int n_max) {
  if (n_max < 0) throw std::domain_error("chebyshev_coeffs: n_max must be >= 0");
  std::vector<double> phi(n_max + 1);
  const double e = s.endpoint_exponent();
  for (int n = 0; n <= n_max; ++n) {
    phi[n] = tanh_sinh_weighted(
        [&](double t) { return shifted_chebyshev(n, t) * s.regular_part(t); }, 0.0, 1.0, e, e,
        1e-12, 12);
  }
  return phi;
}

ChebInfidelityResult chebyshev_infidelity_alpha1(const std::vector<double>& phi,
                                                 const TlfEnsembleModel& m, double T) {
  m.validate();
  if (std::abs(m.alpha - 1.0) > 1e-8)
    throw std::domain_error("chebyshev_infidelity_alpha1: model must have alpha = 1");
  if (phi.empty() || std::abs(phi[0] - 1.0) > 1e-6)
    throw std::invalid_argument("chebyshev_infidelity_alpha1: Phi_0 must be 1 (normalized shape)");
  const double p0 = p0_from_r0(m);
  double series = 0.0;
  for (std::size_t n = 1; n < phi.size(); ++n) series += phi[n] * phi[n] / static_cast<double>(n);
  ChebInfidelityResult out;
  out.value = 4.0 * p0 * (-euler_gamma - std::log(M_PI * m.f_min * T / 2.0) + 2.0 * series);
  // crude tail bound from the last few coefficients
  double tail = 0.0;
  for (std::size_t n = phi.size() >= 3 ? phi.size() - 3 : 1; n < phi.size(); ++n)
    tail += phi[n] * phi[n] / static_cast<double>(n);
  out.tail_estimate = 8.0 * p0 * tail;
  if (out.tail_estimate > 1e-6 * std::abs(out.value))
    out.warning = "Chebyshev series tail above 1e-6 relative; increase n_max";
  return out;
}

}  // namespace fracpulse
