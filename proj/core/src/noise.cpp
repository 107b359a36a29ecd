#include "fracpulse/noise.hpp"

#include <cmath>
#include <stdexcept>

#include "fracpulse/quadrature.hpp"
#include "fracpulse/special.hpp"

namespace fracpulse {

namespace {
constexpr double alpha1_window = 1e-8;

bool near_one(double alpha) { return std::abs(alpha - 1.0) < alpha1_window; }
}  // namespace

double TlfEnsembleModel::gamma_min() const { return M_PI * f_min; }
double TlfEnsembleModel::gamma_max() const { return M_PI * f_max; }

void TlfEnsembleModel::validate() const {
  if (!(alpha > 0.0) || !(alpha < 2.0))
    throw std::domain_error("TlfEnsembleModel: alpha must be in (0,2)");
  if (!(f_min > 0.0) || !(f_max > f_min))
    throw std::domain_error("TlfEnsembleModel: need 0 < f_min < f_max");
  if (!(r0 > 0.0)) throw std::domain_error("TlfEnsembleModel: R0 must be positive");
}

double TlfEnsembleModel::normalization() const {
  const double gmin = gamma_min(), gmax = gamma_max();
  if (near_one(alpha)) return std::log(gmax / gmin);
  return (std::pow(gmax, 1.0 - alpha) - std::pow(gmin, 1.0 - alpha)) / (1.0 - alpha);
}

double TlfEnsembleModel::p0() const { return p0_from_r0(*this); }

TlfEnsembleModel TlfEnsembleModel::paper_preset(double alpha, double r0) {
  TlfEnsembleModel m{r0, 1e4, 1e10, alpha};
  m.validate();
  return m;
}

void FbmModel::validate() const {
  if (!(alpha > 1.0) || !(alpha < 2.0)) throw std::domain_error("FbmModel: alpha must be in (1,2)");
  if (!(p0 > 0.0) || !(T > 0.0)) throw std::domain_error("FbmModel: P0 and T must be positive");
}

double tlf_autocorrelation(double energy, double gamma, double dt) {
  if (energy < 0.0) throw std::domain_error("tlf_autocorrelation: energy must be >= 0");
  if (!(gamma > 0.0)) throw std::domain_error("tlf_autocorrelation: gamma must be > 0");
  return energy * std::exp(-2.0 * gamma * std::abs(dt));
}

double energy_density(const TlfEnsembleModel& m, double gamma) {
  if (gamma < m.gamma_min() || gamma > m.gamma_max()) return 0.0;
  return m.r0 * std::pow(gamma, -m.alpha) / m.normalization();
}

double p0_from_r0(const TlfEnsembleModel& m) {
  m.validate();
  const double pre = m.r0 / (4.0 * std::sin(M_PI * m.alpha / 2.0));
  if (near_one(m.alpha)) return pre / std::log(m.f_max / m.f_min);
  return pre * (1.0 - m.alpha) /
         (std::pow(m.f_max, 1.0 - m.alpha) - std::pow(m.f_min, 1.0 - m.alpha));
}

double autocor_exact(const TlfEnsembleModel& m, double dt) {
  m.validate();
  dt = std::abs(dt);
  if (dt == 0.0) return m.r0;
  const double p0 = p0_from_r0(m);
  const double s = std::sin(M_PI * m.alpha / 2.0);
  const double z_min = 2.0 * M_PI * m.f_min * dt;
  const double z_max = 2.0 * M_PI * m.f_max * dt;
  const double term_min = std::pow(m.f_min, 1.0 - m.alpha) * gen_exp_integral(m.alpha, z_min);
  // the f_max term underflows for large lags
  double term_max = 0.0;
  if (z_max < 700.0)
    term_max = std::pow(m.f_max, 1.0 - m.alpha) * gen_exp_integral(m.alpha, z_max);
  return 4.0 * p0 * s * (term_min - term_max);
}

double autocor_coarse(const TlfEnsembleModel& m, double T, double tau1, double tau2) {
  m.validate();
  if (!(T > 0.0)) throw std::domain_error("autocor_coarse: T must be positive");
  const double dtau = std::abs(tau1 - tau2);
  const double theta = 2.0 * M_PI * m.f_min * T;
  const double p0 = p0_from_r0(m);
  if (near_one(m.alpha)) {
    if (dtau == 0.0)
      throw std::domain_error("autocor_coarse: singular on the diagonal for alpha <= 1");
    return 4.0 * p0 * (-euler_gamma - std::log(theta * dtau));
  }
  if (m.alpha <= 1.0 && dtau == 0.0)
    throw std::domain_error("autocor_coarse: singular on the diagonal for alpha <= 1");
  const double s = std::sin(M_PI * m.alpha / 2.0);
  const double pre = 4.0 * p0 * s * std::pow(m.f_min, 1.0 - m.alpha) / (1.0 - m.alpha);
  const double power = (dtau == 0.0) ? 0.0 : std::pow(theta, m.alpha - 1.0) *
                                                 std::tgamma(2.0 - m.alpha) *
                                                 std::pow(dtau, m.alpha - 1.0);
  return pre * (power - 1.0);
}

double autocor_improved(const TlfEnsembleModel& m, double T, double tau1, double tau2) {
  const double dtau = std::abs(tau1 - tau2);
  const double theta = 2.0 * M_PI * m.f_min * T;
  const double a_rem = (3.0 - m.alpha) / ((2.0 - m.alpha) * (2.0 - m.alpha));
  const double zeta = (2.0 - m.alpha) / (3.0 - m.alpha);
  const double p0 = p0_from_r0(m);
  const double s = std::sin(M_PI * m.alpha / 2.0);
  const double corr = 4.0 * p0 * s * std::pow(m.f_min, 1.0 - m.alpha) * a_rem *
                      (-std::expm1(-theta * zeta * dtau));
  return autocor_coarse(m, T, tau1, tau2) + corr;
}

double psd(const TlfEnsembleModel& m, double f) {
  m.validate();
  if (!(f > 0.0)) throw std::domain_error("psd: frequency must be positive");
  // 2048-point Gauss-Legendre in ln(gamma); integrand is smooth on the log axis.
  static thread_local std::vector<double> xn, xw;
  if (xn.empty()) gauss_legendre_01(2048, xn, xw);
  const double la = std::log(m.gamma_min()), lb = std::log(m.gamma_max());
  const double pf2 = M_PI * M_PI * f * f;
  double acc = 0.0;
  for (std::size_t i = 0; i < xn.size(); ++i) {
    const double g = std::exp(la + (lb - la) * xn[i]);
    acc += xw[i] * energy_density(m, g) * g * g / (g * g + pf2);
  }
  return 0.5 * (lb - la) * acc;
}

double fbm_autocorrelation(const FbmModel& m, double tau1, double tau2) {
  m.validate();
  if (tau1 < 0.0 || tau1 > 1.0 || tau2 < 0.0 || tau2 > 1.0)
    throw std::domain_error("fbm_autocorrelation: tau must lie in [0,1]");
  const double a = m.alpha;
  const double pre = 2.0 * m.p0 * std::pow(2.0 * M_PI * m.T, a - 1.0) *
                     std::abs(std::tgamma(1.0 - a) * std::sin(M_PI * a / 2.0));
  const double d = std::abs(tau1 - tau2);
  const double bracket = std::pow(tau1, a - 1.0) + std::pow(tau2, a - 1.0) -
                         (d == 0.0 ? 0.0 : std::pow(d, a - 1.0));
  return pre * bracket;
}

namespace {
AutocorKernel stationary_base(const TlfEnsembleModel& m, double T, std::string variant) {
  AutocorKernel k;
  k.variant = std::move(variant);
  k.alpha = m.alpha;
  k.theta = 2.0 * M_PI * m.f_min * T;
  k.stationary = true;
  return k;
}
}  // namespace

AutocorKernel exact_kernel(const TlfEnsembleModel& m, double T) {
  m.validate();
  AutocorKernel k = stationary_base(m, T, "exact");
  k.lag = [m, T](double u) { return autocor_exact(m, u * T); };
  k.full = [m, T](double t1, double t2) { return autocor_exact(m, std::abs(t1 - t2) * T); };
  k.diag = AutocorKernel::Diag::none;
  k.smooth_at_zero = m.r0;
  return k;
}

AutocorKernel coarse_kernel(const TlfEnsembleModel& m, double T) {
  m.validate();
  AutocorKernel k = stationary_base(m, T, "coarse");
  if (k.theta > 0.1) k.warning = "theta = 2 pi f_min T exceeds 0.1; coarse kernel degrades";
  const double p0 = p0_from_r0(m);
  if (near_one(m.alpha)) {
    k.diag = AutocorKernel::Diag::log;
    k.sing_coeff = 4.0 * p0;
    k.smooth_at_zero = 4.0 * p0 * (-euler_gamma - std::log(k.theta));
  } else {
    const double pre = 4.0 * p0 * std::sin(M_PI * m.alpha / 2.0) *
                       std::pow(m.f_min, 1.0 - m.alpha) / (1.0 - m.alpha);
    // u^{alpha-1} term: singular for alpha < 1, continuous otherwise; the
    // descriptor carries it either way.
    k.diag = AutocorKernel::Diag::power;
    k.sing_coeff = pre * std::pow(k.theta, m.alpha - 1.0) * std::tgamma(2.0 - m.alpha);
    k.smooth_at_zero = -pre;
  }
  k.lag = [m, T](double u) { return autocor_coarse(m, T, u, 0.0); };
  k.full = [m, T](double t1, double t2) { return autocor_coarse(m, T, t1, t2); };
  return k;
}

AutocorKernel improved_kernel(const TlfEnsembleModel& m, double T) {
  AutocorKernel k = coarse_kernel(m, T);
  k.variant = "improved";
  k.warning.clear();
  if (k.theta > 1.0) k.warning = "theta = 2 pi f_min T exceeds 1; improved kernel degrades";
  // exponential correction vanishes at zero lag: diagonal descriptor unchanged
  k.lag = [m, T](double u) { return autocor_improved(m, T, u, 0.0); };
  k.full = [m, T](double t1, double t2) { return autocor_improved(m, T, t1, t2); };
  return k;
}

AutocorKernel fbm_kernel(const FbmModel& m) {
  m.validate();
  AutocorKernel k;
  k.variant = "fbm";
  k.alpha = m.alpha;
  k.stationary = false;
  k.fbm_coeff = 2.0 * m.p0 * std::pow(2.0 * M_PI * m.T, m.alpha - 1.0) *
                std::abs(std::tgamma(1.0 - m.alpha) * std::sin(M_PI * m.alpha / 2.0));
  k.full = [m](double t1, double t2) { return fbm_autocorrelation(m, t1, t2); };
  k.diag = AutocorKernel::Diag::none;
  return k;
}

AutocorKernel mixture_kernel(const std::vector<double>& rates,
                             const std::vector<double>& energies, double T) {
  if (rates.size() != energies.size())
    throw std::invalid_argument("mixture_kernel: rates/energies size mismatch");
  AutocorKernel k;
  k.variant = "mixture";
  k.stationary = true;
  double total = 0.0;
  for (double e : energies) {
    if (e < 0.0) throw std::domain_error("mixture_kernel: energies must be >= 0");
    total += e;
  }
  k.smooth_at_zero = total;
  k.diag = AutocorKernel::Diag::none;
  auto lag = [rates, energies, T](double u) {
    double acc = 0.0;
    for (std::size_t j = 0; j < rates.size(); ++j)
      acc += energies[j] * std::exp(-2.0 * rates[j] * u * T);
    return acc;
  };
  k.lag = lag;
  k.full = [lag](double t1, double t2) { return lag(std::abs(t1 - t2)); };
  return k;
}

}  // namespace fracpulse
