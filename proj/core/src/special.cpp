#include "fracpulse/special.hpp"

#include <cmath>
#include <stdexcept>

namespace fracpulse {

namespace {

// Series branch, valid for z <= 1 and nu in (0, 1.5]:
//   E_nu(z) = [Gamma(2-nu) z^{nu-1} - 1]/(1-nu) - sum_{k>=1} (-z)^k / (k! (1-nu+k)).
// The leading bracket is computed as expm1(lgamma(2-nu) + (nu-1) ln z) when nu
// is close to 1, which is exact through the nu -> 1 limit -(C + ln z).
SpecialFnEval series_small_z(double nu, double z, double rel_tol) {
  SpecialFnEval out;
  out.method = "series";

  double lead;
  if (std::abs(1.0 - nu) < 1e-13) {
    lead = -(euler_gamma + std::log(z));
  } else if (std::abs(1.0 - nu) < 1e-3) {
    const double t = std::lgamma(2.0 - nu) + (nu - 1.0) * std::log(z);
    lead = std::expm1(t) / (1.0 - nu);
  } else {
    lead = (std::tgamma(2.0 - nu) * std::pow(z, nu - 1.0) - 1.0) / (1.0 - nu);
  }

  double sum = 0.0;
  double pow_term = 1.0;  // (-z)^k / k!
  int k = 0;
  double term = 0.0;
  for (k = 1; k <= 200; ++k) {
    pow_term *= -z / k;
    term = pow_term / (1.0 - nu + k);
    sum += term;
    if (std::abs(term) < 0.25 * rel_tol * (std::abs(lead - sum) + 1e-300)) break;
  }
  out.value = lead - sum;
  out.abs_error = std::abs(term);
  out.rel_error = out.abs_error / (std::abs(out.value) + 1e-300);
  out.terms = k;
  return out;
}

// Modified Lentz continued fraction, z > 1, any nu > 0.
SpecialFnEval lentz_cf(double nu, double z, double rel_tol) {
  SpecialFnEval out;
  out.method = "continued-fraction";
  const double tiny = 1e-300;
  double b = z + nu;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  int i = 1;
  double del = 0.0;
  for (; i <= 400; ++i) {
    const double a = -i * (nu - 1.0 + i);
    b += 2.0;
    d = a * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < rel_tol) break;
  }
  out.value = h * std::exp(-z);
  out.rel_error = std::abs(del - 1.0);
  out.abs_error = out.rel_error * std::abs(out.value);
  out.terms = i;
  if (i > 400) throw std::runtime_error("gen_exp_integral: continued fraction failed to converge");
  return out;
}

}  // namespace

SpecialFnEval gen_exp_integral_ex(double nu, double z, double rel_tol) {
  if (!(nu > 0.0) || nu > 3.0) throw std::domain_error("gen_exp_integral: nu must be in (0, 3]");
  if (z < 0.0) throw std::domain_error("gen_exp_integral: z must be >= 0");
  if (z == 0.0) {
    if (nu <= 1.0) throw std::domain_error("gen_exp_integral: divergent at z = 0 for nu <= 1");
    SpecialFnEval out;
    out.method = "closed-form";
    out.value = 1.0 / (nu - 1.0);
    return out;
  }
  if (z > 1.0) return lentz_cf(nu, z, rel_tol);
  if (nu > 1.5) {
    // Step down with E_nu(z) = (e^{-z} - z E_{nu-1}(z)) / (nu - 1).
    SpecialFnEval lower = gen_exp_integral_ex(nu - 1.0, z, rel_tol);
    SpecialFnEval out;
    out.value = (std::exp(-z) - z * lower.value) / (nu - 1.0);
    out.abs_error = z * lower.abs_error / (nu - 1.0);
    out.rel_error = out.abs_error / (std::abs(out.value) + 1e-300);
    out.method = "recurrence";
    out.terms = lower.terms;
    return out;
  }
  return series_small_z(nu, z, rel_tol);
}

double gen_exp_integral(double nu, double z, double rel_tol) {
  return gen_exp_integral_ex(nu, z, rel_tol).value;
}

double beta_fn(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("beta_fn: arguments must be positive");
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

double shifted_chebyshev(int n, double tau) {
  if (n < 0) throw std::domain_error("shifted_chebyshev: order must be >= 0");
  const double x = 2.0 * tau - 1.0;
  if (n == 0) return 1.0;
  if (n == 1) return x;
  double t0 = 1.0, t1 = x;
  for (int k = 2; k <= n; ++k) {
    const double t2 = 2.0 * x * t1 - t0;
    t0 = t1;
    t1 = t2;
  }
  return t1;
}

}  // namespace fracpulse
