#pragma once

#include <string>

namespace fracpulse {

/// Euler-Mascheroni constant.
inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

/// Result of a special-function evaluation with an error estimate attached.
struct SpecialFnEval {
  double value = 0.0;
  double abs_error = 0.0;
  double rel_error = 0.0;
  std::string method;  // "series" | "continued-fraction" | "closed-form" | "recurrence"
  int terms = 0;
};

/// Generalized exponential integral E_nu(z) = int_1^inf e^{-z s} s^{-nu} ds.
///
/// nu in (0,3], z >= 0; z = 0 requires nu > 1 (the integral diverges otherwise).
/// Convergent series for z <= 1, modified Lentz continued fraction for z > 1.
/// Near nu = 1 the prefactor is evaluated in expm1 form, which removes the
/// cancellation of the 1/(1-nu) pole; at nu = 1 this reduces to the
/// logarithmic branch -C - ln z + sum.
SpecialFnEval gen_exp_integral_ex(double nu, double z, double rel_tol = 1e-12);
double gen_exp_integral(double nu, double z, double rel_tol = 1e-12);

/// Beta function B(a,b) = Gamma(a)Gamma(b)/Gamma(a+b), a, b > 0.
double beta_fn(double a, double b);

/// Shifted Chebyshev polynomial T~_n(tau) = T_n(2 tau - 1), tau in [0,1].
double shifted_chebyshev(int n, double tau);

}  // namespace fracpulse
