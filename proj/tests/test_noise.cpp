#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <stdexcept>

#include "fracpulse/noise.hpp"
#include "fracpulse/quadrature.hpp"
#include "fracpulse/special.hpp"
#include "oracles.hpp"

using namespace fracpulse;

namespace {

// Independent gamma-integral oracle: 2048-point Gauss-Legendre in ln(gamma)
// of the Lorentzian-mixture auto-correlation.
double gamma_integral_autocor(const TlfEnsembleModel& m, double dt) {
  std::vector<double> xn, xw;
  gauss_legendre_01(2048, xn, xw);
  const double la = std::log(m.gamma_min()), lb = std::log(m.gamma_max());
  double acc = 0.0;
  for (std::size_t i = 0; i < xn.size(); ++i) {
    const double g = std::exp(la + (lb - la) * xn[i]);
    acc += xw[i] * energy_density(m, g) * g * std::exp(-2.0 * g * std::abs(dt));
  }
  return (lb - la) * acc;
}

}  // namespace

TEST_CASE("tlf_autocorrelation basics") {
  CHECK(tlf_autocorrelation(1.0, 123.0, 0.0) == 1.0);
  CHECK(tlf_autocorrelation(1.0, 1e5, 1.0) == doctest::Approx(0.0).epsilon(1e-30));
  CHECK(tlf_autocorrelation(2e-6, 1e5, 5e-6) == doctest::Approx(2e-6 * std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("energy density: indicator band, normalization, flat limit") {
  const auto m = TlfEnsembleModel::paper_preset(1.4);
  CHECK(energy_density(m, 0.5 * m.gamma_min()) == 0.0);
  CHECK(energy_density(m, 2.0 * m.gamma_max()) == 0.0);
  // integral over the band telescopes to R0
  const double integral = oracles::integrate(
      [&](double lg) {
        const double g = std::exp(lg);
        return energy_density(m, g) * g;
      },
      std::log(m.gamma_min()), std::log(m.gamma_max()), 1e-11);
  CHECK(integral == doctest::Approx(m.r0).epsilon(1e-9));
  // alpha -> 0 limit: flat density R0/(gmax - gmin)
  TlfEnsembleModel flat{1e-6, 1e4, 1e10, 1e-9};
  CHECK(energy_density(flat, 1e7) ==
        doctest::Approx(flat.r0 / (flat.gamma_max() - flat.gamma_min())).epsilon(1e-6));
}

TEST_CASE("p0_from_r0 matches Eq.-6 arithmetic") {
  SUBCASE("alpha = 1 with a decade ratio of 1e6") {
    TlfEnsembleModel m{1e-6, 1e4, 1e10, 1.0};
    CHECK(p0_from_r0(m) == doctest::Approx(1e-6 / (4.0 * std::log(1e6))).epsilon(1e-12));
    CHECK(p0_from_r0(m) == doctest::Approx(1.809e-8).epsilon(1e-3));
  }
  SUBCASE("alpha = 0.5 closed form") {
    TlfEnsembleModel m{1e-6, 1e4, 1e10, 0.5};
    const double want = 1e-6 / (4.0 * std::sin(M_PI / 4.0)) * 0.5 /
                        (std::pow(1e10, 0.5) - std::pow(1e4, 0.5));
    CHECK(p0_from_r0(m) == doctest::Approx(want).epsilon(1e-12));
  }
  SUBCASE("alpha -> 1 branch continuity") {
    TlfEnsembleModel just_below{1e-6, 1e4, 1e10, 1.0 - 1e-5};
    TlfEnsembleModel at_one{1e-6, 1e4, 1e10, 1.0};
    CHECK(p0_from_r0(just_below) == doctest::Approx(p0_from_r0(at_one)).epsilon(1e-6));
    TlfEnsembleModel just_above{1e-6, 1e4, 1e10, 1.0 + 1e-5};
    CHECK(p0_from_r0(just_above) == doctest::Approx(p0_from_r0(at_one)).epsilon(1e-6));
  }
}

TEST_CASE("autocor_exact: zero lag, oracle agreement, decay") {
  for (double alpha : {0.5, 1.0, 1.4}) {
    const auto m = TlfEnsembleModel::paper_preset(alpha);
    CHECK(autocor_exact(m, 0.0) == m.r0);
    // gamma-integral oracle over the full lag range
    for (double dt : {1e-10, 1e-9, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4}) {
      const double want = gamma_integral_autocor(m, dt);
      CHECK(std::abs(autocor_exact(m, dt) - want) <= 1e-8 * std::abs(want));
    }
    // monotone decay toward zero for dt >> 1/f_min
    CHECK(autocor_exact(m, 1e-2) < 1e-3 * m.r0);
    double prev = autocor_exact(m, 1e-10);
    for (double dt : {1e-9, 1e-8, 1e-7, 1e-6, 1e-5}) {
      const double cur = autocor_exact(m, dt);
      CHECK(cur < prev);
      prev = cur;
    }
  }
}

TEST_CASE("exact kernels with equal R0 agree at zero lag across alpha") {
  const double r0 = 1e-6;
  for (double alpha : {0.3, 0.8, 1.0, 1.5}) {
    const auto m = TlfEnsembleModel::paper_preset(alpha, r0);
    CHECK(autocor_exact(m, 0.0) == doctest::Approx(r0).epsilon(1e-12));
  }
}

TEST_CASE("autocor_coarse matches exact for small theta and handles alpha = 1") {
  SUBCASE("alpha = 0.5, theta = 1e-3, full-lag agreement within 5%") {
    const auto m = TlfEnsembleModel::paper_preset(0.5);
    const double T = 1e-3 / (2.0 * M_PI * m.f_min);
    const double coarse = autocor_coarse(m, T, 1.0, 0.0);
    const double exact = autocor_exact(m, T);
    CHECK(coarse == doctest::Approx(exact).epsilon(0.05));
  }
  SUBCASE("alpha = 1 logarithm drops 4 P0 ln 10 per decade of T") {
    const auto m = TlfEnsembleModel::paper_preset(1.0);
    const double p0 = p0_from_r0(m);
    const double a = autocor_coarse(m, 1e-8, 0.4, 0.1);
    const double b = autocor_coarse(m, 1e-7, 0.4, 0.1);
    CHECK(a - b == doctest::Approx(4.0 * p0 * std::log(10.0)).epsilon(1e-10));
  }
  SUBCASE("alpha > 1 is finite on the diagonal") {
    const auto m = TlfEnsembleModel::paper_preset(1.5);
    CHECK(std::isfinite(autocor_coarse(m, 1e-8, 0.3, 0.3)));
  }
  SUBCASE("diagonal singularity rejected for alpha <= 1") {
    CHECK_THROWS_AS(autocor_coarse(TlfEnsembleModel::paper_preset(0.5), 1e-8, 0.3, 0.3),
                    std::domain_error);
    CHECK_THROWS_AS(autocor_coarse(TlfEnsembleModel::paper_preset(1.0), 1e-8, 0.3, 0.3),
                    std::domain_error);
  }
}

TEST_CASE("autocor_improved: remainder parameters and Fig.-3 regime") {
  SUBCASE("A and zeta at alpha = 1") {
    const double alpha = 1.0;
    CHECK((3.0 - alpha) / ((2.0 - alpha) * (2.0 - alpha)) == doctest::Approx(2.0));
    CHECK((2.0 - alpha) / (3.0 - alpha) == doctest::Approx(0.5));
  }
  SUBCASE("coincides with coarse on the diagonal limit") {
    const auto m = TlfEnsembleModel::paper_preset(1.5);
    const double c = autocor_coarse(m, 1e-8, 0.5, 0.5);
    const double i = autocor_improved(m, 1e-8, 0.5, 0.5);
    CHECK(i == doctest::Approx(c).epsilon(1e-12));
  }
  SUBCASE("improved tracks exact within 2% where coarse is off by > 10% (theta = 0.5)") {
    const auto m = TlfEnsembleModel::paper_preset(1.4);
    const double T = 0.5 / (2.0 * M_PI * m.f_min);
    int coarse_bad = 0;
    for (double d : {0.3, 0.5, 0.7, 0.9, 1.0}) {
      const double exact = autocor_exact(m, d * T);
      const double coarse = autocor_coarse(m, T, d, 0.0);
      const double improved = autocor_improved(m, T, d, 0.0);
      if (std::abs(coarse - exact) > 0.10 * std::abs(exact)) {
        ++coarse_bad;
        CHECK(std::abs(improved - exact) <= 0.02 * std::abs(exact));
      }
    }
    CHECK(coarse_bad > 0);  // the regime genuinely exercises the correction
  }
}

TEST_CASE("psd: bulk law, plateau, high-frequency rolloff") {
  SUBCASE("bulk within 10% of P0/f^alpha at the geometric mean") {
    const auto m = TlfEnsembleModel::paper_preset(1.0);
    const double f = std::sqrt(m.f_min * m.f_max);
    CHECK(psd(m, f) == doctest::Approx(p0_from_r0(m) / f).epsilon(0.10));
  }
  SUBCASE("plateau below f_min") {
    const auto m = TlfEnsembleModel::paper_preset(1.2);
    const double f = 1e-2 * m.f_min;
    const double ratio = psd(m, f) / psd(m, 0.5 * f);
    CHECK(ratio > 0.9);
    CHECK(ratio < 1.1);
  }
  SUBCASE("local log-log slope -2 above f_max") {
    const auto m = TlfEnsembleModel::paper_preset(0.8);
    const double f = 10.0 * m.f_max;
    const double slope = std::log(psd(m, 2.0 * f) / psd(m, f)) / std::log(2.0);
    CHECK(std::abs(slope + 2.0) <= 0.1);
  }
}

TEST_CASE("fbm autocorrelation") {
  FbmModel m{1e-8, 1.4, 1e-8};
  SUBCASE("vanishes at the origin") { CHECK(fbm_autocorrelation(m, 0.0, 0.0) == 0.0); }
  SUBCASE("diagonal value") {
    const double tau = 0.37;
    const double pre = 2.0 * m.p0 * std::pow(2.0 * M_PI * m.T, m.alpha - 1.0) *
                       std::abs(std::tgamma(1.0 - m.alpha) * std::sin(M_PI * m.alpha / 2.0));
    CHECK(fbm_autocorrelation(m, tau, tau) ==
          doctest::Approx(pre * 2.0 * std::pow(tau, m.alpha - 1.0)).epsilon(1e-12));
  }
  SUBCASE("doubling T scales by 2^{alpha-1}") {
    FbmModel m2 = m;
    m2.T *= 2.0;
    CHECK(fbm_autocorrelation(m2, 0.3, 0.6) ==
          doctest::Approx(std::pow(2.0, m.alpha - 1.0) * fbm_autocorrelation(m, 0.3, 0.6))
              .epsilon(1e-12));
  }
  SUBCASE("nonnegative on a grid") {
    for (double t1 : {0.0, 0.2, 0.5, 0.9})
      for (double t2 : {0.1, 0.4, 1.0}) CHECK(fbm_autocorrelation(m, t1, t2) >= 0.0);
  }
  SUBCASE("domain checks") {
    CHECK_THROWS_AS(fbm_autocorrelation(FbmModel{1e-8, 0.9, 1e-8}, 0.1, 0.2), std::domain_error);
    CHECK_THROWS_AS(fbm_autocorrelation(m, -0.1, 0.2), std::domain_error);
  }
}

TEST_CASE("kernel symmetry in (tau1, tau2)") {
  const auto m = TlfEnsembleModel::paper_preset(0.7);
  const double T = 1e-8;
  const auto ke = exact_kernel(m, T);
  const auto kc = coarse_kernel(m, T);
  const auto ki = improved_kernel(m, T);
  const auto kf = fbm_kernel(FbmModel{1e-8, 1.4, T});
  for (double t1 : {0.1, 0.4, 0.8}) {
    for (double t2 : {0.2, 0.6, 0.95}) {
      CHECK(ke(t1, t2) == ke(t2, t1));
      CHECK(kc(t1, t2) == kc(t2, t1));
      CHECK(ki(t1, t2) == ki(t2, t1));
      CHECK(kf(t1, t2) == kf(t2, t1));
    }
  }
}

TEST_CASE("kernel Gram matrices on random points are positive semidefinite") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(0.01, 0.99);
  auto check_psd = [&](const AutocorKernel& k, int n_pts) {
    std::vector<double> pts(n_pts);
    for (double& p : pts) p = uni(rng);
    Eigen::MatrixXd gram(n_pts, n_pts);
    for (int i = 0; i < n_pts; ++i)
      for (int j = 0; j < n_pts; ++j) gram(i, j) = k(pts[i], pts[j]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (gram + gram.transpose()));
    CHECK(es.eigenvalues().minCoeff() >= -1e-8 * gram.trace());
  };
  const auto m = TlfEnsembleModel::paper_preset(1.3);
  check_psd(exact_kernel(m, 1e-8), 32);
  check_psd(fbm_kernel(FbmModel{1e-8, 1.4, 1e-8}), 32);
  // coarse/improved only in their validity window theta <= 0.1
  const double t_small = 0.05 / (2.0 * M_PI * m.f_min);
  check_psd(coarse_kernel(m, t_small), 24);
  check_psd(improved_kernel(m, t_small), 24);
}

TEST_CASE("kernel factories carry diagnostics") {
  const auto m = TlfEnsembleModel::paper_preset(0.5);
  const double t_big = 0.3 / (2.0 * M_PI * m.f_min);
  CHECK(!coarse_kernel(m, t_big).warning.empty());
  CHECK(coarse_kernel(m, 1e-9).warning.empty());
  CHECK(exact_kernel(m, 1e-8).stationary);
  CHECK(!fbm_kernel(FbmModel{1e-8, 1.4, 1e-8}).stationary);
}

TEST_CASE("mixture kernel hook sums Lorentzian components") {
  const std::vector<double> rates{1e5, 1e7};
  const std::vector<double> energies{2e-7, 3e-7};
  const auto k = mixture_kernel(rates, energies, 1e-6);
  const double u = 0.25;
  const double want = 2e-7 * std::exp(-2.0 * 1e5 * u * 1e-6) + 3e-7 * std::exp(-2.0 * 1e7 * u * 1e-6);
  CHECK(k.lag(u) == doctest::Approx(want).epsilon(1e-14));
  CHECK(k.smooth_at_zero == doctest::Approx(5e-7));
  CHECK_THROWS_AS(mixture_kernel({1.0}, {-1.0}, 1e-6), std::domain_error);
}
