#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

#include "fracpulse/operators.hpp"
#include "fracpulse/special.hpp"

using namespace fracpulse;

namespace {

Eigen::VectorXd sample(const QuadratureGrid& g, const std::function<double(double)>& f) {
  Eigen::VectorXd v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = f(g.nodes[i]);
  return v;
}

}  // namespace

TEST_CASE("rl_integral power rules and cumulative integral") {
  const auto g = make_grid(GridScheme::legendre, 96);
  SUBCASE("left beta=1/2 on the constant gives 2 sqrt(x/pi)") {
    const auto op = rl_integral(0.5, Side::left, g);
    const Eigen::VectorXd r = op.apply(sample(g, [](double) { return 1.0; }));
    for (std::size_t i = 0; i < g.size(); ++i)
      CHECK(r[i] == doctest::Approx(2.0 * std::sqrt(g.nodes[i] / M_PI)).epsilon(1e-12));
  }
  SUBCASE("left beta=1 is the ordinary cumulative integral") {
    const auto op = rl_integral(1.0, Side::left, g);
    const Eigen::VectorXd r = op.apply(sample(g, [](double) { return 1.0; }));
    for (std::size_t i = 0; i < g.size(); ++i)
      CHECK(r[i] == doctest::Approx(g.nodes[i]).epsilon(1e-12));
  }
  SUBCASE("right beta=1/2 on the constant gives 2 sqrt((1-x)/pi)") {
    const auto op = rl_integral(0.5, Side::right, g);
    const Eigen::VectorXd r = op.apply(sample(g, [](double) { return 1.0; }));
    for (std::size_t i = 0; i < g.size(); ++i)
      CHECK(r[i] == doctest::Approx(2.0 * std::sqrt((1.0 - g.nodes[i]) / M_PI)).epsilon(1e-12));
    // x -> 0 limit is 2/sqrt(pi)
    CHECK(r[0] == doctest::Approx(2.0 / std::sqrt(M_PI)).epsilon(1e-3));
  }
  CHECK_THROWS_AS(rl_integral(0.0, Side::left, g), std::domain_error);
  CHECK_THROWS_AS(rl_integral(2.5, Side::left, g), std::domain_error);
}

TEST_CASE("rl_derivative: power rule, composition, right side") {
  const auto g = make_grid(GridScheme::legendre, 128);
  SUBCASE("left beta=1/2 of sqrt(x) is the constant sqrt(pi)/2") {
    const auto d = rl_derivative(0.5, Side::left, g);
    const Eigen::VectorXd r = d.apply(sample(g, [](double x) { return std::sqrt(x); }));
    for (std::size_t i = 0; i < g.size(); ++i)
      CHECK(r[i] == doctest::Approx(std::sqrt(M_PI) / 2.0).epsilon(1e-9));
  }
  SUBCASE("D^beta I^beta returns a cubic, max abs error <= 1e-6 at N=128") {
    for (double beta : {0.25, 0.5, 0.75}) {
      const auto integ = rl_integral(beta, Side::left, g);
      const auto deriv = rl_derivative(beta, Side::left, g);
      const Eigen::VectorXd f =
          sample(g, [](double x) { return 1.0 + x - 2.0 * x * x + 3.0 * x * x * x; });
      const Eigen::VectorXd r = deriv.apply(integ.apply(f));
      CHECK((r - f).cwiseAbs().maxCoeff() <= 1e-6);
    }
  }
  SUBCASE("right beta=1/2 of sqrt(1-x) is the constant sqrt(pi)/2") {
    const auto d = rl_derivative(0.5, Side::right, g);
    const Eigen::VectorXd r = d.apply(sample(g, [](double x) { return std::sqrt(1.0 - x); }));
    for (std::size_t i = 0; i < g.size(); ++i)
      CHECK(r[i] == doctest::Approx(std::sqrt(M_PI) / 2.0).epsilon(1e-9));
  }
  CHECK_THROWS_AS(rl_derivative(1.0, Side::left, g), std::domain_error);
  CHECK_THROWS_AS(rl_derivative(0.0, Side::left, g), std::domain_error);
}

TEST_CASE("power rule across kappa and beta, operand-matched representation") {
  const auto g = make_grid(GridScheme::legendre, 256);
  for (double beta : {0.25, 0.5, 0.75}) {
    for (double kappa : {0.5, 1.0, 2.0}) {
      const auto d = rl_derivative(beta, Side::left, g, kappa);
      const Eigen::VectorXd r = d.apply(sample(g, [&](double x) { return std::pow(x, kappa); }));
      const double c = std::tgamma(kappa + 1.0) / std::tgamma(kappa - beta + 1.0);
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.nodes[i];
        if (x < 0.1 || x > 0.9) continue;  // away from endpoints
        CHECK(std::abs(r[i] - c * std::pow(x, kappa - beta)) <= 1e-5);
      }
    }
  }
}

TEST_CASE("adjointness of left and right integrals under the grid inner product") {
  const auto g = make_grid(GridScheme::legendre, 256);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int rep = 0; rep < 8; ++rep) {
    double c0 = coef(rng), c1 = coef(rng), c2 = coef(rng), c3 = coef(rng);
    double d0 = coef(rng), d1 = coef(rng), d2 = coef(rng);
    const auto phi = sample(g, [&](double x) { return c0 + c1 * x + c2 * x * x + c3 * x * x * x; });
    const auto psi = sample(g, [&](double x) { return d0 + d1 * x + d2 * x * x * x * x; });
    for (double beta : {0.3, 0.7, 1.4}) {
      const auto il = rl_integral(beta, Side::left, g);
      const auto ir = rl_integral(beta, Side::right, g);
      const double lhs = il.inner(phi, il.apply(psi));
      const double rhs = il.inner(ir.apply(phi), psi);
      CHECK(std::abs(lhs - rhs) <= 1e-8 * phi.norm() * psi.norm());
    }
  }
}

TEST_CASE("algebraic adjoint matches the mirrored operator") {
  const auto g = make_grid(GridScheme::legendre, 128);
  const auto il = rl_integral(0.6, Side::left, g);
  const auto ir = rl_integral(0.6, Side::right, g);
  const auto phi = sample(g, [](double x) { return x * (1.0 - x); });
  const Eigen::VectorXd via_adjoint = il.adjoint().apply(phi);
  const Eigen::VectorXd via_mirror = ir.apply(phi);
  CHECK((via_adjoint - via_mirror).cwiseAbs().maxCoeff() <= 1e-7);
}

TEST_CASE("semigroup property of fractional integrals") {
  const auto g = make_grid(GridScheme::legendre, 128);
  const auto i1 = rl_integral(0.3, Side::left, g);
  const auto i2 = rl_integral(0.9, Side::left, g);
  const auto i12 = rl_integral(1.2, Side::left, g);
  const auto f = sample(g, [](double x) { return std::sin(3.0 * x) + 1.0; });
  CHECK((i1.apply(i2.apply(f)) - i12.apply(f)).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("caputo-fabrizio operators") {
  const auto g = make_grid(GridScheme::legendre, 256);
  SUBCASE("derivative of a constant is (1-beta) c") {
    for (double beta : {0.2, 0.5, 0.8}) {
      const auto d = cf_derivative(beta, Side::left, g);
      const Eigen::VectorXd r = d.apply(sample(g, [](double) { return 3.0; }));
      for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(r[i] == doctest::Approx(3.0 * (1.0 - beta)).epsilon(1e-9));
    }
  }
  SUBCASE("D I = id on sin(3x), max error <= 1e-6 at N=256") {
    for (double beta : {0.3, 0.7}) {
      const auto integ = cf_integral(beta, Side::left, g);
      const auto deriv = cf_derivative(beta, Side::left, g);
      const auto f = sample(g, [](double x) { return std::sin(3.0 * x); });
      CHECK((deriv.apply(integ.apply(f)) - f).cwiseAbs().maxCoeff() <= 1e-6);
      const auto integ_r = cf_integral(beta, Side::right, g);
      const auto deriv_r = cf_derivative(beta, Side::right, g);
      CHECK((deriv_r.apply(integ_r.apply(f)) - f).cwiseAbs().maxCoeff() <= 1e-6);
    }
  }
  SUBCASE("integral with beta -> 1 approaches the ordinary integral") {
    const auto integ = cf_integral(1.0 - 1e-9, Side::left, g);
    const Eigen::VectorXd r = integ.apply(sample(g, [](double) { return 1.0; }));
    for (std::size_t i = 0; i < g.size(); ++i)
      CHECK(r[i] == doctest::Approx(g.nodes[i]).epsilon(1e-6));
  }
  CHECK_THROWS_AS(cf_integral(1.0, Side::left, g), std::domain_error);
  CHECK_THROWS_AS(cf_derivative(0.0, Side::left, g), std::domain_error);
}

TEST_CASE("kernel_K: representation identity and adjoint action") {
  const double alpha = 0.5;
  const int n = 256;
  const auto g = make_grid(GridScheme::jacobi, n, -alpha / 2.0, -alpha / 2.0);
  const auto k = kernel_K(alpha, g);
  const double fac = M_PI / (std::tgamma(1.0 - alpha) * std::sin(M_PI * alpha / 2.0));

  SUBCASE("pointwise representation identity via singularity-split quadrature") {
    // (K K*)(t1,t2) = t2^{a/2} / Gamma(a/2)^2
    //                 * int_0^1 v^{-a} (1-v)^{a/2-1} (t2 - t1 v)^{a/2-1} dv,  t1 <= t2
    std::vector<double> vn, vw;
    gauss_jacobi_01(n, -alpha, alpha / 2.0 - 1.0, vn, vw);
    auto kk_direct = [&](double t1, double t2) {
      if (t1 > t2) std::swap(t1, t2);
      double acc = 0.0;
      for (int m = 0; m < n; ++m) acc += vw[m] * std::pow(t2 - t1 * vn[m], alpha / 2.0 - 1.0);
      const double gam = std::tgamma(alpha / 2.0);
      return std::pow(t2, alpha / 2.0) * acc / (gam * gam);
    };
    for (double t1 : {0.15, 0.3, 0.55}) {
      for (double t2 : {0.45, 0.7, 0.9}) {
        const double target = std::pow(std::abs(t1 - t2), alpha - 1.0);
        CHECK(fac * kk_direct(t1, t2) == doctest::Approx(target).epsilon(1e-3));
      }
    }
  }

  SUBCASE("matrix K K* acts like the |dtau|^{alpha-1} convolution on smooth probes") {
    const auto kks = k.compose(k.adjoint());
    const auto phi = sample(g, [](double t) { return 1.0 + t - t * t + 0.3 * std::sin(3.0 * t); });
    const Eigen::VectorXd got = fac * kks.apply(phi);
    std::vector<double> xn, xw;
    gauss_jacobi_01(200, alpha - 1.0, 0.0, xn, xw);
    auto probe = [](double s) { return 1.0 + s - s * s + 0.3 * std::sin(3.0 * s); };
    for (std::size_t i = 0; i < g.size(); i += 7) {
      const double tau = g.nodes[i];
      if (tau < 0.1 || tau > 0.9) continue;
      double want = 0.0;
      for (int m = 0; m < 200; ++m) {
        want += std::pow(tau, alpha) * xw[m] * probe(tau * (1.0 - xn[m]));
        want += std::pow(1.0 - tau, alpha) * xw[m] * probe(tau + (1.0 - tau) * xn[m]);
      }
      CHECK(got[i] == doctest::Approx(want).epsilon(2e-3));
    }
  }

  SUBCASE("K* applied to the optimal beta shape is proportional to tau^{-a/2}") {
    const double b_norm = beta_fn(1.0 - alpha / 2.0, 1.0 - alpha / 2.0);
    const auto s =
        sample(g, [&](double t) { return std::pow(t * (1.0 - t), -alpha / 2.0) / b_norm; });
    const Eigen::VectorXd m = k.adjoint().apply(s);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double t = g.nodes[i];
      if (t < 0.02 || t > 0.6 || m[i] <= 0.0) continue;
      const double lx = std::log(t), ly = std::log(m[i]);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++cnt;
    }
    const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    CHECK(std::abs(slope + alpha / 2.0) <= 0.02);
  }

  SUBCASE("K annihilates zero") {
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(g.size());
    CHECK(k.apply(zero).cwiseAbs().maxCoeff() == 0.0);
  }

  CHECK_THROWS_AS(kernel_K(1.2, g), std::domain_error);
  CHECK_THROWS_AS(kernel_K(0.0, g), std::domain_error);
}

TEST_CASE("kernel_K_fbm identity and diagonal") {
  const double alpha = 1.4;
  const int n = 256;
  const auto g = make_grid(GridScheme::legendre, n);
  const auto k = kernel_K_fbm(alpha, g);
  const Eigen::MatrixXd gram = kernel_gram(k);
  const double fac =
      M_PI * (alpha - 1.0) / (std::tgamma(2.0 - alpha) * std::sin(M_PI * alpha / 2.0));

  SUBCASE("identity at (0.3, 0.7) within 1e-2 relative") {
    std::size_t i3 = 0, i7 = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (std::abs(g.nodes[i] - 0.3) < std::abs(g.nodes[i3] - 0.3)) i3 = i;
      if (std::abs(g.nodes[i] - 0.7) < std::abs(g.nodes[i7] - 0.7)) i7 = i;
    }
    const double t1 = g.nodes[i3], t2 = g.nodes[i7];
    const double target = std::pow(t1, alpha - 1.0) + std::pow(t2, alpha - 1.0) -
                          std::pow(std::abs(t1 - t2), alpha - 1.0);
    CHECK(fac * gram(i3, i7) == doctest::Approx(target).epsilon(1e-2));
  }

  SUBCASE("diagonal reconstructs 2 tau^{alpha-1} (slowly, across the kink)") {
    for (std::size_t i = 0; i < g.size(); i += 16) {
      const double tau = g.nodes[i];
      if (tau < 0.3 || tau > 0.9) continue;
      CHECK(fac * gram(i, i) == doctest::Approx(2.0 * std::pow(tau, alpha - 1.0)).epsilon(5e-2));
    }
  }

  SUBCASE("annihilates zero") {
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(g.size());
    CHECK(k.apply(zero).cwiseAbs().maxCoeff() == 0.0);
  }

  CHECK_THROWS_AS(kernel_K_fbm(0.9, g), std::domain_error);
  CHECK_THROWS_AS(kernel_K_fbm(2.0, g), std::domain_error);
}

TEST_CASE("gram matrices of K and K_fbm are symmetric positive semidefinite") {
  for (int which = 0; which < 2; ++which) {
    const auto g = which == 0 ? make_grid(GridScheme::jacobi, 96, -0.25, -0.25)
                              : make_grid(GridScheme::legendre, 96);
    const auto k = which == 0 ? kernel_K(0.5, g) : kernel_K_fbm(1.4, g);
    const Eigen::MatrixXd gram = kernel_gram(k);
    CHECK((gram - gram.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * gram.cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (gram + gram.transpose()));
    const double min_e = es.eigenvalues().minCoeff();
    const double max_e = es.eigenvalues().maxCoeff();
    CHECK(min_e >= -1e-10 * max_e);
  }
}

TEST_CASE("regularized inverse") {
  const auto g = make_grid(GridScheme::legendre, 128);
  SUBCASE("inverse of the identity is the identity") {
    GridOperator id(g, Eigen::MatrixXd::Identity(g.size(), g.size()), OperatorKind::multiplier,
                    0.0);
    const auto inv = regularized_inverse(id, 0.0);
    CHECK((inv.matrix() - Eigen::MatrixXd::Identity(g.size(), g.size())).cwiseAbs().maxCoeff() <=
          1e-12);
  }
  SUBCASE("inverse of forward recovers a smooth function to 1e-4") {
    const auto integ = rl_integral(0.5, Side::left, g);
    const auto inv = regularized_inverse(integ, 1e-10);
    const auto f = sample(g, [](double x) { return std::cos(2.0 * x); });
    CHECK((inv.apply(integ.apply(f)) - f).cwiseAbs().maxCoeff() <= 1e-4);
  }
  SUBCASE("huge regularization drives the output to zero") {
    const auto integ = rl_integral(0.5, Side::left, g);
    const auto inv = regularized_inverse(integ, 1e12);
    const auto f = sample(g, [](double) { return 1.0; });
    CHECK(inv.apply(f).cwiseAbs().maxCoeff() <= 1e-10);
  }
  SUBCASE("singular matrix with lambda = 0 is rejected") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(g.size(), g.size());
    m(0, 0) = 1.0;
    GridOperator op(g, m, OperatorKind::composite, 0.0);
    CHECK_THROWS_AS(regularized_inverse(op, 0.0), std::runtime_error);
  }
}

TEST_CASE("multiplier operators are diagonal") {
  const auto g = make_grid(GridScheme::legendre, 32);
  const auto m = multiplier_power(0.7, g);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j)
      if (i != j) CHECK(m.matrix()(i, j) == 0.0);
  CHECK(m.matrix()(5, 5) == doctest::Approx(std::pow(g.nodes[5], 0.7)));
}
