#include "fracpulse/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracpulse {

namespace {

// Gauss-Jacobi on [-1,1] with weight (1-x)^a (1+x)^b, Golub-Welsch.
void gauss_jacobi_m11(int n, double a, double b, std::vector<double>& x, std::vector<double>& w) {
  Eigen::VectorXd diag(n), sub(std::max(n - 1, 0));
  const double ab = a + b;
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + ab;
    if (k == 0) {
      diag[0] = (b - a) / (ab + 2.0);
    } else {
      diag[k] = (b * b - a * a) / (s * (s + 2.0));
    }
  }
  for (int k = 1; k < n; ++k) {
    double beta_k;
    if (k == 1) {
      beta_k = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      const double s = 2.0 * k + ab;
      beta_k = 4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    sub[k - 1] = std::sqrt(beta_k);
  }
  // total weight int (1-x)^a (1+x)^b dx = 2^{a+b+1} B(a+1, b+1)
  const double log_beta0 = (ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) +
                           std::lgamma(b + 1.0) - std::lgamma(ab + 2.0);
  const double beta0 = std::exp(log_beta0);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  x.resize(n);
  w.resize(n);
  for (int k = 0; k < n; ++k) {
    x[k] = es.eigenvalues()[k];
    const double v0 = es.eigenvectors()(0, k);
    w[k] = beta0 * v0 * v0;
  }
}

double legendre_value_and_derivative(int n, double x, double& dp) {
  // Recurrence for P_n on [-1,1].
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  dp = n * (x * p1 - p0) / (x * x - 1.0);
  return p1;
}

}  // namespace

void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-based initial guess, then Newton.
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double p = legendre_value_and_derivative(n, z, dp);
      const double dz = p / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    legendre_value_and_derivative(n, z, dp);
    const double wi = 2.0 / ((1.0 - z * z) * dp * dp);
    // map [-1,1] -> [0,1]; nodes ascending
    x[i] = 0.5 * (1.0 - z);
    x[n - 1 - i] = 0.5 * (1.0 + z);
    w[i] = 0.5 * wi;
    w[n - 1 - i] = 0.5 * wi;
  }
}

void gauss_jacobi_01(int n, double p, double q, std::vector<double>& x, std::vector<double>& w) {
  if (p <= -1.0 || q <= -1.0) throw std::invalid_argument("gauss_jacobi_01: exponents must be > -1");
  // int_0^1 tau^p (1-tau)^q f dtau with tau = (1+x)/2 maps to weight
  // (1-x)^q (1+x)^p on [-1,1], scaled by 2^{-p-q-1}.
  std::vector<double> xm, wm;
  gauss_jacobi_m11(n, q, p, xm, wm);
  x.resize(n);
  w.resize(n);
  const double scale = std::exp2(-(p + q + 1.0));
  for (int k = 0; k < n; ++k) {
    x[k] = 0.5 * (1.0 + xm[k]);
    w[k] = scale * wm[k];
  }
}

QuadratureGrid make_grid(GridScheme scheme, int n, double p, double q) {
  if (n < 2) throw std::invalid_argument("make_grid: need at least 2 nodes");
  QuadratureGrid g;
  g.scheme = scheme;
  switch (scheme) {
    case GridScheme::legendre:
      gauss_legendre_01(n, g.nodes, g.weights);
      break;
    case GridScheme::jacobi:
      if (p <= -1.0 || q <= -1.0)
        throw std::invalid_argument("make_grid: jacobi exponents must be > -1");
      g.p = p;
      g.q = q;
      gauss_jacobi_01(n, p, q, g.nodes, g.weights);
      break;
    case GridScheme::uniform:
      // Midpoint-offset uniform rule: nodes stay strictly interior and the
      // rule is exact on linear functions.
      g.nodes.resize(n);
      g.weights.assign(n, 1.0 / n);
      for (int i = 0; i < n; ++i) g.nodes[i] = (i + 0.5) / n;
      break;
  }
  return g;
}

std::vector<double> QuadratureGrid::plain_weights() const {
  std::vector<double> w = weights;
  if (scheme == GridScheme::jacobi) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      w[i] *= std::pow(nodes[i], -p) * std::pow(1.0 - nodes[i], -q);
    }
  }
  return w;
}

std::string QuadratureGrid::scheme_tag() const {
  switch (scheme) {
    case GridScheme::legendre: return "legendre";
    case GridScheme::jacobi: return "jacobi(" + std::to_string(p) + "," + std::to_string(q) + ")";
    case GridScheme::uniform: return "uniform";
  }
  return "?";
}

std::vector<double> barycentric_weights(const std::vector<double>& nodes) {
  const std::size_t n = nodes.size();
  std::vector<double> logw(n, 0.0);
  std::vector<double> sign(n, 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == j) continue;
      s -= std::log(std::abs(nodes[j] - nodes[k]));
    }
    logw[j] = s;
    // nodes ascending: sign of prod (x_j - x_k) is (-1)^{n-1-j}
    sign[j] = ((n - 1 - j) % 2 == 0) ? 1.0 : -1.0;
  }
  const double m = *std::max_element(logw.begin(), logw.end());
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = sign[j] * std::exp(logw[j] - m);
  return w;
}

void lagrange_basis_at(const std::vector<double>& nodes, const std::vector<double>& bary,
                       double y, std::vector<double>& out) {
  const std::size_t n = nodes.size();
  out.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (y == nodes[j]) {
      out[j] = 1.0;
      return;
    }
  }
  double denom = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = bary[j] / (y - nodes[j]);
    denom += out[j];
  }
  for (std::size_t j = 0; j < n; ++j) out[j] /= denom;
}

double barycentric_interpolate(const std::vector<double>& nodes, const std::vector<double>& bary,
                               const std::vector<double>& values, double y) {
  const std::size_t n = nodes.size();
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double d = y - nodes[j];
    if (d == 0.0) return values[j];
    const double c = bary[j] / d;
    num += c * values[j];
    den += c;
  }
  return num / den;
}

namespace {

// Shared tanh-sinh driver. `term(off, left)` returns weightless integrand
// value at distance `off` from the interval's left (or right) endpoint.
double tanh_sinh_driver(const std::function<double(double, bool)>& term, double length,
                        double center_value, double rel_tol, int max_level) {
  const double half = 0.5 * length;
  const double t_max = 6.8;

  auto eval_pair = [&](double t) -> double {
    const double s = M_PI_2 * std::sinh(t);
    const double cs = std::cosh(t);
    const double sech = 1.0 / std::cosh(s);
    const double w = M_PI_2 * cs * sech * sech;  // d tanh(s)/dt
    if (w < 1e-300) return 0.0;
    const double off = half * 2.0 / (std::exp(2.0 * s) + 1.0);  // half*(1 - tanh(s))
    if (off < 1e-305) return 0.0;
    double acc = 0.0;
    const double fl = term(off, true);
    const double fr = term(off, false);
    if (std::isfinite(fl)) acc += w * fl;
    if (std::isfinite(fr)) acc += w * fr;
    return acc;
  };

  double h = 1.0;
  double sum = std::isfinite(center_value) ? M_PI_2 * center_value : 0.0;  // t = 0 term
  for (double t = h; t <= t_max; t += h) sum += eval_pair(t);
  double integral = half * h * sum;

  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    double add = 0.0;
    for (double t = h; t <= t_max; t += 2.0 * h) add += eval_pair(t);
    sum = sum + add;
    const double next = half * h * sum;
    if (level >= 3 && std::abs(next - integral) <= rel_tol * std::abs(next)) {
      return next;
    }
    integral = next;
  }
  return integral;
}

}  // namespace

double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, int max_level) {
  auto term = [&](double off, bool left) { return left ? f(a + off) : f(b - off); };
  return tanh_sinh_driver(term, b - a, f(0.5 * (a + b)), rel_tol, max_level);
}

double tanh_sinh_weighted(const std::function<double(double)>& g, double a, double b, double pa,
                          double pb, double rel_tol, int max_level) {
  const double len = b - a;
  auto term = [&](double off, bool left) {
    if (left) {
      // (x-a) = off exactly; (b-x) = len - off
      return std::pow(off, pa) * std::pow(len - off, pb) * g(a + off);
    }
    return std::pow(len - off, pa) * std::pow(off, pb) * g(b - off);
  };
  const double center =
      std::pow(0.5 * len, pa + pb) * g(0.5 * (a + b));
  return tanh_sinh_driver(term, len, center, rel_tol, max_level);
}

}  // namespace fracpulse
