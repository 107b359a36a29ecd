#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace fracpulse {

enum class GridScheme { legendre, jacobi, uniform };

/// Quadrature grid on (0,1). All nodes are strictly interior and increasing.
///
/// For the jacobi scheme the weights absorb the endpoint factor, i.e.
///   sum_i w_i f(tau_i)  ~  int_0^1 tau^p (1-tau)^q f(tau) dtau,
/// so samples of functions that are singular like tau^{-p} at the endpoints
/// stay finite. legendre and uniform integrate against the plain measure.
struct QuadratureGrid {
  GridScheme scheme = GridScheme::legendre;
  double p = 0.0;  // jacobi exponent at tau = 0
  double q = 0.0;  // jacobi exponent at tau = 1
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }

  /// Plain-measure weights: sum_i plain_weights()[i] f(tau_i) ~ int_0^1 f dtau.
  /// For jacobi grids this rule is exact on tau^p (1-tau)^q * polynomial,
  /// which is how endpoint-singular operands are integrated here.
  std::vector<double> plain_weights() const;

  std::string scheme_tag() const;
};

/// n >= 2; p, q > -1 for the jacobi scheme (ignored otherwise).
QuadratureGrid make_grid(GridScheme scheme, int n, double p = 0.0, double q = 0.0);

/// Gauss-Legendre rule on [0,1] (plain measure). Newton iteration on P_n.
void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w);

/// Gauss-Jacobi rule on [0,1] for the weight tau^p (1-tau)^q, via the
/// Golub-Welsch eigenvalue method.
void gauss_jacobi_01(int n, double p, double q, std::vector<double>& x, std::vector<double>& w);

/// Normalized barycentric interpolation weights for an increasing node set.
/// Computed in log space so large n does not overflow.
std::vector<double> barycentric_weights(const std::vector<double>& nodes);

/// Evaluate the Lagrange basis {l_j(y)} for the given nodes at point y.
/// `bary` must come from barycentric_weights(nodes). Writes into out (size n).
void lagrange_basis_at(const std::vector<double>& nodes, const std::vector<double>& bary,
                       double y, std::vector<double>& out);

/// Evaluate the polynomial interpolant of (nodes, values) at y.
double barycentric_interpolate(const std::vector<double>& nodes, const std::vector<double>& bary,
                               const std::vector<double>& values, double y);

/// Tanh-sinh (double exponential) quadrature on (a,b). Robust for integrable
/// endpoint singularities; abscissa offsets from the endpoints are computed
/// in exponential form so evaluation points never collapse onto a or b.
double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12, int max_level = 12);

/// int_a^b (x-a)^{pa} (b-x)^{pb} g(x) dx with g regular. The endpoint powers
/// are applied to the exact abscissa offset, so exponents may approach -1
/// without the usual loss of the singular tail to rounding.
double tanh_sinh_weighted(const std::function<double(double)>& g, double a, double b, double pa,
                          double pb, double rel_tol = 1e-12, int max_level = 12);

}  // namespace fracpulse
