#pragma once

#include <Eigen/Dense>

#include <string>

#include "fracpulse/quadrature.hpp"

namespace fracpulse {

enum class Side { left, right };

enum class OperatorKind {
  rl_left_integral,
  rl_right_integral,
  rl_left_derivative,
  rl_right_derivative,
  cf_left_integral,
  cf_right_integral,
  cf_left_derivative,
  cf_right_derivative,
  multiplier,
  composite,
};

/// Dense matrix representation of an integral/differential operator acting on
/// function samples over a QuadratureGrid. Matrices are assembled by exact
/// integration of the operator kernel against the polynomial interpolant of
/// the operand (interpolate, then integrate elementwise in closed form or
/// with a Gauss rule matched to the kernel weight), so the action is exact on
/// polynomials up to the grid degree. Immutable after assembly.
class GridOperator {
 public:
  GridOperator(QuadratureGrid grid, Eigen::MatrixXd m, OperatorKind kind, double order);

  const Eigen::MatrixXd& matrix() const { return mat_; }
  const QuadratureGrid& grid() const { return grid_; }
  OperatorKind kind() const { return kind_; }
  double order() const { return order_; }
  Eigen::Index size() const { return mat_.rows(); }

  Eigen::VectorXd apply(const Eigen::VectorXd& f) const { return mat_ * f; }
  std::vector<double> apply(const std::vector<double>& f) const;

  /// Adjoint under the grid inner product <f,g> = sum_i pw_i f_i g_i with the
  /// plain-measure weights, i.e. the discrete counterpart of the L2 adjoint.
  GridOperator adjoint() const;

  /// this o inner (matrix product); both operators must share the grid size.
  GridOperator compose(const GridOperator& inner) const;

  /// Grid inner product of two nodal vectors (plain measure).
  double inner(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const;

 private:
  QuadratureGrid grid_;
  Eigen::VectorXd plain_w_;
  Eigen::MatrixXd mat_;
  OperatorKind kind_;
  double order_;
};

/// Riemann-Liouville fractional integral of order beta in (0,2].
GridOperator rl_integral(double beta, Side side, const QuadratureGrid& grid);

/// Riemann-Liouville fractional derivative of order beta in (0,1), realized
/// as spectral differentiation of the order-(1-beta) integral.
///
/// operand_exponent selects the representation space x^w * P (mirrored
/// (1-x)^w on the right) on which the inner integral is exact; nodal samples
/// are divided by the weight before interpolation, so endpoint-singular
/// operands of that class are handled without sampling infinities. The
/// default w = beta makes D^beta I^beta the identity on polynomials; pass the
/// operand's own endpoint exponent when differentiating x^kappa-type data.
GridOperator rl_derivative(double beta, Side side, const QuadratureGrid& grid,
                           double operand_exponent);
GridOperator rl_derivative(double beta, Side side, const QuadratureGrid& grid);

/// Caputo-Fabrizio fractional integral / derivative, beta in (0,1). The
/// derivative is beta d/dx + (1-beta), sign-flipped on the right side.
GridOperator cf_integral(double beta, Side side, const QuadratureGrid& grid);
GridOperator cf_derivative(double beta, Side side, const QuadratureGrid& grid);

/// Caputo-Fabrizio integral of a weighted operand: the returned matrix maps
/// nodal samples of the regular factor g to I^beta[s^{pw} (1-s)^{qw} g], with
/// the weight integrated in closed form against the Gauss rule. Used when the
/// operand carries endpoint singularities (e.g. beta-distribution shapes)
/// that polynomial interpolation of raw samples would destroy.
GridOperator cf_integral_weighted(double beta, Side side, const QuadratureGrid& grid, double pw,
                                  double qw);

/// Diagonal multiplier operator f(tau) -> tau^c f(tau).
GridOperator multiplier_power(double c, const QuadratureGrid& grid);

/// Kernel operator K = tau^{a/2} 0I^{a/2} tau^{-a/2}, alpha in (0,1).
/// K K* represents |tau1-tau2|^{alpha-1} up to the factor
/// Gamma(1-alpha) sin(pi alpha/2) / pi. Assembled as a single fused kernel so
/// the inner multiplier singularity never appears in sampled data.
GridOperator kernel_K(double alpha, const QuadratureGrid& grid);

/// Kernel operator K_FBM = 0I^{alpha-1} tau^{1-alpha/2} 0I^{1-alpha/2} tau^{alpha/2-1},
/// alpha in (1,2). K_FBM K_FBM* represents tau1^{a-1}+tau2^{a-1}-|dtau|^{a-1}
/// up to Gamma(2-alpha) sin(pi alpha/2) / (pi (alpha-1)).
GridOperator kernel_K_fbm(double alpha, const QuadratureGrid& grid);

/// Weighted composite htilde -> K K*[ (s(1-s))^{-alpha/2} htilde ], fused so
/// every stage maps smooth samples to smooth samples:
///   K*[w htilde](x) = x^{-a/2} q(x),
///   q(x) = 1/Gamma(a/2) int_0^1 u^{a/2-1} (1-u)^{-a/2} htilde(x+(1-x)u) du,
///   K[x^{-a/2} q](x) = 1/Gamma(a/2) int_0^1 u^{-a} (1-u)^{a/2-1} q(x u) du.
/// The fixed-point solver inverts this instead of the raw K K* matrix so the
/// regularized solve never has to represent endpoint-singular iterates.
GridOperator kernel_KKstar_weighted(double alpha, const QuadratureGrid& grid);

/// Tikhonov-regularized inverse (A*A + lambda I)^{-1} A* under the grid inner
/// product. lambda_reg < 0 selects the default 1e-10 * sigma_max(A)^2.
GridOperator regularized_inverse(const GridOperator& op, double lambda_reg = -1.0);

/// Spectral differentiation matrix (barycentric form) on the grid nodes.
Eigen::MatrixXd differentiation_matrix(const QuadratureGrid& grid);

/// Reconstruction of the kernel values (K K*)(tau_i, tau_j) from the matrix:
/// A W^{-1} A^T with the plain-measure weights. Symmetric PSD by construction.
Eigen::MatrixXd kernel_gram(const GridOperator& k);

}  // namespace fracpulse
