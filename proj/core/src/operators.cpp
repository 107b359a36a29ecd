#include "fracpulse/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace fracpulse {

namespace {

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Assemble rows of an operator of the form
//   (A f)(x_i) = c(x_i) * int_0^1 w(u) f(phi(x_i, u)) du
// where the u-integral uses the supplied Gauss rule (exact for polynomial f)
// and phi maps into [0,1]. f is represented by its polynomial interpolant.
Eigen::MatrixXd assemble_scaled_rows(const QuadratureGrid& grid,
                                     const std::vector<double>& u_nodes,
                                     const std::vector<double>& u_weights,
                                     const std::function<double(double)>& row_scale,
                                     const std::function<double(double, double)>& point) {
  const auto& x = grid.nodes;
  const int n = static_cast<int>(x.size());
  const int m = static_cast<int>(u_nodes.size());
  const std::vector<double> bary = barycentric_weights(x);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  std::vector<double> basis(n);
  for (int i = 0; i < n; ++i) {
    const double scale = row_scale(x[i]);
    for (int k = 0; k < m; ++k) {
      const double y = point(x[i], u_nodes[k]);
      lagrange_basis_at(x, bary, y, basis);
      const double c = scale * u_weights[k];
      for (int j = 0; j < n; ++j) a(i, j) += c * basis[j];
    }
  }
  return a;
}

int rule_size(const QuadratureGrid& grid) {
  // Exactness on the full interpolant needs ceil(n/2) Gauss points; a little
  // headroom costs nothing.
  return static_cast<int>(grid.size()) / 2 + 4;
}

}  // namespace

GridOperator::GridOperator(QuadratureGrid grid, Eigen::MatrixXd m, OperatorKind kind, double order)
    : grid_(std::move(grid)), mat_(std::move(m)), kind_(kind), order_(order) {
  plain_w_ = to_eigen(grid_.plain_weights());
}

std::vector<double> GridOperator::apply(const std::vector<double>& f) const {
  Eigen::VectorXd r = mat_ * to_eigen(f);
  return std::vector<double>(r.data(), r.data() + r.size());
}

GridOperator GridOperator::adjoint() const {
  Eigen::MatrixXd at = plain_w_.cwiseInverse().asDiagonal() * mat_.transpose() *
                       plain_w_.asDiagonal();
  OperatorKind k = kind_;
  switch (kind_) {
    case OperatorKind::rl_left_integral: k = OperatorKind::rl_right_integral; break;
    case OperatorKind::rl_right_integral: k = OperatorKind::rl_left_integral; break;
    case OperatorKind::cf_left_integral: k = OperatorKind::cf_right_integral; break;
    case OperatorKind::cf_right_integral: k = OperatorKind::cf_left_integral; break;
    case OperatorKind::multiplier: break;
    default: k = OperatorKind::composite; break;
  }
  return GridOperator(grid_, std::move(at), k, order_);
}

GridOperator GridOperator::compose(const GridOperator& inner) const {
  if (inner.size() != size()) throw std::invalid_argument("compose: grid size mismatch");
  return GridOperator(grid_, mat_ * inner.mat_, OperatorKind::composite, order_ + inner.order_);
}

double GridOperator::inner(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const {
  return (f.array() * plain_w_.array() * g.array()).sum();
}

GridOperator rl_integral(double beta, Side side, const QuadratureGrid& grid) {
  if (!(beta > 0.0) || beta > 2.0) throw std::domain_error("rl_integral: beta must be in (0,2]");
  const double inv_gamma = 1.0 / std::tgamma(beta);
  std::vector<double> un, uw;
  gauss_jacobi_01(rule_size(grid), side == Side::left ? 0.0 : beta - 1.0,
                  side == Side::left ? beta - 1.0 : 0.0, un, uw);
  Eigen::MatrixXd a;
  if (side == Side::left) {
    // (I^b f)(x) = x^b/Gamma(b) * int_0^1 (1-u)^{b-1} f(x u) du
    a = assemble_scaled_rows(
        grid, un, uw, [&](double x) { return inv_gamma * std::pow(x, beta); },
        [](double x, double u) { return x * u; });
  } else {
    // (I_1^b f)(x) = (1-x)^b/Gamma(b) * int_0^1 u^{b-1} f(x + (1-x) u) du
    a = assemble_scaled_rows(
        grid, un, uw, [&](double x) { return inv_gamma * std::pow(1.0 - x, beta); },
        [](double x, double u) { return x + (1.0 - x) * u; });
  }
  return GridOperator(grid, std::move(a),
                      side == Side::left ? OperatorKind::rl_left_integral
                                         : OperatorKind::rl_right_integral,
                      beta);
}

GridOperator rl_derivative(double beta, Side side, const QuadratureGrid& grid,
                           double operand_exponent) {
  if (!(beta > 0.0) || !(beta < 1.0)) throw std::domain_error("rl_derivative: beta must be in (0,1)");
  const double w = operand_exponent;
  if (w <= -1.0) throw std::domain_error("rl_derivative: operand exponent must be > -1");
  // d/dx (resp. -d/dx) of the order-(1-beta) integral, with the inner
  // integral exact on the weighted space x^w * P:
  //   I^{1-b}[s^w g](x) = x^{1+w-b}/Gamma(1-b) int_0^1 u^w (1-u)^{-b} g(x u) du.
  const double inv_gamma = 1.0 / std::tgamma(1.0 - beta);
  const auto& xs = grid.nodes;
  const int n = static_cast<int>(xs.size());
  std::vector<double> un, uw;
  Eigen::MatrixXd m;
  if (side == Side::left) {
    gauss_jacobi_01(rule_size(grid), w, -beta, un, uw);
    m = assemble_scaled_rows(
        grid, un, uw, [&](double x) { return inv_gamma * std::pow(x, 1.0 + w - beta); },
        [](double x, double u) { return x * u; });
    for (int j = 0; j < n; ++j) m.col(j) *= std::pow(xs[j], -w);
  } else {
    gauss_jacobi_01(rule_size(grid), -beta, w, un, uw);
    m = assemble_scaled_rows(
        grid, un, uw, [&](double x) { return inv_gamma * std::pow(1.0 - x, 1.0 + w - beta); },
        [](double x, double u) { return x + (1.0 - x) * u; });
    for (int j = 0; j < n; ++j) m.col(j) *= std::pow(1.0 - xs[j], -w);
  }
  Eigen::MatrixXd d = differentiation_matrix(grid);
  Eigen::MatrixXd a = (side == Side::left ? 1.0 : -1.0) * (d * m);
  return GridOperator(grid, std::move(a),
                      side == Side::left ? OperatorKind::rl_left_derivative
                                         : OperatorKind::rl_right_derivative,
                      beta);
}

GridOperator rl_derivative(double beta, Side side, const QuadratureGrid& grid) {
  return rl_derivative(beta, side, grid, beta);
}

GridOperator cf_integral(double beta, Side side, const QuadratureGrid& grid) {
  if (!(beta > 0.0) || !(beta < 1.0)) throw std::domain_error("cf_integral: beta must be in (0,1)");
  const double mu = (1.0 - beta) / beta;
  // Enough Gauss points for the polynomial interpolant times e^{-mu * span}.
  const int m = rule_size(grid) + 8 + static_cast<int>(std::ceil(0.5 * mu));
  std::vector<double> un, uw;
  gauss_legendre_01(m, un, uw);
  Eigen::MatrixXd a;
  if (side == Side::left) {
    // (If)(x) = x/beta * int_0^1 e^{-mu x (1-u)} f(x u) du
    const auto scale = [&](double x) { return x / beta; };
    const auto& xs = grid.nodes;
    a = Eigen::MatrixXd::Zero(grid.size(), grid.size());
    const std::vector<double> bary = barycentric_weights(xs);
    std::vector<double> basis(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (int k = 0; k < m; ++k) {
        const double w = uw[k] * std::exp(-mu * xs[i] * (1.0 - un[k])) * scale(xs[i]);
        lagrange_basis_at(xs, bary, xs[i] * un[k], basis);
        for (std::size_t j = 0; j < grid.size(); ++j) a(i, j) += w * basis[j];
      }
    }
  } else {
    // (I_1 f)(x) = (1-x)/beta * int_0^1 e^{-mu (1-x) u} f(x + (1-x) u) du
    const auto& xs = grid.nodes;
    a = Eigen::MatrixXd::Zero(grid.size(), grid.size());
    const std::vector<double> bary = barycentric_weights(xs);
    std::vector<double> basis(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (int k = 0; k < m; ++k) {
        const double w = uw[k] * std::exp(-mu * (1.0 - xs[i]) * un[k]) * (1.0 - xs[i]) / beta;
        lagrange_basis_at(xs, bary, xs[i] + (1.0 - xs[i]) * un[k], basis);
        for (std::size_t j = 0; j < grid.size(); ++j) a(i, j) += w * basis[j];
      }
    }
  }
  return GridOperator(grid, std::move(a),
                      side == Side::left ? OperatorKind::cf_left_integral
                                         : OperatorKind::cf_right_integral,
                      beta);
}

GridOperator cf_integral_weighted(double beta, Side side, const QuadratureGrid& grid, double pw,
                                  double qw) {
  if (!(beta > 0.0) || !(beta < 1.0))
    throw std::domain_error("cf_integral_weighted: beta must be in (0,1)");
  if (pw <= -1.0 || qw <= -1.0)
    throw std::domain_error("cf_integral_weighted: weight exponents must be > -1");
  const double mu = (1.0 - beta) / beta;
  const int m = rule_size(grid) + 8 + static_cast<int>(std::ceil(0.5 * mu));
  const auto& xs = grid.nodes;
  const int n = static_cast<int>(xs.size());
  const std::vector<double> bary = barycentric_weights(xs);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  std::vector<double> un, uw, basis(n);
  if (side == Side::left) {
    // (I [w g])(x) = x^{1+pw}/beta int_0^1 u^{pw} e^{-mu x (1-u)} (1-x u)^{qw} g(x u) du
    gauss_jacobi_01(m, pw, 0.0, un, uw);
    for (int i = 0; i < n; ++i) {
      const double x = xs[i];
      const double scale = std::pow(x, 1.0 + pw) / beta;
      for (int k = 0; k < m; ++k) {
        const double w =
            scale * uw[k] * std::exp(-mu * x * (1.0 - un[k])) * std::pow(1.0 - x * un[k], qw);
        lagrange_basis_at(xs, bary, x * un[k], basis);
        for (int j = 0; j < n; ++j) a(i, j) += w * basis[j];
      }
    }
  } else {
    // (I_1 [w g])(x) = (1-x)^{1+qw}/beta int_0^1 (1-u)^{qw} e^{-mu (1-x) u}
    //                  (x + (1-x) u)^{pw} g(x + (1-x) u) du
    gauss_jacobi_01(m, 0.0, qw, un, uw);
    for (int i = 0; i < n; ++i) {
      const double x = xs[i];
      const double scale = std::pow(1.0 - x, 1.0 + qw) / beta;
      for (int k = 0; k < m; ++k) {
        const double y = x + (1.0 - x) * un[k];
        const double w = scale * uw[k] * std::exp(-mu * (1.0 - x) * un[k]) * std::pow(y, pw);
        lagrange_basis_at(xs, bary, y, basis);
        for (int j = 0; j < n; ++j) a(i, j) += w * basis[j];
      }
    }
  }
  return GridOperator(grid, std::move(a), OperatorKind::composite, beta);
}

GridOperator cf_derivative(double beta, Side side, const QuadratureGrid& grid) {
  if (!(beta > 0.0) || !(beta < 1.0)) throw std::domain_error("cf_derivative: beta must be in (0,1)");
  Eigen::MatrixXd d = differentiation_matrix(grid);
  const double sign = (side == Side::left) ? 1.0 : -1.0;
  Eigen::MatrixXd a = sign * beta * d;
  a.diagonal().array() += 1.0 - beta;
  return GridOperator(grid, std::move(a),
                      side == Side::left ? OperatorKind::cf_left_derivative
                                         : OperatorKind::cf_right_derivative,
                      beta);
}

GridOperator multiplier_power(double c, const QuadratureGrid& grid) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(grid.size(), grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) a(i, i) = std::pow(grid.nodes[i], c);
  return GridOperator(grid, std::move(a), OperatorKind::multiplier, c);
}

GridOperator kernel_K(double alpha, const QuadratureGrid& grid) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) throw std::domain_error("kernel_K: alpha must be in (0,1)");
  // (K f)(x) = x^{a/2}/Gamma(a/2) * int_0^1 (1-u)^{a/2-1} u^{-a/2} f(x u) du.
  const double half = 0.5 * alpha;
  const double inv_gamma = 1.0 / std::tgamma(half);
  std::vector<double> un, uw;
  gauss_jacobi_01(rule_size(grid), -half, half - 1.0, un, uw);
  Eigen::MatrixXd a = assemble_scaled_rows(
      grid, un, uw, [&](double x) { return inv_gamma * std::pow(x, half); },
      [](double x, double u) { return x * u; });
  return GridOperator(grid, std::move(a), OperatorKind::composite, half);
}

GridOperator kernel_K_fbm(double alpha, const QuadratureGrid& grid) {
  if (!(alpha > 1.0) || !(alpha < 2.0)) throw std::domain_error("kernel_K_fbm: alpha must be in (1,2)");
  const double half = 0.5 * alpha;
  // Inner pair 0I^{1-a/2} tau^{a/2-1}, fused:
  //   (B f)(x) = 1/Gamma(1-a/2) * int_0^1 (1-u)^{-a/2} u^{a/2-1} f(x u) du
  const double inv_gamma = 1.0 / std::tgamma(1.0 - half);
  std::vector<double> un, uw;
  gauss_jacobi_01(rule_size(grid), half - 1.0, -half, un, uw);
  Eigen::MatrixXd b = assemble_scaled_rows(
      grid, un, uw, [&](double) { return inv_gamma; },
      [](double x, double u) { return x * u; });

  GridOperator outer = rl_integral(alpha - 1.0, Side::left, grid);
  Eigen::VectorXd mult(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) mult[i] = std::pow(grid.nodes[i], 1.0 - half);
  Eigen::MatrixXd a = outer.matrix() * mult.asDiagonal() * b;
  return GridOperator(grid, std::move(a), OperatorKind::composite, alpha - 1.0);
}

GridOperator kernel_KKstar_weighted(double alpha, const QuadratureGrid& grid) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::domain_error("kernel_KKstar_weighted: alpha must be in (0,1)");
  const double half = 0.5 * alpha;
  const double inv_gamma = 1.0 / std::tgamma(half);
  std::vector<double> un, uw;
  gauss_jacobi_01(rule_size(grid), half - 1.0, -half, un, uw);
  Eigen::MatrixXd a1 = assemble_scaled_rows(
      grid, un, uw, [&](double) { return inv_gamma; },
      [](double x, double u) { return x + (1.0 - x) * u; });
  gauss_jacobi_01(rule_size(grid), -alpha, half - 1.0, un, uw);
  Eigen::MatrixXd a2 = assemble_scaled_rows(
      grid, un, uw, [&](double) { return inv_gamma; },
      [](double x, double u) { return x * u; });
  return GridOperator(grid, a2 * a1, OperatorKind::composite, 0.0);
}

GridOperator regularized_inverse(const GridOperator& op, double lambda_reg) {
  const Eigen::MatrixXd& a = op.matrix();
  if (a.rows() != a.cols()) throw std::invalid_argument("regularized_inverse: operator must be square");
  Eigen::VectorXd pw = to_eigen(op.grid().plain_weights());
  Eigen::MatrixXd astar = pw.cwiseInverse().asDiagonal() * a.transpose() * pw.asDiagonal();
  Eigen::MatrixXd normal = astar * a;

  double lambda = lambda_reg;
  if (lambda < 0.0) {
    const double smax = a.jacobiSvd().singularValues()(0);
    lambda = 1e-10 * smax * smax;
  }
  if (lambda == 0.0) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    lu.setThreshold(1e-13);
    if (lu.rank() < a.rows())
      throw std::runtime_error("regularized_inverse: matrix singular to tolerance and lambda_reg = 0");
    return GridOperator(op.grid(), lu.inverse(), OperatorKind::composite, -op.order());
  }
  normal.diagonal().array() += lambda;
  Eigen::MatrixXd inv = normal.partialPivLu().solve(astar);
  return GridOperator(op.grid(), std::move(inv), OperatorKind::composite, -op.order());
}

Eigen::MatrixXd differentiation_matrix(const QuadratureGrid& grid) {
  const auto& x = grid.nodes;
  const int n = static_cast<int>(x.size());
  const std::vector<double> bw = barycentric_weights(x);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      d(i, j) = (bw[j] / bw[i]) / (x[i] - x[j]);
      row_sum += d(i, j);
    }
    d(i, i) = -row_sum;
  }
  return d;
}

Eigen::MatrixXd kernel_gram(const GridOperator& k) {
  Eigen::VectorXd pw = to_eigen(k.grid().plain_weights());
  return k.matrix() * pw.cwiseInverse().asDiagonal() * k.matrix().transpose();
}

}  // namespace fracpulse
