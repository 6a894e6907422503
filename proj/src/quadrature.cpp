#include "idpdg/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace idpdg {

std::pair<double, double> legendre(int n, double x) {
  if (n == 0) return {1.0, 0.0};
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  double dp;
  if (std::abs(x) == 1.0) {
    dp = std::pow(x, n + 1) * 0.5 * n * (n + 1.0);
  } else {
    dp = n * (x * p1 - p0) / (x * x - 1.0);
  }
  return {p1, dp};
}

std::pair<double, double> normalized_legendre(int n, double x) {
  const double scale = std::sqrt((2.0 * n + 1.0) / 2.0);
  const auto [p, dp] = legendre(n, x);
  return {scale * p, scale * dp};
}

Rule1D gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre rule needs n >= 1, got " + std::to_string(n));
  Rule1D r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = -std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(n, x).second;
    r.nodes(i) = x;
    r.weights(i) = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

Rule1D gauss_lobatto(int n) {
  if (n < 2) throw std::invalid_argument("Gauss-Lobatto rule needs n >= 2, got " + std::to_string(n));
  const int N = n - 1;
  Rule1D r;
  r.nodes.resize(n);
  r.weights.resize(n);
  r.nodes(0) = -1.0;
  r.nodes(N) = 1.0;
  // Interior nodes are the roots of P_N'; Newton on q = P_N' with
  // q' = (2x P_N' - N(N+1) P_N) / (1 - x^2).
  for (int i = 1; i < N; ++i) {
    double x = -std::cos(std::numbers::pi * i / N);
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(N, x);
      const double ddp = (2.0 * x * dp - N * (N + 1.0) * p) / (1.0 - x * x);
      const double dx = dp / ddp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes(i) = x;
  }
  for (int i = 0; i <= N; ++i) {
    const double p = legendre(N, r.nodes(i)).first;
    r.weights(i) = 2.0 / (N * (N + 1.0) * p * p);
  }
  return r;
}

Eigen::VectorXd lagrange_values(const Eigen::VectorXd& nodes, double x) {
  const int n = static_cast<int>(nodes.size());
  Eigen::VectorXd l = Eigen::VectorXd::Ones(n);
  for (int j = 0; j < n; ++j) {
    for (int m = 0; m < n; ++m) {
      if (m != j) l(j) *= (x - nodes(m)) / (nodes(j) - nodes(m));
    }
  }
  return l;
}

Eigen::VectorXd lagrange_derivatives(const Eigen::VectorXd& nodes, double x) {
  const int n = static_cast<int>(nodes.size());
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    for (int m = 0; m < n; ++m) {
      if (m == j) continue;
      double term = 1.0 / (nodes(j) - nodes(m));
      for (int l = 0; l < n; ++l) {
        if (l != j && l != m) term *= (x - nodes(l)) / (nodes(j) - nodes(l));
      }
      d(j) += term;
    }
  }
  return d;
}

Eigen::MatrixXd derivative_matrix(const Eigen::VectorXd& nodes) {
  const int n = static_cast<int>(nodes.size());
  Eigen::VectorXd w = Eigen::VectorXd::Ones(n);  // barycentric weights
  for (int j = 0; j < n; ++j)
    for (int m = 0; m < n; ++m)
      if (m != j) w(j) /= (nodes(j) - nodes(m));
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) D(i, j) = w(j) / w(i) / (nodes(i) - nodes(j));
    }
    D(i, i) = -D.row(i).sum();
  }
  return D;
}

}  // namespace idpdg
